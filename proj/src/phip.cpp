// Copyright 2026 The phnmr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "phnmr/phip.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace phnmr {

void RotorParams::validate() const {
  if (!(theta_r_k > 0.0)) throw std::invalid_argument("theta_r must be positive");
  if (j_max < 5) throw std::invalid_argument("j_max must be at least 5");
}

double para_fraction(double temperature_k, const RotorParams& rotor) {
  rotor.validate();
  if (!(temperature_k > 0.0)) throw std::invalid_argument("para_fraction: temperature must be positive");
  if (std::isinf(temperature_k)) return 0.25;
  const double x = rotor.theta_r_k / temperature_k;
  // j_max is a floor; the series continues until its terms vanish in double precision.
  double even = 0.0;
  double odd = 0.0;
  for (int j = 0;; ++j) {
    const double term = (2.0 * j + 1.0) * std::exp(-x * j * (j + 1.0));
    (j % 2 == 0 ? even : odd) += term;
    if (j >= rotor.j_max && term < 1e-18 * (even + odd)) break;
    if (j > 1000000) throw NumericError("para_fraction: series did not converge");
  }
  return even / (even + 3.0 * odd);
}

DensityState phip_state(double f) { return states::para_ortho(f); }

DensityState incoherent_closed_form(double f) {
  if (!(f >= 0.0 && f <= 1.0)) throw std::invalid_argument("F must lie in [0, 1]");
  const Matrix m = Matrix::Identity(4, 4) / 4.0 + (1.0 - 4.0 * f) / 3.0 * ops::IzSz();
  return DensityState(m);
}

void PhipExperiment::validate() const {
  if (!(tau_s >= 0.0) || !(tau_h_s >= 0.0)) throw std::invalid_argument("PHIP delays must be >= 0");
  if (!(singlet_fraction_in >= 0.0 && singlet_fraction_in <= 1.0))
    throw std::invalid_argument("singlet fraction must lie in [0, 1]");
  if (average_points < 1) throw std::invalid_argument("average_points must be positive");
  if (t1rho_s && !(*t1rho_s > 0.0)) throw std::invalid_argument("T1rho must be positive");
}

namespace {

Matrix incoherent_average(const SpinSystem& sys, const PhipExperiment& exp, const Matrix& rho0) {
  const Hamiltonian h = hamiltonian(sys, CouplingMode::weak);
  const int k_pts = exp.average_points;
  std::mt19937_64 rng(exp.seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Matrix acc = Matrix::Zero(4, 4);
  for (int k = 0; k < k_pts; ++k) {
    const double frac = (exp.averaging == AveragingMode::uniform_grid) ? (k + 0.5) / k_pts : uni(rng);
    acc += free_evolve(rho0, h, exp.tau_h_s * frac);
  }
  return acc / static_cast<double>(k_pts);
}

Matrix isotropic_average(const SpinSystem& sys, const PhipExperiment& exp, const Matrix& rho0) {
  const double tc = mlev16_supercycle_s(exp.mixing_nutation_hz);
  const Matrix uc = sequence_unitary(mlev16_supercycle(exp.mixing_nutation_hz), sys);
  const long cycles = std::max(1L, static_cast<long>(std::floor(exp.tau_h_s / tc + 1e-9)));
  const Matrix mixed = Matrix::Identity(4, 4) / 4.0;
  Matrix r = rho0;
  Matrix acc = Matrix::Zero(4, 4);
  for (long k = 0; k < cycles; ++k) {
    const double w = exp.t1rho_s ? std::exp(-static_cast<double>(k) * tc / *exp.t1rho_s) : 1.0;
    acc += w * r + (1.0 - w) * mixed;
    r = evolve(r, uc);
  }
  // long runs drift off unit trace through rounding in uc
  return acc / acc.trace().real();
}

Matrix altadena_state(const SpinSystem& sys, double f) {
  const double wi = sys.offsets_hz[0];
  const double ws = sys.offsets_hz[1];
  if (wi == ws) throw std::invalid_argument("ALTADENA needs distinct offsets");
  const int singlet_target = (ws > wi) ? 1 : 2;  // |01> or |10>
  const int triplet_target = 3 - singlet_target;
  Matrix m = Matrix::Zero(4, 4);
  const double t = (1.0 - f) / 3.0;
  m(singlet_target, singlet_target) = f;
  m(triplet_target, triplet_target) = t;
  m(0, 0) = t;
  m(3, 3) = t;
  return m;
}

}  // namespace

DensityState run_phip(const SpinSystem& sys, const PhipExperiment& exp) {
  sys.validate();
  exp.validate();
  if (sys.n_qubits != 2) throw std::invalid_argument("run_phip: two-spin system required");
  const DensityState rho_f = phip_state(exp.singlet_fraction_in);
  switch (exp.variant) {
    case PhipVariant::instantaneous:
      return rho_f;
    case PhipVariant::delayed:
      return free_evolve(rho_f, hamiltonian(sys, CouplingMode::weak), exp.tau_s);
    case PhipVariant::incoherent:
      return DensityState(hermitian_part(incoherent_average(sys, exp, rho_f.matrix())));
    case PhipVariant::isotropic:
      return DensityState(hermitian_part(isotropic_average(sys, exp, rho_f.matrix())));
    case PhipVariant::altadena:
      return DensityState(altadena_state(sys, exp.singlet_fraction_in));
  }
  throw std::invalid_argument("run_phip: unknown variant");
}

SignalVector signal_vector(const Matrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4) throw std::invalid_argument("signal: two-spin state required");
  static const char* labels[4] = {"+a", "+b", "a+", "b+"};
  SignalVector sv{};
  for (int i = 0; i < 4; ++i)
    sv[static_cast<std::size_t>(i)] = (rho * build_operator(labels[i], 2, Normalization::plain_tensor)).trace();
  return sv;
}

SignalVector signal(const Matrix& rho, const Pulse& detection, const SpinSystem& sys) {
  return signal_vector(evolve(rho, pulse_propagator(detection, sys)));
}

SignalVector signal(const DensityState& rho, const Pulse& detection, const SpinSystem& sys) {
  return signal(rho.matrix(), detection, sys);
}

SignalVector signal(const Matrix& rho, const PulseSequence& detection, const SpinSystem& sys) {
  return signal_vector(apply(rho, detection, sys));
}

SignalVector signal(const DensityState& rho, const PulseSequence& detection, const SpinSystem& sys) {
  return signal(rho.matrix(), detection, sys);
}

double enhancement(EnhancementCase c, double b, double delta_hz, double tau_s) {
  if (!(b > 0.0)) throw std::invalid_argument("enhancement: B must be positive");
  switch (c) {
    case EnhancementCase::altadena:
    case EnhancementCase::instantaneous:
    case EnhancementCase::incoherent_90Iy:
      return 2.0 / b;
    case EnhancementCase::incoherent_45y:
      return 1.0 / b;
    case EnhancementCase::delayed_90x:
      return 2.0 / b * std::sin(2.0 * kPi * delta_hz * tau_s);
  }
  throw std::invalid_argument("enhancement: unknown case");
}

double signal_enhancement(const SignalVector& sv, double b) {
  if (!(b > 0.0)) throw std::invalid_argument("enhancement: B must be positive");
  double m = 0.0;
  for (const auto& v : sv) m = std::max(m, std::abs(v));
  return m / (b / 8.0);
}

}  // namespace phnmr
