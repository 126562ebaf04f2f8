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

#include "doctest.h"
#include "oracle.hpp"
#include "phnmr/phip.hpp"

using namespace phnmr;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

double sv_dist(const SignalVector& a, const SignalVector& b) {
  double d = 0;
  for (std::size_t k = 0; k < 4; ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

// even/odd rotational partition sums summed to convergence
double para_oracle(double t, double theta) {
  double even = 0, odd = 0;
  for (int j = 0; j < 400; ++j) {
    const double w = (2 * j + 1) * std::exp(-theta * j * (j + 1) / t);
    (j % 2 ? odd : even) += w;
  }
  return even / (even + 3 * odd);
}

const SpinSystem kSys = SpinSystem::two_spin(492, 4.6);

}  // namespace

TEST_CASE("para fraction") {
  CHECK(para_fraction(77) == doctest::Approx(0.5047).epsilon(0.02));
  CHECK(std::abs(para_fraction(20) - 0.9981) < 1e-3);
  CHECK(para_fraction(kInf) == 0.25);
  CHECK(para_fraction(1e7) == doctest::Approx(0.25).epsilon(1e-4));
  CHECK(para_fraction(0.5) == doctest::Approx(1.0));
  for (double t : {18.0, 40.0, 77.0, 150.0, 300.0, 1000.0})
    CHECK(para_fraction(t) == doctest::Approx(para_oracle(t, 85.0)).epsilon(1e-12));
  double prev = 1.0;
  for (double t = 5; t < 2000; t *= 1.2) {
    const double f = para_fraction(t);
    CHECK(f <= prev + 1e-15);
    prev = f;
  }
  CHECK(para_fraction(77, RotorParams{87.6, 10}) == doctest::Approx(para_oracle(77, 87.6)).epsilon(1e-12));
  CHECK_THROWS_AS(para_fraction(0.0), std::invalid_argument);
  CHECK_THROWS_AS(para_fraction(-3.0), std::invalid_argument);
}

TEST_CASE("phip states") {
  CHECK(max_abs(phip_state(1.0).matrix() - oracle::singlet()) < 1e-15);
  CHECK(max_abs(phip_state(0.25).matrix() - oracle::one() / 4.0) < 1e-15);
}

TEST_CASE("instantaneous and delayed PASADENA") {
  PhipExperiment ex;
  CHECK(max_abs(run_phip(kSys, ex).matrix() - oracle::singlet()) < 1e-15);

  const double d = kSys.delta_hz();
  ex.variant = PhipVariant::delayed;
  for (double tau : {1e-4, 3.7e-4, 1.1e-3}) {
    ex.tau_s = tau;
    const Matrix got = run_phip(kSys, ex).matrix();
    const double a = 2 * oracle::pi * d * tau;
    const Matrix want = oracle::one() / 4.0 - oracle::zqx() * std::cos(a) - oracle::zqy() * std::sin(a) - oracle::izsz();
    CHECK(max_abs(got - want) < 1e-10);
    PhipExperiment later = ex;
    later.tau_s = tau + 3.0 / d;
    CHECK(max_abs(run_phip(kSys, later).matrix() - got) < 1e-10);
  }
  ex.tau_s = 1.0 / d;
  CHECK(max_abs(run_phip(kSys, ex).matrix() - oracle::singlet()) < 1e-10);
}

TEST_CASE("incoherent PASADENA") {
  const double d = kSys.delta_hz();
  PhipExperiment ex;
  ex.variant = PhipVariant::incoherent;
  ex.tau_h_s = 100.0 / d;
  ex.average_points = 2048;
  const Matrix want = oracle::one() / 4.0 - oracle::izsz();
  const Matrix grid = run_phip(kSys, ex).matrix();
  CHECK(max_abs(grid - want) < 1e-2);
  CHECK(max_abs(incoherent_closed_form(1.0).matrix() - want) < 1e-15);

  ex.averaging = AveragingMode::monte_carlo;
  ex.seed = 42;
  const Matrix mc = run_phip(kSys, ex).matrix();
  CHECK(max_abs(mc - want) < 5e-2);
  CHECK(max_abs(run_phip(kSys, ex).matrix() - mc) == 0.0);

  // residual shrinks as tau_h grows
  ex.averaging = AveragingMode::uniform_grid;
  double prev = 1.0;
  for (double n : {3.3, 10.3, 30.3, 100.3}) {
    ex.tau_h_s = n / d;
    const double r = max_abs(run_phip(kSys, ex).matrix() - want);
    CHECK(r < prev);
    prev = r;
  }
}

TEST_CASE("ALTADENA endpoint") {
  SpinSystem alt = kSys;
  alt.offsets_hz = {-246.0, 246.0};
  PhipExperiment ex;
  ex.variant = PhipVariant::altadena;
  const Matrix got = run_phip(alt, ex).matrix();
  CHECK(max_abs(got - (oracle::one() / 4.0 + 0.5 * (oracle::I('z') - oracle::S('z') - 2.0 * oracle::izsz()))) < 1e-15);
  CHECK(got(1, 1).real() == doctest::Approx(1.0));
  // spin order swaps when S sits below I
  CHECK(run_phip(kSys, ex)(2, 2).real() == doctest::Approx(1.0));
}

TEST_CASE("isotropic PASADENA keeps the singlet") {
  PhipExperiment ex;
  ex.variant = PhipVariant::isotropic;
  ex.tau_h_s = 20 * mlev16_supercycle_s(1e4);
  CHECK(singlet_fraction(run_phip(kSys, ex)) > 0.99);
  ex.t1rho_s = 0.6;
  ex.tau_h_s = 0.6;
  const double f = singlet_fraction(run_phip(kSys, ex));
  CHECK(f < 0.99);
  CHECK(f > 0.25);
}

TEST_CASE("non-two-qubit systems are rejected") {
  SpinSystem three;
  three.n_qubits = 3;
  three.offsets_hz = {0, 1, 2};
  three.couplings_hz = RealMatrix::Zero(3, 3);
  CHECK_THROWS_AS(run_phip(three, PhipExperiment{}), std::invalid_argument);
}

TEST_CASE("signal vectors") {
  const double b = 6.48e-5;
  const auto th = states::thermal(2, b, ThermalSign::reference);
  const auto sv = signal(th, pulse_deg(90, 90), kSys);
  const auto osv = oracle::signal(oracle::conj(th.matrix(), oracle::hard(oracle::pi / 2, oracle::pi / 2)));
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(std::abs(sv[k] - osv.v[k]) < 1e-15);
    CHECK(std::abs(sv[k] - b / 8) < 1e-15);
  }
  // equilibrium sign gives the mirror image
  const auto eq = signal(states::thermal(2, b), pulse_deg(90, 90), kSys);
  CHECK(std::abs(eq[0] + b / 8) < 1e-15);

  // hard pulses leave the instantaneous singlet invisible
  for (double th_deg : {30.0, 45.0, 90.0, 180.0})
    for (double ph : {0.0, 90.0, 217.0}) {
      const auto s = signal(states::singlet(), pulse_deg(th_deg, ph), kSys);
      for (const auto& v : s) CHECK(std::abs(v) < 1e-15);
    }

  // incoherent state against theta: magnitude sin(2 theta)/8
  const DensityState inc(oracle::one() / 4.0 - oracle::izsz());
  for (double t : {0.2, 0.5, 0.9}) {
    const auto s = signal(inc, Pulse{t, oracle::pi / 2}, kSys);
    CHECK(std::abs(std::abs(s[0]) - std::sin(2 * t) / 8) < 1e-15);
    CHECK(std::abs(s[0] + s[1]) < 1e-15);
  }

  // half-gradient product then 90I_y
  const auto half = signal(DensityState(oracle::one() / 4.0 + oracle::izsz()), pulse_deg(90, 90, 0), kSys);
  CHECK(sv_dist(half, SignalVector{Complex(0.25), Complex(-0.25), Complex(0), Complex(0)}) < 1e-15);

  // delayed state, selective 90I_y: I pair fixed, S pair rotated by 2 pi delta tau
  PhipExperiment ex;
  ex.variant = PhipVariant::delayed;
  ex.tau_s = 1.7e-4;
  const auto ds = signal(run_phip(kSys, ex), pulse_deg(90, 90, 0), kSys);
  CHECK(std::abs(ds[0] + 0.25) < 1e-12);
  CHECK(std::abs(ds[1] - 0.25) < 1e-12);
  CHECK(std::abs(std::abs(ds[2]) - 0.25) < 1e-12);
  CHECK(std::abs(ds[2] + ds[3]) < 1e-12);
  CHECK(std::abs(std::arg(ds[2] / Complex(0.25)) ) == doctest::Approx(2 * oracle::pi * 492 * 1.7e-4).epsilon(1e-9));
}

TEST_CASE("enhancements") {
  const double b = 6.48e-5;
  CHECK(enhancement(EnhancementCase::altadena, b) == doctest::Approx(30864).epsilon(5e-3));
  CHECK(enhancement(EnhancementCase::incoherent_45y, b) == doctest::Approx(15432).epsilon(5e-3));
  CHECK(enhancement(EnhancementCase::delayed_90x, b, 492, 1.0 / 492) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK_THROWS_AS(enhancement(EnhancementCase::altadena, 0.0), std::invalid_argument);

  // ratios from simulated signals reproduce the closed forms
  SpinSystem alt = kSys;
  alt.offsets_hz = {-246.0, 246.0};
  PhipExperiment ex;
  ex.variant = PhipVariant::altadena;
  CHECK(signal_enhancement(signal(run_phip(alt, ex), pulse_deg(90, 90), alt), b) ==
        doctest::Approx(enhancement(EnhancementCase::altadena, b)).epsilon(1e-9));
  CHECK(signal_enhancement(signal(states::singlet(), pulse_deg(90, 90, 0), kSys), b) ==
        doctest::Approx(enhancement(EnhancementCase::instantaneous, b)).epsilon(1e-9));
  CHECK(signal_enhancement(signal(incoherent_closed_form(1.0), pulse_deg(45, 90), kSys), b) ==
        doctest::Approx(enhancement(EnhancementCase::incoherent_45y, b)).epsilon(1e-9));
  ex.variant = PhipVariant::delayed;
  ex.tau_s = 2.1e-4;
  CHECK(signal_enhancement(signal(run_phip(kSys, ex), pulse_deg(90, 0), kSys), b) ==
        doctest::Approx(std::abs(enhancement(EnhancementCase::delayed_90x, b, 492, 2.1e-4))).epsilon(1e-9));
}
