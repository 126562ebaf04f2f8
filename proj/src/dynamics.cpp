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

#include "phnmr/dynamics.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace phnmr {

namespace {

int qubits_of(const Matrix& m) {
  int n = 0;
  while ((Eigen::Index{1} << n) < m.rows()) ++n;
  return n;
}

void require_dims(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

Matrix rotation_2x2(double theta, double phi) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  Matrix r(2, 2);
  // cos(t/2) 1 - i sin(t/2) (cos(phi) sx + sin(phi) sy)
  r(0, 0) = c;
  r(1, 1) = c;
  r(0, 1) = Complex(0.0, -s) * std::polar(1.0, -phi);
  r(1, 0) = Complex(0.0, -s) * std::polar(1.0, phi);
  return r;
}

}  // namespace

// -------------------------------------------------------------- Hamiltonians

Hamiltonian hamiltonian(const SpinSystem& sys, CouplingMode mode) {
  sys.validate();
  const int n = sys.n_qubits;
  Matrix h = Matrix::Zero(1 << n, 1 << n);
  for (int i = 0; i < n; ++i) h += 2.0 * kPi * sys.offsets_hz[static_cast<std::size_t>(i)] * ops::spin('z', i, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double jij = sys.couplings_hz(i, j);
      if (jij == 0.0) continue;
      if (mode == CouplingMode::weak) {
        h += kPi * jij * 2.0 * ops::spin('z', i, n) * ops::spin('z', j, n);
      } else {
        Matrix dot = Matrix::Zero(1 << n, 1 << n);
        for (char a : {'x', 'y', 'z'}) dot += ops::spin(a, i, n) * ops::spin(a, j, n);
        h += kPi * jij * 2.0 * dot;
      }
    }
  }
  return Hamiltonian{hermitian_part(h), mode};
}

HamiltonianSplit split_two_spin(const SpinSystem& sys, CouplingMode mode) {
  sys.validate();
  if (sys.n_qubits != 2) throw std::invalid_argument("split_two_spin: two-spin system required");
  HamiltonianSplit s;
  const double wi = 2.0 * kPi * sys.offsets_hz[0];
  const double ws = 2.0 * kPi * sys.offsets_hz[1];
  s.sigma_rad_s = 0.5 * (wi + ws);
  s.delta_rad_s = 0.5 * (wi - ws);
  const double j = sys.j_hz();
  const Matrix coupling = (mode == CouplingMode::weak) ? Matrix(2.0 * ops::IzSz()) : Matrix(2.0 * ops::IdotS());
  s.commuting = s.sigma_rad_s * (ops::Iz() + ops::Sz()) + kPi * j * coupling;
  s.non_commuting = s.delta_rad_s * (ops::Iz() - ops::Sz());
  return s;
}

// ------------------------------------------------------------------ sequence

double element_duration(const SequenceElement& el) {
  return std::visit(
      [](const auto& e) -> double {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, Pulse>) return e.duration_s;
        if constexpr (std::is_same_v<T, Delay>) return e.t_s;
        if constexpr (std::is_same_v<T, GradientCrush>) return e.duration_s;
        if constexpr (std::is_same_v<T, ZRotation>) return 0.0;
        if constexpr (std::is_same_v<T, MixingBlock>) return e.duration_s;
        if constexpr (std::is_same_v<T, Decohere>) return e.t_s;
        return 0.0;
      },
      el);
}

double PulseSequence::total_duration() const {
  double t = 0.0;
  for (const auto& e : elements) t += element_duration(e);
  return t;
}

PulseSequence& PulseSequence::append(const PulseSequence& other) {
  elements.insert(elements.end(), other.elements.begin(), other.elements.end());
  return *this;
}

bool PulseSequence::is_unitary() const {
  for (const auto& e : elements)
    if (std::holds_alternative<GradientCrush>(e) || std::holds_alternative<Decohere>(e)) return false;
  return true;
}

Pulse pulse_deg(double flip_deg, double phase_deg, int qubit) {
  Pulse p;
  p.flip_rad = flip_deg * kPi / 180.0;
  p.phase_rad = phase_deg * kPi / 180.0;
  p.qubit = qubit;
  return p;
}

// ---------------------------------------------------------------- propagators

Matrix propagator(const Matrix& h, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("propagator: time must be >= 0");
  if (h.rows() != h.cols()) throw std::invalid_argument("propagator: Hamiltonian must be square");
  const Matrix hh = hermitian_part(h);
  if (hh.isDiagonal(0.0)) {
    Matrix u = Matrix::Zero(h.rows(), h.cols());
    for (Eigen::Index i = 0; i < h.rows(); ++i) u(i, i) = std::polar(1.0, -hh(i, i).real() * t);
    return u;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(hh);
  Eigen::VectorXcd ph(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i) ph(i) = std::polar(1.0, -es.eigenvalues()(i) * t);
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix propagator(const Hamiltonian& h, double t) { return propagator(h.matrix, t); }

Matrix pulse_propagator(const Pulse& p, const SpinSystem& sys) {
  const int n = sys.n_qubits;
  if (p.qubit != kAllQubits && (p.qubit < 0 || p.qubit >= n))
    throw std::invalid_argument("pulse target qubit out of range");
  if (!std::isfinite(p.flip_rad) || !std::isfinite(p.phase_rad)) throw std::invalid_argument("pulse angles must be finite");
  if (p.duration_s < 0.0) throw std::invalid_argument("pulse duration must be >= 0");
  const double theta = p.flip_rad + p.flip_error_rad;
  if (p.duration_s > 0.0) {
    const double w1 = theta / p.duration_s;  // rad/s
    Matrix h = hamiltonian(sys, CouplingMode::strong).matrix;
    for (int q = 0; q < n; ++q) {
      if (p.qubit != kAllQubits && p.qubit != q) continue;
      h += w1 * (std::cos(p.phase_rad) * ops::spin('x', q, n) + std::sin(p.phase_rad) * ops::spin('y', q, n));
    }
    return propagator(h, p.duration_s);
  }
  const Matrix r = rotation_2x2(theta, p.phase_rad);
  const Matrix id = Matrix::Identity(2, 2);
  Matrix u = (p.qubit == kAllQubits || p.qubit == 0) ? r : id;
  for (int q = 1; q < n; ++q) u = ops::kron(u, (p.qubit == kAllQubits || p.qubit == q) ? r : id);
  return u;
}

Matrix zrotation_propagator(const ZRotation& z, int n) {
  if (static_cast<int>(z.angles_rad.size()) != n) throw std::invalid_argument("z-rotation needs one angle per qubit");
  Matrix h = Matrix::Zero(1 << n, 1 << n);
  for (int q = 0; q < n; ++q) h += z.angles_rad[static_cast<std::size_t>(q)] * ops::spin('z', q, n);
  return propagator(h, 1.0);
}

// ------------------------------------------------------------------- evolution

Matrix evolve(const Matrix& rho, const Matrix& u) {
  require_dims(rho, u, "evolve");
  return u * rho * u.adjoint();
}

DensityState evolve(const DensityState& rho, const Matrix& u) {
  return DensityState(hermitian_part(evolve(rho.matrix(), u)));
}

Matrix free_evolve(const Matrix& rho, const Hamiltonian& h, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("free_evolve: time must be >= 0");
  return evolve(rho, propagator(h, t));
}

DensityState free_evolve(const DensityState& rho, const Hamiltonian& h, double t) {
  return DensityState(hermitian_part(free_evolve(rho.matrix(), h, t)));
}

// ------------------------------------------------------------------- gradients

Matrix crush(const Matrix& rho, GradientMode mode) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("crush: square matrix required");
  const int n = qubits_of(rho);
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (Eigen::Index r = 0; r < rho.rows(); ++r) {
    for (Eigen::Index s = 0; s < rho.cols(); ++s) {
      const bool keep = (mode == GradientMode::heteronuclear)
                            ? (r == s)
                            : coherence_order(static_cast<int>(r), static_cast<int>(s), n) == 0;
      if (keep) out(r, s) = rho(r, s);
    }
  }
  return out;
}

DensityState crush(const DensityState& rho, GradientMode mode) { return DensityState(crush(rho.matrix(), mode)); }

Matrix crush_sliced(const Matrix& rho, int n_slices, double phase_span_rad) {
  if (n_slices < 2) throw std::invalid_argument("crush_sliced: need at least two slices");
  const int n = qubits_of(rho);
  const Matrix fz = ops::total('z', n);
  Matrix acc = Matrix::Zero(rho.rows(), rho.cols());
  for (int k = 0; k < n_slices; ++k) {
    const double phi = phase_span_rad * static_cast<double>(k) / static_cast<double>(n_slices);
    acc += evolve(rho, propagator(fz, 1.0 * phi));
  }
  return acc / static_cast<double>(n_slices);
}

DensityState crush_sliced(const DensityState& rho, int n_slices, double phase_span_rad) {
  return DensityState(hermitian_part(crush_sliced(rho.matrix(), n_slices, phase_span_rad)));
}

Matrix timed_gradient(const Matrix& rho, const SpinSystem& sys, double t_g, GradientMode mode) {
  return crush(free_evolve(rho, hamiltonian(sys, CouplingMode::weak), t_g), mode);
}

DensityState timed_gradient(const DensityState& rho, const SpinSystem& sys, double t_g, GradientMode mode) {
  return DensityState(hermitian_part(timed_gradient(rho.matrix(), sys, t_g, mode)));
}

// ----------------------------------------------------------------- decoherence

namespace {

struct ChannelRates {
  double coherence;    // per-qubit off-diagonal factor
  double depolarized;  // weight moved to the identity
};

ChannelRates rates(double t, const SpinSystem& sys) {
  if (!(t >= 0.0)) throw std::invalid_argument("decohere: time must be >= 0");
  if (!(sys.t1_s > 0.0) || !(sys.t2_s > 0.0)) throw std::invalid_argument("decohere: T1, T2 must be positive");
  ChannelRates r;
  r.coherence = std::isinf(sys.t2_s) ? 1.0 : std::exp(-t / sys.t2_s);
  r.depolarized = std::isinf(sys.t1_s) ? 0.0 : -std::expm1(-t / sys.t1_s);
  return r;
}

}  // namespace

std::vector<Matrix> decoherence_kraus(double t, const SpinSystem& sys) {
  const ChannelRates r = rates(t, sys);
  const int n = sys.n_qubits;
  const int d = 1 << n;
  // Phase damping on each qubit.
  std::vector<Matrix> ks{Matrix::Identity(d, d)};
  const double k0 = std::sqrt((1.0 + r.coherence) / 2.0);
  const double k1 = std::sqrt((1.0 - r.coherence) / 2.0);
  for (int q = 0; q < n; ++q) {
    const Matrix z = 2.0 * ops::spin('z', q, n);
    std::vector<Matrix> next;
    for (const auto& k : ks) {
      next.push_back(k0 * k);
      next.push_back(k1 * (z * k));
    }
    ks.swap(next);
  }
  // Global depolarization over all Pauli strings.
  const double dd = static_cast<double>(d) * d;
  std::vector<Matrix> paulis{Matrix::Identity(1, 1)};
  for (int q = 0; q < n; ++q) {
    std::vector<Matrix> next;
    for (const auto& p : paulis)
      for (char a : {'E', 'x', 'y', 'z'})
        next.push_back(ops::kron(p, a == 'E' ? Matrix(Matrix::Identity(2, 2)) : ops::pauli(a)));
    paulis.swap(next);
  }
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < paulis.size(); ++i) {
    const double w = (i == 0) ? 1.0 - r.depolarized + r.depolarized / dd : r.depolarized / dd;
    if (w == 0.0) continue;
    for (const auto& k : ks) out.push_back(std::sqrt(w) * (paulis[i] * k));
  }
  return out;
}

Matrix decohere(const Matrix& rho, double t, const SpinSystem& sys) {
  const ChannelRates r = rates(t, sys);
  if (rho.rows() != (Eigen::Index{1} << sys.n_qubits) || rho.rows() != rho.cols())
    throw std::invalid_argument("decohere: dimension mismatch");
  Matrix out = rho;
  for (Eigen::Index i = 0; i < rho.rows(); ++i)
    for (Eigen::Index j = 0; j < rho.cols(); ++j)
      out(i, j) *= std::pow(r.coherence, std::popcount(static_cast<unsigned>(i ^ j)));
  const double d = static_cast<double>(rho.rows());
  return (1.0 - r.depolarized) * out + r.depolarized * rho.trace() / d * Matrix::Identity(rho.rows(), rho.cols());
}

DensityState decohere(const DensityState& rho, double t, const SpinSystem& sys) {
  return DensityState(hermitian_part(decohere(rho.matrix(), t, sys)));
}

// ------------------------------------------------------------- sequence engine

namespace {

Matrix mixing_unitary(const MixingBlock& m, const SpinSystem& sys, double* remainder) {
  const double tc = mlev16_supercycle_s(m.nutation_hz);
  const auto cycles = static_cast<long>(std::floor(m.duration_s / tc + 1e-9));
  if (cycles < 1) throw std::invalid_argument("mixing block shorter than one MLEV-16 supercycle");
  const Matrix uc = sequence_unitary(mlev16_supercycle(m.nutation_hz), sys);
  Matrix u = Matrix::Identity(uc.rows(), uc.cols());
  for (long k = 0; k < cycles; ++k) u = uc * u;
  *remainder = std::max(0.0, m.duration_s - static_cast<double>(cycles) * tc);
  return u;
}

Matrix element_unitary(const SequenceElement& el, const SpinSystem& sys, CouplingMode mode) {
  if (const auto* p = std::get_if<Pulse>(&el)) return pulse_propagator(*p, sys);
  if (const auto* d = std::get_if<Delay>(&el)) return propagator(hamiltonian(sys, mode), d->t_s);
  if (const auto* z = std::get_if<ZRotation>(&el)) return zrotation_propagator(*z, sys.n_qubits);
  if (const auto* m = std::get_if<MixingBlock>(&el)) {
    double rem = 0.0;
    const Matrix u = mixing_unitary(*m, sys, &rem);
    return propagator(hamiltonian(sys, mode), rem) * u;
  }
  throw std::invalid_argument("sequence element is not unitary");
}

}  // namespace

Matrix apply(const Matrix& rho, const PulseSequence& seq, const SpinSystem& sys, CouplingMode mode) {
  sys.validate();
  if (rho.rows() != sys.dim() || rho.cols() != sys.dim()) throw std::invalid_argument("apply: dimension mismatch");
  Matrix r = rho;
  for (const auto& el : seq.elements) {
    if (element_duration(el) < 0.0) throw std::invalid_argument("sequence durations must be >= 0");
    if (const auto* g = std::get_if<GradientCrush>(&el)) {
      r = crush(free_evolve(r, hamiltonian(sys, mode), g->duration_s), g->mode);
    } else if (const auto* d = std::get_if<Decohere>(&el)) {
      r = decohere(r, d->t_s, sys);
    } else {
      r = evolve(r, element_unitary(el, sys, mode));
    }
  }
  return r;
}

DensityState apply(const DensityState& rho, const PulseSequence& seq, const SpinSystem& sys, CouplingMode mode) {
  return DensityState(hermitian_part(apply(rho.matrix(), seq, sys, mode)));
}

Matrix sequence_unitary(const PulseSequence& seq, const SpinSystem& sys, CouplingMode mode) {
  sys.validate();
  Matrix u = Matrix::Identity(sys.dim(), sys.dim());
  for (const auto& el : seq.elements) u = element_unitary(el, sys, mode) * u;
  return u;
}

// ---------------------------------------------------------- composite blocks

PulseSequence spin_echo(double tau_s) {
  PulseSequence s;
  s.add(Delay{tau_s / 2.0}).add(pulse_deg(180, 0)).add(Delay{tau_s / 2.0});
  return s;
}

PulseSequence jump_return_90Iy(const SpinSystem& sys) {
  const double delta = sys.delta_hz();
  if (delta == 0.0) throw std::invalid_argument("jump-return: delta = 0 leaves the delay undefined");
  if (delta < 0.0) throw std::invalid_argument("jump-return: spin I must sit at +delta/2");
  if (std::abs(sys.offsets_hz[0] + sys.offsets_hz[1]) > 1e-9 * std::abs(delta))
    throw std::invalid_argument("jump-return: transmitter must be centred");
  PulseSequence s;
  s.add(pulse_deg(90, 45)).add(Delay{1.0 / (4.0 * delta)}).add(pulse_deg(90, 180));
  return s;
}

double mlev16_supercycle_s(double nutation_hz) {
  if (!(nutation_hz > 0.0)) throw std::invalid_argument("MLEV-16: nutation frequency must be positive");
  return 16.0 / nutation_hz;
}

PulseSequence mlev16_supercycle(double nutation_hz) {
  const double t90 = 0.25 / nutation_hz;
  auto composite = [&](PulseSequence& s, bool inverted) {
    const double ph = inverted ? 180.0 : 0.0;
    Pulse a = pulse_deg(90, 0 + ph);
    a.duration_s = t90;
    Pulse b = pulse_deg(180, 90 + ph);
    b.duration_s = 2.0 * t90;
    s.add(a).add(b).add(a);
  };
  // R R Rb Rb, Rb R R Rb, Rb Rb R R, R Rb Rb R
  static const bool pattern[16] = {false, false, true, true, true, false, false, true,
                                   true,  true,  false, false, false, true, true, false};
  PulseSequence s;
  for (bool inv : pattern) composite(s, inv);
  return s;
}

PulseSequence mlev16(const SpinSystem& sys, double duration_s, double nutation_hz) {
  sys.validate();
  const double tc = mlev16_supercycle_s(nutation_hz);
  const auto cycles = static_cast<long>(std::floor(duration_s / tc + 1e-9));
  if (cycles < 1) throw std::invalid_argument("MLEV-16: duration shorter than one supercycle");
  const PulseSequence one = mlev16_supercycle(nutation_hz);
  PulseSequence s;
  for (long k = 0; k < cycles; ++k) s.append(one);
  const double rem = duration_s - static_cast<double>(cycles) * tc;
  if (rem > 0.0) s.add(Delay{rem});
  return s;
}

}  // namespace phnmr
