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

#include "phnmr/spin_core.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace phnmr {

namespace {

constexpr double kHermTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kPsdSlack = -1e-10;

bool is_power_of_two(Eigen::Index d) { return d > 0 && (d & (d - 1)) == 0; }

int qubits_for_dim(Eigen::Index d) {
  int n = 0;
  while ((Eigen::Index{1} << n) < d) ++n;
  return n;
}

Matrix factor_matrix(char f) {
  Matrix m = Matrix::Zero(2, 2);
  switch (f) {
    case 'E': m = Matrix::Identity(2, 2); break;
    case 'x': m(0, 1) = 0.5; m(1, 0) = 0.5; break;
    case 'y': m(0, 1) = Complex(0, -0.5); m(1, 0) = Complex(0, 0.5); break;
    case 'z': m(0, 0) = 0.5; m(1, 1) = -0.5; break;
    case '+': m(0, 1) = 1.0; break;
    case '-': m(1, 0) = 1.0; break;
    case 'a': m(0, 0) = 1.0; break;
    case 'b': m(1, 1) = 1.0; break;
    default: throw std::invalid_argument(std::string("unknown operator factor '") + f + "'");
  }
  return m;
}

const char* basis_alphabet(Basis b) {
  switch (b) {
    case Basis::cartesian: return "Exyz";
    case Basis::spherical: return "E+-z";
    case Basis::polarization: return "xyab";
  }
  return "Exyz";
}

}  // namespace

// ---------------------------------------------------------------- SpinSystem

SpinSystem SpinSystem::two_spin(double delta_hz, double j_hz, double t1_s, double t2_s,
                                double boltzmann_factor) {
  SpinSystem s;
  s.n_qubits = 2;
  s.offsets_hz = {delta_hz / 2.0, -delta_hz / 2.0};
  s.couplings_hz = RealMatrix::Zero(2, 2);
  s.couplings_hz(0, 1) = j_hz;
  s.couplings_hz(1, 0) = j_hz;
  s.t1_s = t1_s;
  s.t2_s = t2_s;
  s.boltzmann_factor = boltzmann_factor;
  s.validate();
  return s;
}

void SpinSystem::validate() const {
  if (n_qubits < 1 || n_qubits > 10) throw std::invalid_argument("n_qubits must be in [1, 10]");
  if (static_cast<int>(offsets_hz.size()) != n_qubits)
    throw std::invalid_argument("offsets size must equal n_qubits");
  if (couplings_hz.rows() != n_qubits || couplings_hz.cols() != n_qubits)
    throw std::invalid_argument("couplings must be n_qubits x n_qubits");
  for (int i = 0; i < n_qubits; ++i) {
    if (couplings_hz(i, i) != 0.0) throw std::invalid_argument("J_ii must be zero");
    for (int j = 0; j < n_qubits; ++j)
      if (couplings_hz(i, j) != couplings_hz(j, i)) throw std::invalid_argument("couplings must be symmetric");
  }
  if (!(t1_s > 0.0) || !(t2_s > 0.0)) throw std::invalid_argument("relaxation times must be positive");
  if (std::isfinite(t1_s) && std::isfinite(t2_s) && t2_s > t1_s)
    throw std::invalid_argument("t2 must not exceed t1");
  if (!(boltzmann_factor > 0.0 && boltzmann_factor < 1.0))
    throw std::invalid_argument("boltzmann_factor must lie in (0, 1)");
}

double SpinSystem::delta_hz() const {
  if (n_qubits != 2) throw std::invalid_argument("delta is defined for two-spin systems");
  return offsets_hz[0] - offsets_hz[1];
}

double SpinSystem::j_hz() const {
  if (n_qubits != 2) throw std::invalid_argument("J is defined here for two-spin systems");
  return couplings_hz(0, 1);
}

// -------------------------------------------------------------- DensityState

std::string DensityState::check(const Matrix& m) {
  if (m.rows() != m.cols() || !is_power_of_two(m.rows())) return "matrix must be square with dimension 2^n";
  if (!m.allFinite()) return "matrix has non-finite entries";
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kHermTol) return "matrix is not Hermitian";
  const Complex tr = m.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > kTraceTol) {
    std::ostringstream os;
    os << "trace " << tr.real() << " differs from 1";
    return os.str();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < kPsdSlack) return "matrix is not positive semidefinite";
  return {};
}

DensityState::DensityState(Matrix m) : m_(std::move(m)) {
  const std::string err = check(m_);
  if (!err.empty()) throw std::invalid_argument("invalid density state: " + err);
}

int DensityState::n_qubits() const { return qubits_for_dim(m_.rows()); }

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

// ------------------------------------------------------------------ operators

int OperatorLabel::non_identity() const {
  int k = 0;
  for (char c : factors)
    if (c != 'E') ++k;
  return k;
}

Matrix build_operator(const OperatorLabel& label, int n) {
  if (n < 1) throw std::invalid_argument("qubit count must be positive");
  if (static_cast<int>(label.factors.size()) != n)
    throw std::invalid_argument("label '" + label.factors + "' does not match qubit count");
  Matrix m = factor_matrix(label.factors[0]);
  for (int i = 1; i < n; ++i) m = ops::kron(m, factor_matrix(label.factors[i]));
  if (label.norm == Normalization::product_operator) {
    const int k = label.non_identity();
    m *= (k == 0) ? 0.5 : std::ldexp(1.0, k - 1);
  }
  return m;
}

Matrix build_operator(const std::string& factors, int n, Normalization norm) {
  return build_operator(OperatorLabel{factors, norm}, n);
}

std::vector<std::string> basis_labels(Basis basis, int n) {
  const std::string alpha = basis_alphabet(basis);
  std::vector<std::string> out;
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= 4;
  out.reserve(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::string s(static_cast<std::size_t>(n), 'E');
    std::size_t v = idx;
    for (int q = n - 1; q >= 0; --q) {
      s[static_cast<std::size_t>(q)] = alpha[v % 4];
      v /= 4;
    }
    out.push_back(s);
  }
  return out;
}

BasisExpansion expand(const Matrix& rho, Basis basis) {
  if (rho.rows() != rho.cols() || !is_power_of_two(rho.rows()))
    throw std::invalid_argument("expand: matrix must be square with dimension 2^n");
  const int n = qubits_for_dim(rho.rows());
  if (n < 1) throw std::invalid_argument("expand: need at least one qubit");
  BasisExpansion e;
  e.basis = basis;
  e.n_qubits = n;
  for (const auto& lab : basis_labels(basis, n)) {
    const Matrix l = build_operator(lab, n);
    const Complex num = (l.adjoint() * rho).trace();
    const Complex den = (l.adjoint() * l).trace();
    e.coefficients[lab] = num / den;
  }
  return e;
}

BasisExpansion expand(const DensityState& rho, Basis basis) { return expand(rho.matrix(), basis); }

Complex BasisExpansion::coefficient(const std::string& label) const {
  auto it = coefficients.find(label);
  if (it == coefficients.end()) throw std::invalid_argument("label '" + label + "' not in expansion");
  return it->second;
}

Matrix BasisExpansion::reconstruct() const {
  const int d = 1 << n_qubits;
  Matrix m = Matrix::Zero(d, d);
  for (const auto& [lab, c] : coefficients) m += c * build_operator(lab, n_qubits);
  return m;
}

int coherence_order(int r, int s, int /*n*/) {
  return std::popcount(static_cast<unsigned>(s)) - std::popcount(static_cast<unsigned>(r));
}

std::map<int, Matrix> coherence_decompose(const Matrix& rho) {
  if (rho.rows() != rho.cols() || !is_power_of_two(rho.rows()))
    throw std::invalid_argument("coherence_decompose: matrix must be square with dimension 2^n");
  const int n = qubits_for_dim(rho.rows());
  const int d = static_cast<int>(rho.rows());
  std::map<int, Matrix> out;
  for (int p = -n; p <= n; ++p) out[p] = Matrix::Zero(d, d);
  for (int r = 0; r < d; ++r)
    for (int s = 0; s < d; ++s) out[coherence_order(r, s, n)](r, s) = rho(r, s);
  return out;
}

namespace ops {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix identity(int n) { return Matrix::Identity(1 << n, 1 << n); }

Matrix spin(char axis, int qubit, int n) {
  if (qubit < 0 || qubit >= n) throw std::invalid_argument("qubit index out of range");
  std::string f(static_cast<std::size_t>(n), 'E');
  f[static_cast<std::size_t>(qubit)] = axis;
  return build_operator(f, n, Normalization::plain_tensor);
}

Matrix total(char axis, int n) {
  Matrix m = Matrix::Zero(1 << n, 1 << n);
  for (int q = 0; q < n; ++q) m += spin(axis, q, n);
  return m;
}

Matrix pauli(char axis) { return 2.0 * factor_matrix(axis); }

Matrix Ix() { return spin('x', 0, 2); }
Matrix Iy() { return spin('y', 0, 2); }
Matrix Iz() { return spin('z', 0, 2); }
Matrix Sx() { return spin('x', 1, 2); }
Matrix Sy() { return spin('y', 1, 2); }
Matrix Sz() { return spin('z', 1, 2); }
Matrix IzSz() { return Iz() * Sz(); }
Matrix IdotS() { return Ix() * Sx() + Iy() * Sy() + Iz() * Sz(); }
Matrix ZQx() { return Ix() * Sx() + Iy() * Sy(); }
Matrix ZQy() { return Iy() * Sx() - Ix() * Sy(); }
Matrix ZQz() { return 0.5 * (Iz() - Sz()); }
Matrix DQx() { return Ix() * Sx() - Iy() * Sy(); }
Matrix DQy() { return Iy() * Sx() + Ix() * Sy(); }

}  // namespace ops

Eigen::VectorXcd bell_vector(Bell which) {
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
  switch (which) {
    case Bell::phi_plus: v(0) = s; v(3) = s; break;
    case Bell::phi_minus: v(0) = s; v(3) = -s; break;
    case Bell::psi_plus: v(1) = s; v(2) = s; break;
    case Bell::psi_minus: v(1) = s; v(2) = -s; break;
  }
  return v;
}

namespace states {

DensityState thermal(int n, double b, ThermalSign sign) {
  if (n < 1) throw std::invalid_argument("thermal: n must be positive");
  if (!(b >= 0.0 && b < 1.0)) throw std::invalid_argument("thermal: B must lie in [0, 1)");
  const double s = (sign == ThermalSign::equilibrium) ? -1.0 : 1.0;
  const int d = 1 << n;
  Matrix m = (ops::identity(n) + s * b * ops::total('z', n)) / static_cast<double>(d);
  return DensityState(m);
}

DensityState maximally_mixed(int n) {
  const int d = 1 << n;
  return DensityState(ops::identity(n) / static_cast<double>(d));
}

DensityState pseudopure(double eps, const Eigen::VectorXcd& ket) {
  const auto d = ket.size();
  if (!is_power_of_two(d) || d < 2) throw std::invalid_argument("pseudopure: ket dimension must be 2^n");
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("pseudopure: eps must lie in [0, 1]");
  const double nrm = ket.norm();
  if (nrm < 1e-12) throw std::invalid_argument("pseudopure: zero ket");
  const Eigen::VectorXcd k = ket / nrm;
  Matrix m = (1.0 - eps) * Matrix::Identity(d, d) / static_cast<double>(d) + eps * (k * k.adjoint());
  return DensityState(hermitian_part(m));
}

DensityState pseudopure(double eps, int basis_index, int n) {
  const int d = 1 << n;
  if (basis_index < 0 || basis_index >= d) throw std::invalid_argument("pseudopure: basis index out of range");
  Eigen::VectorXcd k = Eigen::VectorXcd::Zero(d);
  k(basis_index) = 1.0;
  return pseudopure(eps, k);
}

DensityState werner(double eps, Bell which, WernerRange range) {
  const double lo = (range == WernerRange::extended) ? -1.0 / 3.0 : 0.0;
  if (!(eps >= lo - 1e-15 && eps <= 1.0))
    throw std::invalid_argument("werner: eps outside the accepted range");
  const Eigen::VectorXcd v = bell_vector(which);
  Matrix m = (1.0 - eps) * Matrix::Identity(4, 4) / 4.0 + eps * (v * v.adjoint());
  return DensityState(hermitian_part(m));
}

DensityState bell(Bell which) {
  const Eigen::VectorXcd v = bell_vector(which);
  return DensityState(v * v.adjoint());
}

DensityState singlet() { return bell(Bell::psi_minus); }

DensityState basis_projector(int index, int n) { return pseudopure(1.0, index, n); }

DensityState singlet_triplet(double a, double b, double c) {
  if (!(a >= 0.0 && b >= 0.0 && c >= 0.0)) throw std::invalid_argument("singlet_triplet: fractions must be >= 0");
  if (std::abs(a + b + 2.0 * c - 1.0) > 1e-9)
    throw std::invalid_argument("singlet_triplet: a + b + 2c must equal 1");
  const Eigen::VectorXcd s = bell_vector(Bell::psi_minus);
  const Eigen::VectorXcd t0 = bell_vector(Bell::psi_plus);
  Matrix m = a * (s * s.adjoint()) + b * (t0 * t0.adjoint());
  m(0, 0) += c;
  m(3, 3) += c;
  m /= m.trace().real();
  return DensityState(hermitian_part(m));
}

DensityState para_ortho(double f) {
  if (!(f >= 0.0 && f <= 1.0)) throw std::invalid_argument("para_ortho: F must lie in [0, 1]");
  const double t = (1.0 - f) / 3.0;
  return singlet_triplet(f, t, t);
}

}  // namespace states

double singlet_fraction(const Matrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4) throw std::invalid_argument("singlet_fraction: dimension must be 4");
  const Eigen::VectorXcd s = bell_vector(Bell::psi_minus);
  return (s.adjoint() * rho * s)(0, 0).real();
}

double singlet_fraction(const DensityState& rho) { return singlet_fraction(rho.matrix()); }

}  // namespace phnmr
