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

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace phnmr {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Thrown for non-convergence, aliasing and other numeric failures.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SpinSystem {
  int n_qubits = 2;
  std::vector<double> offsets_hz;  // rotating-frame offsets
  RealMatrix couplings_hz;         // symmetric, zero diagonal
  double t1_s = kInf;
  double t2_s = kInf;
  double boltzmann_factor = 6.48e-5;

  /// Two spins with the transmitter centred: I at +delta/2, S at -delta/2.
  static SpinSystem two_spin(double delta_hz, double j_hz, double t1_s = kInf, double t2_s = kInf,
                             double boltzmann_factor = 6.48e-5);

  void validate() const;
  double coupling(int i, int j) const { return couplings_hz(i, j); }
  /// offset(I) - offset(S) for a two-spin system.
  double delta_hz() const;
  double j_hz() const;
  int dim() const { return 1 << n_qubits; }
};

enum class WernerRange { standard, extended };

class DensityState {
 public:
  /// Validates Hermiticity, unit trace and positivity.
  explicit DensityState(Matrix m);

  const Matrix& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }
  int n_qubits() const;
  Complex operator()(int r, int c) const { return m_(r, c); }

  /// Returns a description of the first violated invariant, or empty.
  static std::string check(const Matrix& m);

 private:
  Matrix m_;
};

enum class Normalization { product_operator, plain_tensor };

/// Per-qubit factors: E (unit), x, y, z, '+', '-', 'a' (alpha), 'b' (beta).
struct OperatorLabel {
  std::string factors;
  Normalization norm = Normalization::product_operator;

  int non_identity() const;
  bool operator<(const OperatorLabel& o) const { return factors < o.factors; }
  bool operator==(const OperatorLabel& o) const { return factors == o.factors && norm == o.norm; }
};

Matrix build_operator(const OperatorLabel& label, int n);
Matrix build_operator(const std::string& factors, int n,
                      Normalization norm = Normalization::product_operator);

enum class Basis { cartesian, spherical, polarization };

struct BasisExpansion {
  Basis basis = Basis::cartesian;
  int n_qubits = 0;
  std::map<std::string, Complex> coefficients;

  Complex coefficient(const std::string& label) const;
  Matrix reconstruct() const;
};

std::vector<std::string> basis_labels(Basis basis, int n);
BasisExpansion expand(const Matrix& rho, Basis basis = Basis::cartesian);
BasisExpansion expand(const DensityState& rho, Basis basis = Basis::cartesian);

/// Coherence order of element (r, s): M_r - M_s, with |alpha> at m = +1/2.
int coherence_order(int r, int s, int n);
std::map<int, Matrix> coherence_decompose(const Matrix& rho);

// Single-spin and two-spin operators in the full Zeeman basis.
namespace ops {
Matrix identity(int n);
Matrix spin(char axis, int qubit, int n);  // axis in {x, y, z, +, -, a, b}
Matrix total(char axis, int n);
Matrix Ix();
Matrix Iy();
Matrix Iz();
Matrix Sx();
Matrix Sy();
Matrix Sz();
Matrix IzSz();  // plain product Iz Sz
Matrix IdotS();
Matrix ZQx();
Matrix ZQy();
Matrix ZQz();
Matrix DQx();
Matrix DQy();
Matrix pauli(char axis);  // 2x2
Matrix kron(const Matrix& a, const Matrix& b);
}  // namespace ops

enum class Bell { phi_plus, phi_minus, psi_plus, psi_minus };
Eigen::VectorXcd bell_vector(Bell which);

enum class ThermalSign { equilibrium, reference };

namespace states {
/// equilibrium: (1 - B sum Iz)/N. reference: (1 + B sum Iz)/N.
DensityState thermal(int n, double b, ThermalSign sign = ThermalSign::equilibrium);
DensityState maximally_mixed(int n);
DensityState pseudopure(double eps, int basis_index, int n);
DensityState pseudopure(double eps, const Eigen::VectorXcd& ket);
DensityState werner(double eps, Bell which = Bell::psi_minus, WernerRange range = WernerRange::standard);
DensityState bell(Bell which);
DensityState singlet_triplet(double a, double b, double c);
DensityState para_ortho(double f);
DensityState singlet();
DensityState basis_projector(int index, int n);
}  // namespace states

double singlet_fraction(const Matrix& rho);
double singlet_fraction(const DensityState& rho);

/// Re-Hermitize and renormalize tiny roundoff drift.
Matrix hermitian_part(const Matrix& m);

}  // namespace phnmr
