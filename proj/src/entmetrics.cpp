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

#include "phnmr/entmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace phnmr {

namespace {

void require_two_qubits(const Matrix& rho, const char* what) {
  if (rho.rows() != 4 || rho.cols() != 4) throw std::invalid_argument(std::string(what) + ": two-qubit state required");
}

Matrix psd_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m));
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

Matrix partial_transpose_first(const Matrix& rho) {
  require_two_qubits(rho, "partial transpose");
  Matrix out(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out(2 * i + j, 2 * k + l) = rho(2 * k + j, 2 * i + l);
  return out;
}

PptResult ppt(const Matrix& rho) {
  PptResult r;
  r.partial_transpose = partial_transpose_first(rho);
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(r.partial_transpose), Eigen::EigenvaluesOnly);
  r.eigenvalues = es.eigenvalues();
  r.min_eigenvalue = r.eigenvalues(0);
  return r;
}

PptResult ppt(const DensityState& rho) { return ppt(rho.matrix()); }

double concurrence(const Matrix& rho) {
  require_two_qubits(rho, "concurrence");
  const Matrix yy = ops::kron(ops::pauli('y'), ops::pauli('y'));
  const Matrix flipped = yy * rho.conjugate() * yy;
  std::vector<double> lam;
  Eigen::SelfAdjointEigenSolver<Matrix> check(hermitian_part(rho), Eigen::EigenvaluesOnly);
  if (check.eigenvalues().minCoeff() >= -1e-10) {
    const Matrix s = psd_sqrt(rho);
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(s * flipped * s), Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < 4; ++i) lam.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(i))));
  } else {
    Eigen::ComplexEigenSolver<Matrix> es(rho * flipped, false);
    for (Eigen::Index i = 0; i < 4; ++i) lam.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(i).real())));
  }
  std::sort(lam.begin(), lam.end(), std::greater<>());
  return std::clamp(lam[0] - lam[1] - lam[2] - lam[3], 0.0, 1.0);
}

double concurrence(const DensityState& rho) { return concurrence(rho.matrix()); }

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("binary entropy: argument must lie in [0, 1]");
  auto term = [](double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; };
  return term(x) + term(1.0 - x);
}

double eof_from_concurrence(double c) {
  if (!(c >= 0.0 && c <= 1.0 + 1e-12)) throw std::invalid_argument("EOF: concurrence must lie in [0, 1]");
  c = std::min(c, 1.0);
  if (c == 0.0) return 0.0;
  const double x = 0.5 * (1.0 + std::sqrt(1.0 - c * c));
  return binary_entropy(x);
}

double eof(const DensityState& rho) { return eof_from_concurrence(concurrence(rho)); }

EntanglementReport analyze_entanglement(const DensityState& rho) {
  EntanglementReport r;
  r.min_pt_eigenvalue = ppt(rho).min_eigenvalue;
  r.concurrence = concurrence(rho);
  r.eof = eof_from_concurrence(r.concurrence);
  r.entangled = r.concurrence > 1e-12;
  return r;
}

double st_concurrence_closed_form(double a, double b, double c) { return std::max(0.0, std::abs(a - b) - 2.0 * c); }

StMixtureReport st_mixture_analysis(double a, double b, double c) {
  StMixtureReport r;
  r.report = analyze_entanglement(states::singlet_triplet(a, b, c));
  r.closed_form_concurrence = st_concurrence_closed_form(a, b, c);
  r.singlet_majority = a > 0.5;
  r.report.entangled = r.report.entangled || r.singlet_majority;
  return r;
}

BraunsteinBounds braunstein_bounds(int n) {
  if (n < 1) throw std::invalid_argument("Braunstein bounds: n must be >= 1");
  BraunsteinBounds b;
  b.eps_lower = 1.0 / (1.0 + std::ldexp(1.0, 2 * n - 1));
  b.eps_upper = 1.0 / (1.0 + std::pow(2.0, 0.5 * n));
  return b;
}

double warren_bound(int n, double b) {
  if (n < 1) throw std::invalid_argument("Warren bound: n must be >= 1");
  if (!(b > 0.0)) throw std::invalid_argument("Warren bound: B must be positive");
  return n * b / std::ldexp(1.0, n);
}

namespace {
double chosen(int n, SeparabilityBound bound) {
  const auto bb = braunstein_bounds(n);
  return bound == SeparabilityBound::lower ? bb.eps_lower : bb.eps_upper;
}
}  // namespace

int crossover_qubits(double b, int n_max, SeparabilityBound bound) {
  for (int n = 1; n <= n_max; ++n)
    if (warren_bound(n, b) >= chosen(n, bound)) return n;
  throw NumericError("crossover: no crossing up to n_max");
}

double crossover_boltzmann(int n, SeparabilityBound bound) {
  if (n < 1) throw std::invalid_argument("crossover: n must be >= 1");
  return chosen(n, bound) * std::ldexp(1.0, n) / n;
}

double entropy_deficit(double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("entropy: eps must lie in [0, 1]");
  const double up = (1.0 + eps) * std::log1p(eps);
  const double dn = (eps < 1.0) ? (1.0 - eps) * std::log1p(-eps) : 0.0;
  return (up + dn) / (2.0 * std::log(2.0));
}

double qubit_entropy(double eps) { return 1.0 - entropy_deficit(eps); }

Compression sv_compression(int n, double eps) {
  if (n < 1) throw std::invalid_argument("compression: n must be >= 1");
  Compression c;
  c.k_exact = n * entropy_deficit(eps);
  c.k_approx = n * eps * eps / (2.0 * std::log(2.0));
  return c;
}

double pure_qubit_cost(double eps) {
  const double d = entropy_deficit(eps);
  if (d == 0.0) throw NumericError("pure-qubit cost diverges at eps = 0");
  return 1.0 / d;
}

BoundsReport bounds_report(int n, double b) {
  BoundsReport r;
  r.n = n;
  const auto bb = braunstein_bounds(n);
  r.eps_lower = bb.eps_lower;
  r.eps_upper = bb.eps_upper;
  r.warren = warren_bound(n, b);
  r.k_pure = sv_compression(n, b / 2.0).k_exact;
  return r;
}

}  // namespace phnmr
