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

#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "phnmr/entmetrics.hpp"

using namespace phnmr;

namespace {

Matrix random_state(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix a(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a(i, j) = Complex(g(rng), g(rng));
  Matrix r = a * a.adjoint();
  return r / r.trace().real();
}

// sum over blocks E_ij (x) B_ij -> E_ji (x) B_ij
Matrix pt_oracle(const Matrix& rho) {
  Matrix out = Matrix::Zero(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Matrix e = Matrix::Zero(2, 2);
      e(j, i) = 1.0;
      out += oracle::kron(e, rho.block(2 * i, 2 * j, 2, 2));
    }
  return out;
}

}  // namespace

TEST_CASE("partial transpose") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 20; ++k) {
    const Matrix r = random_state(rng);
    CHECK((partial_transpose_first(r) - pt_oracle(r)).cwiseAbs().maxCoeff() < 1e-15);
  }
  // Werner family: smallest PT eigenvalue 1/2 - F
  for (double eps : {0.0, 0.2, 1.0 / 3, 0.6, 1.0}) {
    const auto w = states::werner(eps);
    const double f = singlet_fraction(w);
    CHECK(f == doctest::Approx((1 + 3 * eps) / 4));
    const auto p = ppt(w);
    CHECK(p.min_eigenvalue == doctest::Approx(0.5 - f));
    CHECK(p.eigenvalues.size() == 4);
    CHECK(p.eigenvalues(3) >= p.eigenvalues(0));
  }
  CHECK_THROWS_AS(partial_transpose_first(Matrix::Identity(8, 8)), std::invalid_argument);
}

TEST_CASE("concurrence and EoF") {
  CHECK(concurrence(states::singlet()) == doctest::Approx(1.0));
  CHECK(concurrence(Matrix(Matrix::Identity(4, 4) / 4.0)) == doctest::Approx(0.0));
  CHECK(eof(states::singlet()) == doctest::Approx(1.0));
  std::mt19937_64 rng(9);
  for (int k = 0; k < 50; ++k) {
    const Matrix r = random_state(rng);
    CHECK(concurrence(r) == doctest::Approx(oracle::concurrence(r)).epsilon(1e-9));
  }
  // Bell-diagonal sweep against the closed form
  for (int ia = 0; ia <= 20; ++ia)
    for (int ib = 0; ia + ib <= 20; ++ib) {
      const double a = ia / 20.0, b = ib / 20.0;
      const double c = std::max(0.0, (1 - a - b) / 2);
      const double cc = concurrence(states::singlet_triplet(a, b, c));
      CHECK(cc == doctest::Approx(st_concurrence_closed_form(a, b, c)).epsilon(1e-8));
      CHECK(cc == doctest::Approx(oracle::concurrence(states::singlet_triplet(a, b, c).matrix())).epsilon(1e-8));
    }
  CHECK_THROWS_AS(concurrence(Matrix::Identity(2, 2)), std::invalid_argument);
}

TEST_CASE("binary entropy") {
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0));
  for (double x : {0.1, 0.3, 0.77}) CHECK(binary_entropy(x) == doctest::Approx(oracle::h2(x)));
  CHECK_THROWS_AS(binary_entropy(1.2), std::invalid_argument);
  CHECK(eof_from_concurrence(0.0) == 0.0);
  CHECK(eof_from_concurrence(1.0) == doctest::Approx(1.0));
  double prev = 0;
  for (double c = 0.05; c <= 1.0; c += 0.05) {
    const double e = eof_from_concurrence(c);
    CHECK(e > prev);
    CHECK(e <= c + 1e-12);
    prev = e;
  }
  CHECK_THROWS_AS(eof_from_concurrence(-0.1), std::invalid_argument);
}

TEST_CASE("entanglement reports") {
  const auto r = analyze_entanglement(states::werner(0.5));
  CHECK(r.entangled);
  CHECK(r.concurrence == doctest::Approx(0.25));
  CHECK(r.min_pt_eigenvalue == doctest::Approx(-0.125));
  CHECK_FALSE(analyze_entanglement(states::werner(0.3)).entangled);

  const auto m = st_mixture_analysis(0.6, 0.3, 0.05);
  CHECK(m.singlet_majority);
  CHECK(m.closed_form_concurrence == doctest::Approx(0.2));
  CHECK(m.report.concurrence == doctest::Approx(0.2));
  CHECK(m.report.entangled);
  const auto s = st_mixture_analysis(0.4, 0.4, 0.1);
  CHECK_FALSE(s.singlet_majority);
  CHECK_FALSE(s.report.entangled);
}

TEST_CASE("separability bounds") {
  for (int n = 1; n <= 30; ++n) {
    const auto b = braunstein_bounds(n);
    CHECK(b.eps_lower == doctest::Approx(1.0 / (1.0 + std::pow(2.0, 2 * n - 1))));
    CHECK(b.eps_upper == doctest::Approx(1.0 / (1.0 + std::pow(2.0, n / 2.0))));
    CHECK(b.eps_lower <= b.eps_upper);
    CHECK(warren_bound(n, 1e-3) == doctest::Approx(n * 1e-3 / std::pow(2.0, n)));
  }
  CHECK_THROWS_AS(braunstein_bounds(0), std::invalid_argument);
  CHECK_THROWS_AS(warren_bound(2, 0.0), std::invalid_argument);

  for (double b : {1e-5, 6.48e-5, 1e-3, 0.1}) {
    int want = 0;
    for (int n = 1; n < 200 && !want; ++n)
      if (n * b / std::pow(2.0, n) >= 1.0 / (1.0 + std::pow(2.0, 2 * n - 1))) want = n;
    CHECK(crossover_qubits(b) == want);
  }
  CHECK_THROWS_AS(crossover_qubits(1e-30, 5), NumericError);
  for (int n : {2, 7, 20}) {
    const double b = crossover_boltzmann(n);
    CHECK(warren_bound(n, b) == doctest::Approx(braunstein_bounds(n).eps_lower));
    const double bu = crossover_boltzmann(n, SeparabilityBound::upper);
    CHECK(warren_bound(n, bu) == doctest::Approx(braunstein_bounds(n).eps_upper));
  }
}

TEST_CASE("entropy and compression") {
  for (double e : {0.0, 0.01, 0.3, 0.9, 1.0}) {
    CHECK(qubit_entropy(e) == doctest::Approx(oracle::h2((1 + e) / 2)));
    CHECK(entropy_deficit(e) == doctest::Approx(1 - oracle::h2((1 + e) / 2)));
  }
  const auto c = sv_compression(100, 1e-3);
  CHECK(c.k_approx == doctest::Approx(100 * 1e-6 / (2 * std::log(2.0))));
  CHECK(c.k_exact == doctest::Approx(c.k_approx).epsilon(1e-5));
  CHECK(pure_qubit_cost(1e-3) == doctest::Approx(100 / c.k_exact));
  CHECK(pure_qubit_cost(1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(pure_qubit_cost(0.0), NumericError);
  CHECK_THROWS_AS(entropy_deficit(1.5), std::invalid_argument);
  CHECK_THROWS_AS(sv_compression(0, 0.1), std::invalid_argument);

  const auto r = bounds_report(10, 1e-4);
  CHECK(r.n == 10);
  CHECK(r.eps_lower == braunstein_bounds(10).eps_lower);
  CHECK(r.warren == warren_bound(10, 1e-4));
  CHECK(r.k_pure == doctest::Approx(sv_compression(10, 5e-5).k_exact));
}
