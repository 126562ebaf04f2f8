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
#include "phnmr/qip_algos.hpp"

using namespace phnmr;

namespace {

double dist(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

// equal up to a global phase
double dist_phase(const Matrix& a, const Matrix& b) {
  Eigen::Index r = 0, c = 0;
  b.cwiseAbs().maxCoeff(&r, &c);
  const Complex ph = a(r, c) / b(r, c);
  return dist(a, ph / std::abs(ph) * b);
}

Matrix basis_state(int k) {
  Matrix m = Matrix::Zero(4, 4);
  m(k, k) = 1.0;
  return m;
}

}  // namespace

TEST_CASE("gate matrices") {
  const double s = 1 / std::sqrt(2.0);
  Matrix h(2, 2);
  h << s, s, s, -s;
  CHECK(dist(gate_unitary(gates::Hadamard{0}, 2), oracle::kron(h, Matrix::Identity(2, 2))) < 1e-15);
  CHECK(dist(gate_unitary(gates::Hadamard{1}, 2), oracle::kron(Matrix::Identity(2, 2), h)) < 1e-15);

  Matrix cn = Matrix::Zero(4, 4);
  cn(0, 0) = cn(1, 1) = cn(2, 3) = cn(3, 2) = 1;
  CHECK(dist(gate_unitary(gates::CNot{0, 1}, 2), cn) < 1e-15);
  Matrix nc = Matrix::Zero(4, 4);
  nc(0, 0) = nc(2, 2) = nc(1, 3) = nc(3, 1) = 1;
  CHECK(dist(gate_unitary(gates::CNot{1, 0}, 2), nc) < 1e-15);

  const Matrix rx = gate_unitary(gates::Rotation{0, 'x', 0.7}, 2);
  CHECK(dist(rx, oracle::expm(Complex(0, -0.7) * oracle::I('x'))) < 1e-13);
  const Matrix rz = gate_unitary(gates::Rotation{1, 'z', 1.1}, 2);
  CHECK(dist(rz, oracle::expm(Complex(0, -1.1) * oracle::S('z'))) < 1e-13);

  Matrix ph = Matrix::Identity(4, 4);
  ph(1, 1) = ph(3, 3) = std::polar(1.0, 0.4);
  CHECK(dist(gate_unitary(gates::Phase{1, 0.4}, 2), ph) < 1e-15);

  Matrix g2 = Matrix::Identity(4, 4);
  g2(2, 2) = -1;
  CHECK(dist(gate_unitary(gates::Oracle{"grover:2"}, 2), g2) < 1e-15);
  CHECK(dist(gate_unitary(gates::Oracle{"dj:c0"}, 2), Matrix::Identity(4, 4)) < 1e-15);

  CHECK(is_two_qubit(gates::CNot{}));
  CHECK(is_two_qubit(gates::Oracle{"dj:b0"}));
  CHECK_FALSE(is_two_qubit(gates::Hadamard{}));

  CHECK_THROWS_AS(gate_unitary(gates::Rotation{0, 'w', 1}, 2), std::invalid_argument);
  CHECK_THROWS_AS(gate_unitary(gates::Hadamard{2}, 2), std::invalid_argument);
  CHECK_THROWS_AS(gate_unitary(gates::CNot{1, 1}, 2), std::invalid_argument);
  CHECK_THROWS_AS(gate_unitary(gates::Oracle{"grover:4"}, 2), std::invalid_argument);
  CHECK_THROWS_AS(gate_unitary(gates::Oracle{"grover:x"}, 2), std::invalid_argument);
  CHECK_THROWS_AS(gate_unitary(gates::Oracle{"nope"}, 2), std::invalid_argument);
  CHECK_THROWS_AS(gate_unitary(gates::Oracle{"dj:c0"}, 3), std::invalid_argument);
}

TEST_CASE("circuits compose in time order") {
  GateCircuit c;
  c.add(gates::Hadamard{0}).add(gates::CNot{0, 1});
  const Matrix u = circuit_unitary(c);
  CHECK(dist(u, gate_unitary(gates::CNot{0, 1}, 2) * gate_unitary(gates::Hadamard{0}, 2)) < 1e-15);
  // |00> -> Bell phi+
  const Matrix out = u * basis_state(0) * u.adjoint();
  CHECK(out(0, 0).real() == doctest::Approx(0.5));
  CHECK(out(0, 3).real() == doctest::Approx(0.5));
  GateCircuit three;
  three.n_qubits = 3;
  CHECK_THROWS_AS(c.append(three), std::invalid_argument);
  CHECK_THROWS_AS(run_circuit(DensityState(Matrix(Matrix::Identity(8, 8) / 8.0)), c), std::invalid_argument);
}

TEST_CASE("singlet bridge") {
  const auto z = run_circuit(states::singlet(), singlet_to_zero_bridge());
  CHECK(z(0, 0).real() == doctest::Approx(1.0));
  // the identity part is untouched, so Werner inputs keep their polarisation
  const auto w = run_circuit(states::werner(0.4), singlet_to_zero_bridge());
  CHECK(w(0, 0).real() == doctest::Approx(0.6 / 4 + 0.4));
}

TEST_CASE("Deutsch-Jozsa") {
  for (const std::string f : {"dj:c0", "dj:c1", "dj:b0", "dj:b1"}) {
    const auto r = deutsch_jozsa(f, states::singlet());
    CHECK(r.answer == (f[3] == 'c' ? "constant" : "balanced"));
    CHECK(r.success_probability == doctest::Approx(1.0));
    CHECK(r.populations.size() == 4);
    CHECK(r.readouts.size() == 1);
    // no bridge: start from |00> directly
    const auto nb = deutsch_jozsa(f, DensityState(basis_state(0)), false);
    CHECK(nb.answer == r.answer);
    CHECK(dist(nb.final_state.matrix(), r.final_state.matrix()) < 1e-12);
  }
  // a partly polarised input still answers, with lower confidence
  const auto m = deutsch_jozsa("dj:b0", states::werner(0.5));
  CHECK(m.answer == "balanced");
  CHECK(m.success_probability == doctest::Approx(0.75));
  CHECK_THROWS_AS(deutsch_jozsa_circuit("grover:1"), std::invalid_argument);
  CHECK_THROWS_AS(deutsch_jozsa("dj:x", states::singlet()), std::invalid_argument);
}

TEST_CASE("Grover") {
  for (int t = 0; t < 4; ++t) {
    const auto r = grover(t, states::singlet());
    CHECK(r.answer == std::to_string(t));
    CHECK(r.success_probability == doctest::Approx(1.0));
    // oracle: one iteration on |00> by explicit matrices
    const double s = 1 / std::sqrt(2.0);
    Matrix h1(2, 2);
    h1 << s, s, s, -s;
    const Matrix hh = oracle::kron(h1, h1);
    Matrix o = Matrix::Identity(4, 4);
    o(t, t) = -1;
    Matrix z = Matrix::Identity(4, 4);
    z(0, 0) = -1;
    const Matrix u = hh * z * hh * o * hh;
    CHECK(dist_phase(circuit_unitary(grover_circuit(t, 1)), u) < 1e-12);
  }
  // two iterations overshoot on four items
  CHECK(grover(1, states::singlet(), 2).success_probability == doctest::Approx(0.25));
  CHECK(grover(1, states::singlet(), 0).success_probability == doctest::Approx(0.25));
  const auto m = grover(3, states::werner(0.6));
  CHECK(m.success_probability == doctest::Approx(0.4 / 4 + 0.6));
  CHECK_THROWS_AS(grover_circuit(4, 1), std::invalid_argument);
  CHECK_THROWS_AS(grover_circuit(0, -1), std::invalid_argument);
}

TEST_CASE("decoherence between gates") {
  SpinSystem sys = SpinSystem::two_spin(500, 7.0);
  sys.t1_s = 2.0;
  sys.t2_s = 0.05;
  CircuitOptions opt;
  opt.decoherence = sys;
  opt.single_gate_s = 1e-4;
  const auto clean = grover(2, states::singlet());
  const auto noisy = grover(2, states::singlet(), 1, true, opt);
  CHECK(noisy.success_probability < clean.success_probability);
  CHECK(noisy.success_probability > 0.25);
  opt.decoherence->couplings_hz.setZero();
  CHECK_THROWS_AS(grover(2, states::singlet(), 1, true, opt), std::invalid_argument);
}

TEST_CASE("full twirl") {
  const auto group = twirl_group();
  CHECK(group.size() == 12);
  const Matrix p = oracle::singlet();
  for (const auto& u : group) {
    CHECK(dist(u * u.adjoint(), Matrix::Identity(4, 4)) < 1e-12);
    CHECK(dist(u * p * u.adjoint(), p) < 1e-12);
  }
  const auto st = states::singlet_triplet(0.5, 0.3, 0.1);
  const auto t = full_twirl(st);
  const double f = singlet_fraction(t);
  CHECK(f == doctest::Approx(0.5));
  CHECK(dist(t.matrix(), states::werner((4 * f - 1) / 3).matrix()) < 1e-12);
  CHECK(dist(full_twirl(t).matrix(), t.matrix()) < 1e-12);

  TwirlOptions opt;
  opt.mode = TwirlMode::sampled;
  opt.seed = 4;
  opt.n_samples = 4000;
  const auto ts = full_twirl(st, opt);
  CHECK(singlet_fraction(ts) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(dist(ts.matrix(), t.matrix()) < 0.03);
  CHECK(dist(full_twirl(st, opt).matrix(), ts.matrix()) == 0.0);
  opt.n_samples = 0;
  CHECK_THROWS_AS(full_twirl(st, opt), std::invalid_argument);
}
