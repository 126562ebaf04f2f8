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
#include "phnmr/dynamics.hpp"
#include "phnmr/phip.hpp"

using namespace phnmr;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

Matrix random_state(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = Complex(g(rng), g(rng));
  Matrix r = a * a.adjoint();
  return r / r.trace();
}

Matrix comm(const Matrix& a, const Matrix& b) { return a * b - b * a; }

const SpinSystem kSys = SpinSystem::two_spin(492, 4.6);

}  // namespace

TEST_CASE("hamiltonian against hand-built matrices") {
  CHECK(max_abs(hamiltonian(kSys).matrix - oracle::weak_h(246, -246, 4.6)) < 1e-9);
  const Matrix strong = 2 * oracle::pi * 246 * (oracle::I('z') - oracle::S('z')) +
                        2 * oracle::pi * 4.6 * (oracle::zqx() + oracle::izsz());
  CHECK(max_abs(hamiltonian(kSys, CouplingMode::strong).matrix - strong) < 1e-9);
  CHECK(max_abs(hamiltonian(SpinSystem::two_spin(0, 0)).matrix) == 0.0);

  const auto split = split_two_spin(kSys, CouplingMode::strong);
  CHECK(max_abs(split.commuting + split.non_commuting - strong) < 1e-9);
  CHECK(split.delta_rad_s == doctest::Approx(oracle::pi * 492));
  CHECK(max_abs(comm(split.commuting, oracle::zqx() + oracle::izsz())) < 1e-9);
}

TEST_CASE("commutation table") {
  CHECK(max_abs(comm(ops::ZQx(), ops::IzSz())) < 1e-15);
  CHECK(max_abs(comm(ops::ZQx(), ops::Iz() - ops::Sz())) > 0.1);
  CHECK(max_abs(comm(ops::DQy(), ops::Iz() + ops::Sz())) > 0.1);
}

TEST_CASE("pulses match the matrix exponential") {
  for (double th : {0.3, oracle::pi / 2, oracle::pi, 2.0})
    for (double ph : {0.0, oracle::pi / 2, oracle::pi, 4.0}) {
      Pulse p{th, ph};
      CHECK(max_abs(pulse_propagator(p, kSys) - oracle::hard(th, ph)) < 1e-12);
      p.qubit = 0;
      CHECK(max_abs(pulse_propagator(p, kSys) - oracle::on_i(th, ph)) < 1e-12);
    }
  // 180_-x on one qubit swaps alpha and beta
  SpinSystem one;
  one.n_qubits = 1;
  one.offsets_hz = {0.0};
  one.couplings_hz = RealMatrix::Zero(1, 1);
  const Matrix u = pulse_propagator(pulse_deg(180, 180), one);
  CHECK(std::abs(std::abs(u(1, 0)) - 1.0) < 1e-15);
  CHECK(std::abs(u(0, 0)) < 1e-15);
  // flip error adds to the nominal angle
  Pulse e = pulse_deg(90, 0);
  e.flip_error_rad = 0.01;
  CHECK(max_abs(pulse_propagator(e, kSys) - oracle::hard(oracle::pi / 2 + 0.01, 0)) < 1e-12);
}

TEST_CASE("selective 90I_y on -I.S") {
  const Matrix out = evolve(Matrix(-ops::IdotS()), pulse_propagator(pulse_deg(90, 90, 0), kSys));
  const Matrix want = 0.5 * (build_operator("zx", 2) - build_operator("yy", 2) - build_operator("xz", 2));
  CHECK(max_abs(out - want) < 1e-14);
}

TEST_CASE("singlet is invariant under hard pulses") {
  for (double th = 0; th < 7; th += 0.5)
    for (double ph = 0; ph < 7; ph += 0.7)
      CHECK(max_abs(evolve(oracle::singlet(), pulse_propagator(Pulse{th, ph}, kSys)) - oracle::singlet()) < 1e-12);
}

TEST_CASE("free evolution") {
  std::mt19937_64 rng(1);
  const auto h = hamiltonian(kSys);
  const Matrix rho = random_state(4, rng);
  const Matrix direct = free_evolve(rho, h, 3.1e-3);
  CHECK(max_abs(direct - oracle::conj(rho, oracle::expm(Complex(0, -3.1e-3) * oracle::weak_h(246, -246, 4.6)))) < 1e-10);
  CHECK(max_abs(free_evolve(free_evolve(rho, h, 1.2e-3), h, 1.9e-3) - direct) < 1e-10);
  CHECK(std::abs(direct.trace() - 1.0) < 1e-12);
  CHECK_THROWS_AS(free_evolve(rho, h, -1.0), std::invalid_argument);

  // strong-coupling propagator through the non-diagonal path
  const auto hs = hamiltonian(kSys, CouplingMode::strong);
  CHECK(max_abs(propagator(hs, 2e-3) - oracle::expm(Complex(0, -2e-3) * hs.matrix)) < 1e-10);

  // ZQx precession under H_nc
  const auto split = split_two_spin(kSys, CouplingMode::strong);
  for (double tau : {1e-4, 5e-4, 1.3e-3}) {
    const Matrix got = free_evolve(ops::ZQx(), Hamiltonian{split.non_commuting, CouplingMode::strong}, tau);
    const double a = 2 * split.delta_rad_s * tau;
    CHECK(max_abs(got - (oracle::zqx() * std::cos(a) + oracle::zqy() * std::sin(a))) < 1e-12);
  }

  // the singlet does not evolve under weak J alone
  const auto jonly = hamiltonian(SpinSystem::two_spin(0, 7.0));
  CHECK(max_abs(free_evolve(oracle::singlet(), jonly, 0.37) - oracle::singlet()) < 1e-12);
}

TEST_CASE("spin echo refocuses offsets") {
  std::mt19937_64 rng(2);
  const Matrix rho = random_state(4, rng);
  const double tau = 7e-3;
  const Matrix got = apply(rho, spin_echo(tau), kSys);
  const Matrix want = oracle::conj(
      rho, oracle::hard(oracle::pi, 0) * oracle::expm(Complex(0, -tau * 2 * oracle::pi * 4.6) * oracle::izsz()));
  CHECK(max_abs(got - want) < 1e-10);
}

TEST_CASE("crush") {
  const Matrix sq = oracle::I('x') + 2.0 * oracle::I('x') * oracle::S('z');
  CHECK(max_abs(crush(sq)) < 1e-15);
  CHECK(max_abs(crush(oracle::singlet()) - oracle::singlet()) < 1e-15);
  std::mt19937_64 rng(3);
  const Matrix rho = random_state(4, rng);
  const Matrix c = crush(rho);
  CHECK(max_abs(c - oracle::crush_homo(rho)) == 0.0);
  CHECK(max_abs(crush(c) - c) == 0.0);
  const Matrix het = crush(rho, GradientMode::heteronuclear);
  CHECK(max_abs(het - Matrix(rho.diagonal().asDiagonal())) == 0.0);
}

TEST_CASE("sliced gradient") {
  std::mt19937_64 rng(4);
  const Matrix rho = random_state(4, rng);
  CHECK(max_abs(crush_sliced(rho, 16, 0.0) - rho) < 1e-15);
  CHECK(max_abs(crush_sliced(rho, 512, 64 * oracle::pi) - crush(rho)) < 1e-6);
  // two-point average over phases 0 and pi/2 for a span of pi
  const Matrix ix = oracle::I('x');
  const Matrix two = crush_sliced(ix, 2, oracle::pi);
  const Matrix rot = oracle::conj(ix, oracle::expm(Complex(0, -oracle::pi / 2) * (oracle::I('z') + oracle::S('z'))));
  CHECK(max_abs(two - (ix + rot) / 2.0) < 1e-14);
  CHECK(max_abs(two) > 0.1);
  CHECK_THROWS_AS(crush_sliced(rho, 1, 1.0), std::invalid_argument);
}

TEST_CASE("timed gradients") {
  const double d = kSys.delta_hz();
  const Matrix s0 = oracle::singlet();
  CHECK(max_abs(timed_gradient(s0, kSys, 1.0 / d) - s0) < 1e-12);
  CHECK(max_abs(timed_gradient(s0, kSys, 0.5 / d) - (oracle::one() / 4.0 + oracle::zqx() - oracle::izsz())) < 1e-12);
  const Matrix q = free_evolve(ops::ZQx(), hamiltonian(kSys), 0.25 / d);
  CHECK(max_abs(q - oracle::zqy()) < 1e-12);
}

TEST_CASE("jump-return") {
  const double d = kSys.delta_hz();
  const auto seq = jump_return_90Iy(kSys);
  CHECK(std::get<Delay>(seq.elements[1]).t_s == doctest::Approx(508.1e-6).epsilon(1e-4));
  CHECK_THROWS_AS(jump_return_90Iy(SpinSystem::two_spin(0, 4.6)), std::invalid_argument);
  CHECK_THROWS_AS(jump_return_90Iy(SpinSystem::two_spin(-492, 4.6)), std::invalid_argument);

  // exact at J = 0 on the {1, ZQx, IzSz} family
  const SpinSystem j0 = SpinSystem::two_spin(d, 0.0);
  const Matrix u = sequence_unitary(jump_return_90Iy(j0), j0);
  const Matrix ideal = oracle::on_i(oracle::pi / 2, oracle::pi / 2);
  double worst0 = 0;
  for (const Matrix& b : std::vector<Matrix>{oracle::one() / 4.0, oracle::zqx(), oracle::izsz()})
    worst0 = std::max(worst0, max_abs(oracle::conj(b, u) - oracle::conj(b, ideal)));
  CHECK(worst0 < 1e-10);

  // with J the delay adds a small coupling phase; it stays under 2 pi J t_d
  const Matrix uj = sequence_unitary(seq, kSys);
  double worst = 0;
  for (const Matrix& b : std::vector<Matrix>{oracle::zqx(), oracle::izsz()})
    worst = std::max(worst, max_abs(oracle::conj(b, uj) - oracle::conj(b, ideal)));
  CHECK(worst > 0.0);
  CHECK(worst < 2 * oracle::pi * 4.6 * 0.25 / d);

  // on S0 the first hard pulse is irrelevant
  PulseSequence tail;
  tail.add(seq.elements[1]).add(seq.elements[2]);
  CHECK(max_abs(apply(oracle::singlet(), seq, j0) - apply(oracle::singlet(), tail, j0)) < 1e-12);
  const Matrix obs = apply(oracle::singlet(), seq, j0) - oracle::one() / 4.0;
  const auto e = expand(obs);
  CHECK(e.coefficient("zx").real() == doctest::Approx(0.5));
  CHECK(e.coefficient("xz").real() == doctest::Approx(-0.5));
}

TEST_CASE("decoherence channel") {
  const SpinSystem sys = SpinSystem::two_spin(492, 4.6, 2.0, 0.4);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    SpinSystem s = sys;
    s.t1_s = 0.1 + u(rng);
    s.t2_s = s.t1_s * (0.05 + u(rng) / 3.2);
    const double t = u(rng);
    Matrix sum = Matrix::Zero(4, 4);
    const auto ks = decoherence_kraus(t, s);
    for (const auto& k : ks) sum += k.adjoint() * k;
    CHECK(max_abs(sum - Matrix::Identity(4, 4)) < 1e-12);
    const Matrix rho = random_state(4, rng);
    Matrix via = Matrix::Zero(4, 4);
    for (const auto& k : ks) via += k * rho * k.adjoint();
    CHECK(max_abs(via - decohere(rho, t, s)) < 1e-12);
    CHECK(DensityState::check(decohere(rho, t, s)).empty());
  }
  const Matrix rho = random_state(4, rng);
  CHECK(max_abs(decohere(rho, 0.0, sys) - rho) < 1e-15);
  CHECK(max_abs(decohere(rho, 1e4, sys) - oracle::one() / 4.0) < 1e-12);

  SpinSystem t2only = SpinSystem::two_spin(492, 4.6, kInf, 0.4);
  const Matrix dev = oracle::I('x');
  CHECK(max_abs(decohere(Matrix(oracle::one() / 4.0 + 0.1 * dev), 0.4, t2only) - (oracle::one() / 4.0 + 0.1 * std::exp(-1.0) * dev)) <
        1e-14);
}

TEST_CASE("MLEV-16") {
  CHECK(mlev16_supercycle_s(1e4) == doctest::Approx(1.6e-3));
  const auto cyc = mlev16_supercycle(1e4);
  CHECK(cyc.total_duration() == doctest::Approx(1.6e-3));
  CHECK(cyc.elements.size() == 48);

  const SpinSystem centred = SpinSystem::two_spin(0.0, 4.6);
  const Matrix u0 = sequence_unitary(mlev16(centred, 5 * 1.6e-3), centred, CouplingMode::strong);
  CHECK(max_abs(oracle::conj(oracle::singlet(), u0) - oracle::singlet()) < 1e-10);

  const Matrix u = sequence_unitary(cyc, kSys, CouplingMode::strong);
  const Matrix s = oracle::conj(oracle::singlet(), u);
  CHECK((s * oracle::singlet()).trace().real() >= 0.99);
  const Matrix zq = oracle::conj(oracle::zqx(), u);
  CHECK((zq * oracle::zqx()).trace().real() / (oracle::zqx() * oracle::zqx()).trace().real() >= 0.99);

  // under the ideal isotropic J Hamiltonian the singlet fraction is constant
  std::mt19937_64 rng(6);
  const Matrix rho = random_state(4, rng);
  const Hamiltonian iso{2 * oracle::pi * 4.6 * (oracle::zqx() + oracle::izsz()), CouplingMode::strong};
  const double f0 = singlet_fraction(rho);
  for (double t : {0.01, 0.1, 0.7}) CHECK(std::abs(singlet_fraction(free_evolve(rho, iso, t)) - f0) < 1e-12);
}

TEST_CASE("sequence bookkeeping") {
  PulseSequence s;
  s.add(pulse_deg(90, 0)).add(Delay{1e-3}).add(GradientCrush{GradientMode::homonuclear, 2e-3}).add(Decohere{0.5});
  CHECK(s.total_duration() == doctest::Approx(0.503));
  CHECK_FALSE(s.is_unitary());
  PulseSequence t;
  t.add(pulse_deg(90, 0)).add(Delay{1e-3}).add(ZRotation{{0.1, 0.2}});
  CHECK(t.is_unitary());
  CHECK_THROWS_AS(sequence_unitary(s, kSys), std::invalid_argument);
  const Matrix z = zrotation_propagator(ZRotation{{0.3, -0.2}}, 2);
  CHECK(max_abs(z - oracle::expm(Complex(0, -1) * (0.3 * oracle::I('z') - 0.2 * oracle::S('z')))) < 1e-14);
}
