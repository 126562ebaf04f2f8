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

#include "phnmr/qip_algos.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace phnmr {

namespace {

int bit_of(int index, int qubit, int n) { return (index >> (n - 1 - qubit)) & 1; }

void check_qubit(int q, int n) {
  if (q < 0 || q >= n) throw std::invalid_argument("gate qubit index out of range");
}

Matrix embed_single(const Matrix& g, int qubit, int n) {
  check_qubit(qubit, n);
  Matrix u = (qubit == 0) ? g : Matrix(Matrix::Identity(2, 2));
  for (int q = 1; q < n; ++q) u = ops::kron(u, q == qubit ? g : Matrix(Matrix::Identity(2, 2)));
  return u;
}

Matrix cnot_matrix(int control, int target, int n) {
  check_qubit(control, n);
  check_qubit(target, n);
  if (control == target) throw std::invalid_argument("cNOT control and target must differ");
  const int d = 1 << n;
  Matrix u = Matrix::Zero(d, d);
  for (int r = 0; r < d; ++r) {
    const int out = bit_of(r, control, n) ? (r ^ (1 << (n - 1 - target))) : r;
    u(out, r) = 1.0;
  }
  return u;
}

Matrix oracle_matrix(const std::string& id, int n) {
  const int d = 1 << n;
  if (id.rfind("dj:", 0) == 0) {
    if (n != 2) throw std::invalid_argument("Deutsch-Jozsa oracles act on two qubits");
    const Matrix x1 = embed_single(ops::pauli('x'), 1, 2);
    if (id == "dj:c0") return Matrix::Identity(4, 4);
    if (id == "dj:c1") return x1;
    if (id == "dj:b0") return cnot_matrix(0, 1, 2);
    if (id == "dj:b1") return x1 * cnot_matrix(0, 1, 2);
  } else if (id.rfind("grover:", 0) == 0) {
    int k = -1;
    try {
      k = std::stoi(id.substr(7));
    } catch (const std::exception&) {
      k = -1;
    }
    if (k < 0 || k >= d) throw std::invalid_argument("Grover oracle target out of range: " + id);
    Matrix u = Matrix::Identity(d, d);
    u(k, k) = -1.0;
    return u;
  }
  throw std::invalid_argument("unknown oracle id: " + id);
}

}  // namespace

GateCircuit& GateCircuit::append(const GateCircuit& other) {
  if (other.n_qubits != n_qubits) throw std::invalid_argument("circuit qubit counts differ");
  gates.insert(gates.end(), other.gates.begin(), other.gates.end());
  return *this;
}

Matrix gate_unitary(const Gate& g, int n) {
  if (const auto* r = std::get_if<gates::Rotation>(&g)) {
    if (r->axis != 'x' && r->axis != 'y' && r->axis != 'z') throw std::invalid_argument("rotation axis must be x, y or z");
    check_qubit(r->qubit, n);
    return propagator(Matrix(r->angle_rad * ops::spin(r->axis, r->qubit, n)), 1.0);
  }
  if (const auto* h = std::get_if<gates::Hadamard>(&g))
    return embed_single((ops::pauli('x') + ops::pauli('z')) / std::sqrt(2.0), h->qubit, n);
  if (const auto* p = std::get_if<gates::Phase>(&g)) {
    Matrix m = Matrix::Identity(2, 2);
    m(1, 1) = std::polar(1.0, p->angle_rad);
    return embed_single(m, p->qubit, n);
  }
  if (const auto* c = std::get_if<gates::CNot>(&g)) return cnot_matrix(c->control, c->target, n);
  return oracle_matrix(std::get<gates::Oracle>(g).id, n);
}

Matrix circuit_unitary(const GateCircuit& c) {
  if (c.n_qubits < 1) throw std::invalid_argument("circuit needs at least one qubit");
  Matrix u = ops::identity(c.n_qubits);
  for (const auto& g : c.gates) u = gate_unitary(g, c.n_qubits) * u;
  return u;
}

bool is_two_qubit(const Gate& g) {
  return std::holds_alternative<gates::CNot>(g) || std::holds_alternative<gates::Oracle>(g);
}

DensityState run_circuit(const DensityState& rho0, const GateCircuit& circuit, const CircuitOptions& opt) {
  if (rho0.dim() != (1 << circuit.n_qubits)) throw std::invalid_argument("run_circuit: dimension mismatch");
  Matrix r = rho0.matrix();
  for (const auto& g : circuit.gates) {
    r = evolve(r, gate_unitary(g, circuit.n_qubits));
    if (opt.decoherence) {
      double t = opt.single_gate_s;
      if (is_two_qubit(g)) {
        t = opt.two_gate_s;
        if (t < 0.0) {
          const double j = std::abs(opt.decoherence->coupling(0, 1));
          if (j == 0.0) throw std::invalid_argument("run_circuit: two-qubit gate time needs J > 0");
          t = 1.0 / (2.0 * j);
        }
      }
      r = decohere(r, t, *opt.decoherence);
    }
  }
  return DensityState(hermitian_part(r));
}

GateCircuit singlet_to_zero_bridge() {
  GateCircuit c;
  c.add(gates::CNot{0, 1}).add(gates::Hadamard{0}).add(gates::Rotation{0, 'x', kPi}).add(gates::Rotation{1, 'x', kPi});
  return c;
}

GateCircuit deutsch_jozsa_circuit(const std::string& f_id) {
  oracle_matrix(f_id, 2);
  if (f_id.rfind("dj:", 0) != 0) throw std::invalid_argument("not a Deutsch-Jozsa oracle: " + f_id);
  GateCircuit c;
  c.add(gates::Rotation{1, 'x', kPi}).add(gates::Hadamard{0}).add(gates::Hadamard{1});
  c.add(gates::Oracle{f_id}).add(gates::Hadamard{0});
  return c;
}

GateCircuit grover_circuit(int target, int iterations) {
  if (target < 0 || target > 3) throw std::invalid_argument("Grover target must lie in 0..3");
  if (iterations < 0) throw std::invalid_argument("Grover iterations must be >= 0");
  GateCircuit c;
  c.add(gates::Hadamard{0}).add(gates::Hadamard{1});
  for (int k = 0; k < iterations; ++k) {
    c.add(gates::Oracle{"grover:" + std::to_string(target)});
    c.add(gates::Hadamard{0}).add(gates::Hadamard{1}).add(gates::Oracle{"grover:0"});
    c.add(gates::Hadamard{0}).add(gates::Hadamard{1});
  }
  return c;
}

namespace {

AlgorithmResult finish(const DensityState& final_state) {
  AlgorithmResult res{final_state, {}, {}, {}, 0.0};
  for (int i = 0; i < final_state.dim(); ++i) res.populations.push_back(final_state(i, i).real());
  const SpinSystem readout = SpinSystem::two_spin(100.0, 0.0);
  res.readouts.push_back(signal(final_state, pulse_deg(90, 90), readout));
  return res;
}

GateCircuit with_bridge(const GateCircuit& body, bool bridge) {
  GateCircuit c;
  if (bridge) c.append(singlet_to_zero_bridge());
  c.append(body);
  return c;
}

}  // namespace

AlgorithmResult deutsch_jozsa(const std::string& f_id, const DensityState& rho0, bool bridge, const CircuitOptions& opt) {
  if (rho0.dim() != 4) throw std::invalid_argument("Deutsch-Jozsa: two-qubit input required");
  const GateCircuit c = with_bridge(deutsch_jozsa_circuit(f_id), bridge);
  AlgorithmResult res = finish(run_circuit(rho0, c, opt));
  const double p_zero = res.populations[0] + res.populations[1];
  res.answer = p_zero > 0.5 ? "constant" : "balanced";
  const bool truly_constant = (f_id == "dj:c0" || f_id == "dj:c1");
  res.success_probability = truly_constant ? p_zero : 1.0 - p_zero;
  return res;
}

AlgorithmResult grover(int target, const DensityState& rho0, int iterations, bool bridge, const CircuitOptions& opt) {
  if (rho0.dim() != 4) throw std::invalid_argument("Grover: two-qubit input required");
  const GateCircuit c = with_bridge(grover_circuit(target, iterations), bridge);
  AlgorithmResult res = finish(run_circuit(rho0, c, opt));
  int best = 0;
  for (int i = 1; i < 4; ++i)
    if (res.populations[static_cast<std::size_t>(i)] > res.populations[static_cast<std::size_t>(best)] + 1e-12) best = i;
  res.answer = std::to_string(best);
  res.success_probability = res.populations[static_cast<std::size_t>(target)];
  return res;
}

// -------------------------------------------------------------------- twirl

std::vector<Matrix> twirl_group() {
  std::vector<Matrix> paulis{Matrix::Identity(4, 4)};
  for (char a : {'x', 'y', 'z'}) paulis.push_back(ops::kron(ops::pauli(a), ops::pauli(a)));
  // 120 degree rotation about (1,1,1): cycles the three non-singlet Bell states.
  const Matrix axis = (ops::pauli('x') + ops::pauli('y') + ops::pauli('z')) / std::sqrt(3.0);
  const Matrix r = propagator(Matrix(0.5 * (2.0 * kPi / 3.0) * axis), 1.0);
  const Matrix rr = ops::kron(r, r);
  std::vector<Matrix> out;
  Matrix v = Matrix::Identity(4, 4);
  for (int k = 0; k < 3; ++k) {
    for (const auto& p : paulis) out.push_back(v * p);
    v = rr * v;
  }
  return out;
}

DensityState full_twirl(const DensityState& rho, const TwirlOptions& opt) {
  if (rho.dim() != 4) throw std::invalid_argument("full_twirl: two-qubit state required");
  Matrix acc = Matrix::Zero(4, 4);
  if (opt.mode == TwirlMode::deterministic_average) {
    const auto group = twirl_group();
    for (const auto& u : group) acc += evolve(rho.matrix(), u);
    acc /= static_cast<double>(group.size());
  } else {
    if (opt.n_samples < 1) throw std::invalid_argument("full_twirl: n_samples must be positive");
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int s = 0; s < opt.n_samples; ++s) {
      double q[4];
      double nrm = 0.0;
      for (double& x : q) {
        x = g(rng);
        nrm += x * x;
      }
      nrm = std::sqrt(nrm);
      for (double& x : q) x /= nrm;
      Matrix u(2, 2);
      u << Complex(q[0], q[1]), Complex(q[2], q[3]), Complex(-q[2], q[3]), Complex(q[0], -q[1]);
      acc += evolve(rho.matrix(), ops::kron(u, u));
    }
    acc /= static_cast<double>(opt.n_samples);
  }
  return DensityState(hermitian_part(acc));
}

}  // namespace phnmr
