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

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "phnmr/dynamics.hpp"
#include "phnmr/phip.hpp"

namespace phnmr {

namespace gates {
struct Rotation {
  int qubit = 0;
  char axis = 'x';  // x, y or z
  double angle_rad = 0.0;
};
struct Hadamard {
  int qubit = 0;
};
/// diag(1, e^{i angle}).
struct Phase {
  int qubit = 0;
  double angle_rad = 0.0;
};
struct CNot {
  int control = 0;
  int target = 1;
};
/// "dj:c0", "dj:c1", "dj:b0", "dj:b1" (two-qubit f oracles) or "grover:k" (phase flip on |k>).
struct Oracle {
  std::string id;
};
}  // namespace gates

using Gate = std::variant<gates::Rotation, gates::Hadamard, gates::Phase, gates::CNot, gates::Oracle>;

struct GateCircuit {
  int n_qubits = 2;
  std::vector<Gate> gates;

  GateCircuit& add(Gate g) {
    gates.push_back(std::move(g));
    return *this;
  }
  GateCircuit& append(const GateCircuit& other);
};

Matrix gate_unitary(const Gate& g, int n);
Matrix circuit_unitary(const GateCircuit& c);
bool is_two_qubit(const Gate& g);

struct CircuitOptions {
  std::optional<SpinSystem> decoherence;  // interleave decohere() after each gate when set
  double single_gate_s = 0.0;
  double two_gate_s = -1.0;  // negative: 1/(2J) from the system
};

DensityState run_circuit(const DensityState& rho0, const GateCircuit& circuit, const CircuitOptions& opt = {});

/// Maps the singlet to |00> up to a global phase.
GateCircuit singlet_to_zero_bridge();

struct AlgorithmResult {
  DensityState final_state;
  std::vector<double> populations;
  std::vector<SignalVector> readouts;  // per-qubit selective 90_y readout
  std::string answer;
  double success_probability = 0.0;
};

AlgorithmResult deutsch_jozsa(const std::string& f_id, const DensityState& rho0, bool bridge = true,
                              const CircuitOptions& opt = {});
AlgorithmResult grover(int target, const DensityState& rho0, int iterations = 1, bool bridge = true,
                       const CircuitOptions& opt = {});
GateCircuit deutsch_jozsa_circuit(const std::string& f_id);
GateCircuit grover_circuit(int target, int iterations);

enum class TwirlMode { deterministic_average, sampled };

struct TwirlOptions {
  TwirlMode mode = TwirlMode::deterministic_average;
  std::uint64_t seed = 0;
  int n_samples = 1000;
};

DensityState full_twirl(const DensityState& rho, const TwirlOptions& opt = {});
/// Bilateral unitaries used by the deterministic average.
std::vector<Matrix> twirl_group();

}  // namespace phnmr
