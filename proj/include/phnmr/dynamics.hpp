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

#include <variant>
#include <vector>

#include "phnmr/spin_core.hpp"

namespace phnmr {

enum class CouplingMode { weak, strong };

/// Angular-frequency units (rad/s), hbar = 1.
struct Hamiltonian {
  Matrix matrix;
  CouplingMode mode = CouplingMode::weak;
};

/// H = H_c + H_nc for two spins, with sigma/delta the average/differential offsets.
struct HamiltonianSplit {
  Matrix commuting;
  Matrix non_commuting;
  double sigma_rad_s = 0.0;
  double delta_rad_s = 0.0;
};

Hamiltonian hamiltonian(const SpinSystem& sys, CouplingMode mode = CouplingMode::weak);
HamiltonianSplit split_two_spin(const SpinSystem& sys, CouplingMode mode = CouplingMode::weak);

inline constexpr int kAllQubits = -1;

/// Ideal rotation unless duration_s > 0, in which case the RF acts together with
/// the internal (isotropically coupled) Hamiltonian for that long.
struct Pulse {
  double flip_rad = kPi / 2;
  double phase_rad = 0.0;
  int qubit = kAllQubits;
  double flip_error_rad = 0.0;
  double duration_s = 0.0;
};

struct Delay {
  double t_s = 0.0;
};

enum class GradientMode { homonuclear, heteronuclear };

struct GradientCrush {
  GradientMode mode = GradientMode::homonuclear;
  double duration_s = 0.0;
};

struct ZRotation {
  std::vector<double> angles_rad;  // one per qubit
};

enum class MixingKind { mlev16 };

struct MixingBlock {
  MixingKind kind = MixingKind::mlev16;
  double duration_s = 0.0;
  double nutation_hz = 10000.0;
};

struct Decohere {
  double t_s = 0.0;
};

using SequenceElement = std::variant<Pulse, Delay, GradientCrush, ZRotation, MixingBlock, Decohere>;

double element_duration(const SequenceElement& el);

struct PulseSequence {
  std::vector<SequenceElement> elements;  // time order: first element acts first

  double total_duration() const;
  PulseSequence& add(SequenceElement el) {
    elements.push_back(std::move(el));
    return *this;
  }
  PulseSequence& append(const PulseSequence& other);
  bool is_unitary() const;
};

/// theta_phi in degrees; qubit = kAllQubits for a hard pulse.
Pulse pulse_deg(double flip_deg, double phase_deg, int qubit = kAllQubits);

Matrix pulse_propagator(const Pulse& p, const SpinSystem& sys);
Matrix zrotation_propagator(const ZRotation& z, int n);
Matrix propagator(const Hamiltonian& h, double t);
Matrix propagator(const Matrix& h, double t);

Matrix evolve(const Matrix& rho, const Matrix& u);
DensityState evolve(const DensityState& rho, const Matrix& u);
Matrix free_evolve(const Matrix& rho, const Hamiltonian& h, double t);
DensityState free_evolve(const DensityState& rho, const Hamiltonian& h, double t);

Matrix crush(const Matrix& rho, GradientMode mode = GradientMode::homonuclear);
DensityState crush(const DensityState& rho, GradientMode mode = GradientMode::homonuclear);
Matrix crush_sliced(const Matrix& rho, int n_slices, double phase_span_rad);
DensityState crush_sliced(const DensityState& rho, int n_slices, double phase_span_rad);
Matrix timed_gradient(const Matrix& rho, const SpinSystem& sys, double t_g,
                      GradientMode mode = GradientMode::homonuclear);
DensityState timed_gradient(const DensityState& rho, const SpinSystem& sys, double t_g,
                            GradientMode mode = GradientMode::homonuclear);

std::vector<Matrix> decoherence_kraus(double t, const SpinSystem& sys);
Matrix decohere(const Matrix& rho, double t, const SpinSystem& sys);
DensityState decohere(const DensityState& rho, double t, const SpinSystem& sys);

/// Linear action of a sequence; works on deviation operators as well as states.
Matrix apply(const Matrix& rho, const PulseSequence& seq, const SpinSystem& sys,
             CouplingMode mode = CouplingMode::weak);
DensityState apply(const DensityState& rho, const PulseSequence& seq, const SpinSystem& sys,
                   CouplingMode mode = CouplingMode::weak);
/// Overall propagator; throws if the sequence contains a gradient or decoherence step.
Matrix sequence_unitary(const PulseSequence& seq, const SpinSystem& sys, CouplingMode mode = CouplingMode::weak);

PulseSequence spin_echo(double tau_s);
PulseSequence jump_return_90Iy(const SpinSystem& sys);
double mlev16_supercycle_s(double nutation_hz);
PulseSequence mlev16_supercycle(double nutation_hz);
PulseSequence mlev16(const SpinSystem& sys, double duration_s, double nutation_hz = 10000.0);

}  // namespace phnmr
