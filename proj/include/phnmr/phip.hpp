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
#include <cstdint>
#include <optional>

#include "phnmr/dynamics.hpp"

namespace phnmr {

struct RotorParams {
  double theta_r_k = 85.0;
  int j_max = 10;
  void validate() const;
};

/// Para fraction N_para / (N_para + N_ortho) at temperature T (K).
double para_fraction(double temperature_k, const RotorParams& rotor = {});

/// F rho_para + (1 - F) rho_ortho.
DensityState phip_state(double f);

enum class PhipVariant { instantaneous, delayed, incoherent, isotropic, altadena };

enum class AveragingMode { uniform_grid, monte_carlo };

struct PhipExperiment {
  PhipVariant variant = PhipVariant::instantaneous;
  double tau_s = 0.0;    // delayed
  double tau_h_s = 0.0;  // incoherent, isotropic
  double singlet_fraction_in = 1.0;
  PulseSequence detection;  // empty means no detection pulse
  int average_points = 2048;
  AveragingMode averaging = AveragingMode::uniform_grid;
  std::uint64_t seed = 0;
  std::optional<double> t1rho_s;  // isotropic only
  double mixing_nutation_hz = 10000.0;

  void validate() const;
};

/// Ordered (I+ S_alpha, I+ S_beta, I_alpha S+, I_beta S+).
using SignalVector = std::array<Complex, 4>;

DensityState run_phip(const SpinSystem& sys, const PhipExperiment& exp);
/// Closed-form limit of the incoherent variant.
DensityState incoherent_closed_form(double f);

/// Traces against the four transition operators, no detection pulse.
SignalVector signal_vector(const Matrix& rho);
SignalVector signal(const Matrix& rho, const Pulse& detection, const SpinSystem& sys);
SignalVector signal(const DensityState& rho, const Pulse& detection, const SpinSystem& sys);
SignalVector signal(const Matrix& rho, const PulseSequence& detection, const SpinSystem& sys);
SignalVector signal(const DensityState& rho, const PulseSequence& detection, const SpinSystem& sys);

enum class EnhancementCase { altadena, instantaneous, incoherent_45y, incoherent_90Iy, delayed_90x };

/// Enhancement over the thermal line amplitude B/8.
double enhancement(EnhancementCase c, double b, double delta_hz = 0.0, double tau_s = 0.0);
/// Largest |entry| of the signal relative to B/8.
double signal_enhancement(const SignalVector& sv, double b);

}  // namespace phnmr
