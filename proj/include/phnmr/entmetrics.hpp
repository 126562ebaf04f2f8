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

#include "phnmr/spin_core.hpp"

namespace phnmr {

struct PptResult {
  Matrix partial_transpose;
  Eigen::VectorXd eigenvalues;  // ascending
  double min_eigenvalue = 0.0;
};

/// Partial transpose over the first qubit of a 2x2 system.
Matrix partial_transpose_first(const Matrix& rho);
PptResult ppt(const Matrix& rho);
PptResult ppt(const DensityState& rho);

double concurrence(const Matrix& rho);
double concurrence(const DensityState& rho);
double binary_entropy(double x);
double eof_from_concurrence(double c);
double eof(const DensityState& rho);

struct EntanglementReport {
  double min_pt_eigenvalue = 0.0;
  double concurrence = 0.0;
  double eof = 0.0;
  bool entangled = false;
};

EntanglementReport analyze_entanglement(const DensityState& rho);

struct StMixtureReport {
  EntanglementReport report;
  double closed_form_concurrence = 0.0;
  bool singlet_majority = false;  // a > 1/2, sufficient for entanglement
};

double st_concurrence_closed_form(double a, double b, double c);
StMixtureReport st_mixture_analysis(double a, double b, double c);

struct BraunsteinBounds {
  double eps_lower = 0.0;
  double eps_upper = 0.0;
};

BraunsteinBounds braunstein_bounds(int n);
double warren_bound(int n, double b);

enum class SeparabilityBound { lower, upper };

/// First n >= 1 at which the Warren bound reaches the chosen separability bound.
int crossover_qubits(double b, int n_max = 1000, SeparabilityBound bound = SeparabilityBound::lower);
/// Boltzmann factor at which warren(n, B) equals the chosen bound.
double crossover_boltzmann(int n, SeparabilityBound bound = SeparabilityBound::lower);

double qubit_entropy(double eps);
/// 1 - S(eps), evaluated without cancellation.
double entropy_deficit(double eps);

struct Compression {
  double k_exact = 0.0;
  double k_approx = 0.0;
};

Compression sv_compression(int n, double eps);
/// Qubits of polarization eps consumed per extracted pure qubit.
double pure_qubit_cost(double eps);

struct BoundsReport {
  int n = 0;
  double eps_lower = 0.0;
  double eps_upper = 0.0;
  double warren = 0.0;
  double k_pure = 0.0;
};

/// k_pure uses the per-spin thermal polarization B/2.
BoundsReport bounds_report(int n, double b);

}  // namespace phnmr
