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
#include <vector>

#include "phnmr/phip.hpp"

namespace phnmr {

struct Fid {
  std::vector<Complex> samples;
  double dwell_s = 0.0;
  double start_s = 0.0;

  void validate() const;
  double sweep_hz() const { return 1.0 / dwell_s; }
};

struct Spectrum {
  std::vector<Complex> values;
  std::vector<double> axis_hz;  // increasing, transmitter at 0
  double sweep_hz = 0.0;
  double start_s = 0.0;            // time origin of the underlying FID
  double first_point_scale = 0.5;  // weight applied to the first FID sample
  std::size_t acquired_points = 0;

  void validate() const;
  double resolution_hz() const { return sweep_hz / static_cast<double>(values.size()); }
};

struct Line {
  double freq_hz = 0.0;
  Complex amplitude;
};

/// Line positions for a two-spin signal vector: I entries at nu_I +/- J/2, S entries at nu_S +/- J/2.
std::array<Line, 4> spectral_lines(const SignalVector& sv, const SpinSystem& sys);

Fid synthesize_fid(const SignalVector& sv, const SpinSystem& sys, int n_points, double sweep_hz, double line_t2_s);
Fid add_noise(const Fid& fid, double sigma, std::uint64_t seed);
/// Time-domain sigma (per quadrature) giving the requested peak-height SNR for a line of the given amplitude.
double noise_sigma_for_snr(double snr, double amplitude, double line_t2_s, const Fid& fid);

Spectrum transform(const Fid& fid, int zero_fill_factor = 1, double first_point_scale = 0.5);
/// Inverse of transform, including its zero-filled tail.
Fid inverse_transform(const Spectrum& spec);

struct Window {
  double lo_hz = 0.0;
  double hi_hz = 0.0;
};

struct BaselineOptions {
  int order = 2;
  std::vector<Window> regions;  // empty: auto-detect
  double auto_fraction = 0.4;
};

Spectrum baseline_correct(const Spectrum& spec, const BaselineOptions& opt = {});

struct PeakIntegral {
  double value = 0.0;
  double std_error = 0.0;
};

/// Windows around each predicted line: centre +/- width_hz.
std::vector<Window> line_windows(const std::vector<double>& centres_hz, double width_hz);
std::vector<PeakIntegral> integrate_peaks(const Spectrum& spec, const std::vector<Window>& windows,
                                          const std::vector<Window>& noise_regions = {});

struct JMatchOptions {
  double j_min_hz = 0.0;
  double j_max_hz = 20.0;
  int steps = 401;
  int zero_fill_factor = 2;
};

struct JMatchResult {
  double j_hz = 0.0;
  double j_nyquist = 0.0;
  double grid_step_hz = 0.0;
  bool flat = false;
  std::vector<double> grid_hz;
  std::vector<double> objective;
};

JMatchResult j_match(const Fid& fid, const JMatchOptions& opt = {});
JMatchResult j_match(const Spectrum& spec, const JMatchOptions& opt = {});
/// Objective summed over the excised bands; all of the spectrum when bands is empty.
JMatchResult j_match(const Spectrum& spec, const std::vector<Window>& bands, const JMatchOptions& opt = {});
/// Keeps only the band [lo, hi] and returns its time-domain signal.
Fid excise(const Spectrum& spec, const Window& band);

struct DoubledSpectrum {
  Spectrum spectrum;
  int stages = 0;
  double integral_scale = 1.0;  // multiply measured integrals by this
};

DoubledSpectrum j_double(const Spectrum& spec, double j_hz, int m);

// Partial-twirl filtration: G(t_g) 90_x G(t_g).
Matrix partial_twirl(const Matrix& rho, const SpinSystem& sys);
DensityState partial_twirl(const DensityState& rho, const SpinSystem& sys);
Matrix partial_twirl_half(const Matrix& rho, const SpinSystem& sys);
DensityState partial_twirl_half(const DensityState& rho, const SpinSystem& sys);
PulseSequence partial_twirl_sequence(const SpinSystem& sys, double t_g);

struct Measured {
  double value = 0.0;
  double error = 0.0;
};

struct Calibration {
  double scans = 1.0;
  double flashes = 1.0;
  double active_volume_fraction = 1.0;
  double active_volume_rel_error = 0.0;
  double depletion_x = 0.0;
  std::optional<double> depletion_factor;  // overrides depletion_x when set
  Measured thermal_integral{1.0, 0.0};
  double boltzmann_factor = 6.48e-5;

  void validate() const;
  double depletion() const;
  /// S F V_f / (T dep (2/B)).
  double normalization() const;
};

struct TomographyResult {
  double raw_i_integral = 0.0;
  double raw_s_integral = 0.0;
  double normalization = 0.0;
  Measured p, q;
  Measured a, b, c;
  Measured epsilon;
  double concurrence = 0.0;
  double eof = 0.0;
};

double depletion_correction(double x, double flashes);

/// I and S integrals are the signed antiphase magnitudes: positive for a singlet-like pattern.
TomographyResult tomography(const Measured& i_integral, const Measured& s_integral, const Calibration& cal);
TomographyResult tomography_from_pq(double p, double q);

struct PqPair {
  double p = 0.0;
  double q = 0.0;
};
PqPair pq_from_fractions(double a, double b, double c);

/// Signed antiphase integrals from the four line integrals (order of spectral_lines).
std::pair<Measured, Measured> antiphase_integrals(const std::vector<PeakIntegral>& lines);

struct PipelineOptions {
  int doublings = 4;
  std::optional<double> j_hz;  // skip J matching when set
  JMatchOptions j_match;
  double window_linewidths = 8.0;
  double line_t2_s = 0.3;  // sets the linewidth 1/(pi T2) used for windows
  BaselineOptions baseline;
};

struct PipelineResult {
  TomographyResult tomography;
  JMatchResult j_match;
  double j_used_hz = 0.0;
  std::vector<PeakIntegral> lines;  // rescaled, order of spectral_lines
  Measured thermal_per_line;
};

/// Baseline, J match, J doubling, integration and tomography of a filtered PHIP
/// spectrum against a thermal reference spectrum of the same system.
PipelineResult run_tomography_pipeline(const Spectrum& phip, const Spectrum& thermal, const SpinSystem& sys,
                                       Calibration cal, const PipelineOptions& opt = {});

}  // namespace phnmr
