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

#include <cmath>
#include <stdexcept>

#include "phnmr/entmetrics.hpp"
#include "phnmr/specproc.hpp"

namespace phnmr {

// ------------------------------------------------------------- filtration

namespace {

double filtration_delta(const SpinSystem& sys) {
  sys.validate();
  if (sys.n_qubits != 2) throw std::invalid_argument("partial twirl: two-spin system required");
  const double d = sys.delta_hz();
  if (d == 0.0) throw std::invalid_argument("partial twirl: delta must be non-zero");
  if (std::abs(sys.offsets_hz[0] + sys.offsets_hz[1]) > 1e-9 * std::abs(d))
    throw std::invalid_argument("partial twirl: transmitter must be centred");
  return std::abs(d);
}

}  // namespace

PulseSequence partial_twirl_sequence(const SpinSystem& sys, double t_g) {
  filtration_delta(sys);
  PulseSequence s;
  s.add(GradientCrush{GradientMode::homonuclear, t_g}).add(pulse_deg(90, 0)).add(GradientCrush{GradientMode::homonuclear, t_g});
  return s;
}

Matrix partial_twirl(const Matrix& rho, const SpinSystem& sys) {
  const double d = filtration_delta(sys);
  return apply(rho, partial_twirl_sequence(sys, 1.0 / d), sys);
}

DensityState partial_twirl(const DensityState& rho, const SpinSystem& sys) {
  return DensityState(hermitian_part(partial_twirl(rho.matrix(), sys)));
}

Matrix partial_twirl_half(const Matrix& rho, const SpinSystem& sys) {
  const double d = filtration_delta(sys);
  return apply(rho, partial_twirl_sequence(sys, 0.5 / d), sys);
}

DensityState partial_twirl_half(const DensityState& rho, const SpinSystem& sys) {
  return DensityState(hermitian_part(partial_twirl_half(rho.matrix(), sys)));
}

// ------------------------------------------------------------- tomography

double depletion_correction(double x, double flashes) {
  if (!(x >= 0.0 && x < 1.0)) throw std::invalid_argument("depletion: x must lie in [0, 1)");
  if (!(flashes > 0.0)) throw std::invalid_argument("depletion: flash count must be positive");
  if (x == 0.0) return 1.0;
  const double converted = -std::expm1(flashes * std::log1p(-x));  // 1 - (1 - x)^F
  return flashes * x / converted;
}

void Calibration::validate() const {
  if (!(scans > 0.0) || !(flashes > 0.0)) throw std::invalid_argument("calibration: scan and flash counts must be positive");
  if (!(active_volume_fraction > 0.0 && active_volume_fraction <= 1.0))
    throw std::invalid_argument("calibration: active volume fraction must lie in (0, 1]");
  if (!(active_volume_rel_error >= 0.0)) throw std::invalid_argument("calibration: volume error must be >= 0");
  if (!(depletion_x >= 0.0 && depletion_x < 1.0)) throw std::invalid_argument("calibration: depletion x must lie in [0, 1)");
  if (depletion_factor && !(*depletion_factor > 0.0)) throw std::invalid_argument("calibration: depletion factor must be positive");
  if (!(thermal_integral.value > 0.0) || !(thermal_integral.error >= 0.0))
    throw std::invalid_argument("calibration: thermal integral must be positive");
  if (!(boltzmann_factor > 0.0 && boltzmann_factor < 1.0))
    throw std::invalid_argument("calibration: Boltzmann factor must lie in (0, 1)");
}

double Calibration::depletion() const {
  return depletion_factor ? *depletion_factor : depletion_correction(depletion_x, flashes);
}

double Calibration::normalization() const {
  validate();
  return scans * flashes * active_volume_fraction / (thermal_integral.value * depletion() * (2.0 / boltzmann_factor));
}

namespace {

void fill_fractions(TomographyResult& r) {
  r.a.value = (1.0 - 2.0 * r.p.value - r.q.value) / 4.0;
  r.b.value = (1.0 + 2.0 * r.p.value - r.q.value) / 4.0;
  r.c.value = (1.0 - r.a.value - r.b.value) / 2.0;
  r.epsilon.value = (4.0 * r.a.value - 1.0) / 3.0;
  r.concurrence = std::min(1.0, st_concurrence_closed_form(r.a.value, r.b.value, r.c.value));
  r.eof = eof_from_concurrence(r.concurrence);
}

}  // namespace

TomographyResult tomography(const Measured& i_integral, const Measured& s_integral, const Calibration& cal) {
  const double n = cal.normalization();
  TomographyResult r;
  r.raw_i_integral = i_integral.value;
  r.raw_s_integral = s_integral.value;
  r.normalization = n;
  r.p.value = -n * s_integral.value;
  r.q.value = -n * i_integral.value;
  fill_fractions(r);

  // First-order propagation over (I, S, T, V_f).
  const double rel_t = cal.thermal_integral.error / cal.thermal_integral.value;
  const double rel_v = cal.active_volume_rel_error;
  struct Grad {
    double dp, dq, sigma;
  };
  const Grad g[4] = {
      {0.0, -n, i_integral.error},
      {-n, 0.0, s_integral.error},
      {-r.p.value, -r.q.value, rel_t},  // d/d(ln T)
      {r.p.value, r.q.value, rel_v},    // d/d(ln V_f)
  };
  double vp = 0, vq = 0, va = 0, vb = 0, vc = 0;
  for (const auto& x : g) {
    const double da = (-2.0 * x.dp - x.dq) / 4.0;
    const double db = (2.0 * x.dp - x.dq) / 4.0;
    const double dc = x.dq / 4.0;
    vp += std::pow(x.dp * x.sigma, 2);
    vq += std::pow(x.dq * x.sigma, 2);
    va += std::pow(da * x.sigma, 2);
    vb += std::pow(db * x.sigma, 2);
    vc += std::pow(dc * x.sigma, 2);
  }
  r.p.error = std::sqrt(vp);
  r.q.error = std::sqrt(vq);
  r.a.error = std::sqrt(va);
  r.b.error = std::sqrt(vb);
  r.c.error = std::sqrt(vc);
  r.epsilon.error = 4.0 * r.a.error / 3.0;
  return r;
}

TomographyResult tomography_from_pq(double p, double q) {
  TomographyResult r;
  r.normalization = 1.0;
  r.p.value = p;
  r.q.value = q;
  fill_fractions(r);
  return r;
}

PqPair pq_from_fractions(double a, double b, double c) {
  if (std::abs(a + b + 2.0 * c - 1.0) > 1e-9) throw std::invalid_argument("fractions must satisfy a + b + 2c = 1");
  return PqPair{b - a, 1.0 - 2.0 * (a + b)};
}

std::pair<Measured, Measured> antiphase_integrals(const std::vector<PeakIntegral>& lines) {
  if (lines.size() != 4) throw std::invalid_argument("antiphase integrals: four line integrals required");
  Measured i{(lines[1].value - lines[0].value) / 2.0, std::hypot(lines[0].std_error, lines[1].std_error) / 2.0};
  Measured s{(lines[2].value - lines[3].value) / 2.0, std::hypot(lines[2].std_error, lines[3].std_error) / 2.0};
  return {i, s};
}

// --------------------------------------------------------------- pipeline

PipelineResult run_tomography_pipeline(const Spectrum& phip, const Spectrum& thermal, const SpinSystem& sys,
                                       Calibration cal, const PipelineOptions& opt) {
  sys.validate();
  if (sys.n_qubits != 2) throw std::invalid_argument("pipeline: two-spin system required");
  if (!(opt.line_t2_s > 0.0) || !(opt.window_linewidths > 0.0)) throw std::invalid_argument("pipeline: bad window options");
  PipelineResult res;
  const Spectrum ph = baseline_correct(phip, opt.baseline);
  const Spectrum th = baseline_correct(thermal, opt.baseline);

  const double vi = sys.offsets_hz[0];
  const double vs = sys.offsets_hz[1];
  const double width = opt.window_linewidths / (kPi * opt.line_t2_s);
  if (opt.j_hz) {
    res.j_used_hz = *opt.j_hz;
  } else {
    // one band per multiplet, wide enough for the largest trial splitting
    const double reach = opt.j_match.j_max_hz + width;
    res.j_match = j_match(ph, {Window{vi - reach, vi + reach}, Window{vs - reach, vs + reach}}, opt.j_match);
    res.j_used_hz = res.j_match.j_hz;
  }
  if (!(res.j_used_hz > 0.0)) throw NumericError("pipeline: no antiphase splitting found");

  const DoubledSpectrum d = j_double(ph, res.j_used_hz, opt.doublings);
  const double half = std::ldexp(res.j_used_hz, opt.doublings) / 2.0;
  const auto windows = line_windows({vi + half, vi - half, vs + half, vs - half}, width);
  res.lines = integrate_peaks(d.spectrum, windows);
  for (auto& l : res.lines) {
    l.value *= d.integral_scale;
    l.std_error *= d.integral_scale;
  }
  const auto [ii, ss] = antiphase_integrals(res.lines);

  const double jt = std::abs(sys.j_hz());
  const std::vector<Window> multiplets{{vs - jt / 2.0 - width, vs + jt / 2.0 + width},
                                       {vi - jt / 2.0 - width, vi + jt / 2.0 + width}};
  const auto t = integrate_peaks(th, multiplets);
  res.thermal_per_line = Measured{(t[0].value + t[1].value) / 4.0, std::hypot(t[0].std_error, t[1].std_error) / 4.0};
  cal.thermal_integral = res.thermal_per_line;
  res.tomography = tomography(ii, ss, cal);
  return res;
}

}  // namespace phnmr
