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

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <random>
#include <stdexcept>

#include "phnmr/specproc.hpp"

namespace phnmr {

namespace {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// In-place DFT; sign = FFTW_FORWARD or FFTW_BACKWARD (unnormalized).
void dft(std::vector<Complex>& data, int sign) {
  const int n = static_cast<int>(data.size());
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(n, p, p, sign, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw NumericError("FFTW planning failed");
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(fftw_planner_mutex());
  fftw_destroy_plan(plan);
}

std::size_t half_index(std::size_t n) { return n / 2; }

double time_at(const Fid& fid, std::size_t j) { return fid.start_s + static_cast<double>(j) * fid.dwell_s; }

}  // namespace

void Fid::validate() const {
  if (samples.size() < 2) throw std::invalid_argument("FID needs at least two samples");
  if (!(dwell_s > 0.0)) throw std::invalid_argument("FID dwell must be positive");
}

void Spectrum::validate() const {
  if (values.size() != axis_hz.size() || values.size() < 2) throw std::invalid_argument("spectrum size mismatch");
  for (std::size_t i = 1; i < axis_hz.size(); ++i)
    if (!(axis_hz[i] > axis_hz[i - 1])) throw std::invalid_argument("spectrum axis must be increasing");
  if (!(sweep_hz > 0.0)) throw std::invalid_argument("spectrum sweep must be positive");
}

// ------------------------------------------------------------------ synthesis

std::array<Line, 4> spectral_lines(const SignalVector& sv, const SpinSystem& sys) {
  if (sys.n_qubits != 2) throw std::invalid_argument("spectral lines: two-spin system required");
  const double vi = sys.offsets_hz[0];
  const double vs = sys.offsets_hz[1];
  const double j = sys.j_hz();
  return {Line{vi + j / 2.0, sv[0]}, Line{vi - j / 2.0, sv[1]}, Line{vs + j / 2.0, sv[2]}, Line{vs - j / 2.0, sv[3]}};
}

Fid synthesize_fid(const SignalVector& sv, const SpinSystem& sys, int n_points, double sweep_hz, double line_t2_s) {
  sys.validate();
  if (n_points < 256) throw std::invalid_argument("synthesize_fid: need at least 256 points");
  if (!(line_t2_s > 0.0)) throw std::invalid_argument("synthesize_fid: line T2 must be positive");
  if (!(sweep_hz > std::abs(sys.delta_hz()) + std::abs(sys.j_hz())))
    throw std::invalid_argument("synthesize_fid: sweep must exceed delta + J");
  const auto lines = spectral_lines(sv, sys);
  for (const auto& l : lines)
    if (std::abs(l.freq_hz) >= sweep_hz / 2.0) throw NumericError("synthesize_fid: line outside the sweep (aliasing)");
  Fid fid;
  fid.dwell_s = 1.0 / sweep_hz;
  fid.samples.assign(static_cast<std::size_t>(n_points), Complex(0.0, 0.0));
  for (std::size_t j = 0; j < fid.samples.size(); ++j) {
    const double t = time_at(fid, j);
    const double env = std::exp(-t / line_t2_s);
    Complex acc(0.0, 0.0);
    for (const auto& l : lines) acc += l.amplitude * std::polar(env, 2.0 * kPi * l.freq_hz * t);
    fid.samples[j] = acc;
  }
  return fid;
}

Fid add_noise(const Fid& fid, double sigma, std::uint64_t seed) {
  fid.validate();
  if (!(sigma >= 0.0)) throw std::invalid_argument("noise sigma must be >= 0");
  Fid out = fid;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, sigma);
  for (auto& s : out.samples) {
    const double re = g(rng);
    const double im = g(rng);
    s += Complex(re, im);
  }
  return out;
}

double noise_sigma_for_snr(double snr, double amplitude, double line_t2_s, const Fid& fid) {
  if (!(snr > 0.0)) throw std::invalid_argument("SNR must be positive");
  const double peak = std::abs(amplitude) * line_t2_s;
  return peak / (snr * fid.dwell_s * std::sqrt(static_cast<double>(fid.samples.size())));
}

// ------------------------------------------------------------------ transform

Spectrum transform(const Fid& fid, int zero_fill_factor, double first_point_scale) {
  fid.validate();
  if (zero_fill_factor < 1) throw std::invalid_argument("zero-fill factor must be >= 1");
  const std::size_t n = fid.samples.size() * static_cast<std::size_t>(zero_fill_factor);
  std::vector<Complex> buf(n, Complex(0.0, 0.0));
  std::copy(fid.samples.begin(), fid.samples.end(), buf.begin());
  buf[0] *= first_point_scale;
  dft(buf, FFTW_FORWARD);

  Spectrum s;
  s.sweep_hz = fid.sweep_hz();
  s.start_s = fid.start_s;
  s.first_point_scale = first_point_scale;
  s.acquired_points = fid.samples.size();
  s.values.resize(n);
  s.axis_hz.resize(n);
  const double dnu = s.sweep_hz / static_cast<double>(n);
  const std::size_t h = half_index(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = (i + n - h) % n;
    const double nu = (static_cast<double>(i) - static_cast<double>(h)) * dnu;
    s.axis_hz[i] = nu;
    s.values[i] = fid.dwell_s * buf[k] * std::polar(1.0, -2.0 * kPi * nu * fid.start_s);
  }
  return s;
}

Fid inverse_transform(const Spectrum& spec) {
  spec.validate();
  const std::size_t n = spec.values.size();
  const double dwell = 1.0 / spec.sweep_hz;
  const std::size_t h = half_index(n);
  std::vector<Complex> buf(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = (i + n - h) % n;
    buf[k] = spec.values[i] / dwell * std::polar(1.0, 2.0 * kPi * spec.axis_hz[i] * spec.start_s);
  }
  dft(buf, FFTW_BACKWARD);
  for (auto& v : buf) v /= static_cast<double>(n);
  if (spec.first_point_scale == 0.0) throw NumericError("inverse_transform: first point was zeroed");
  buf[0] /= spec.first_point_scale;
  Fid fid;
  fid.samples = std::move(buf);
  fid.dwell_s = dwell;
  fid.start_s = spec.start_s;
  return fid;
}

// ------------------------------------------------------------------ baseline

Spectrum baseline_correct(const Spectrum& spec, const BaselineOptions& opt) {
  spec.validate();
  if (opt.order < 0) throw std::invalid_argument("baseline order must be >= 0");
  const std::size_t n = spec.values.size();
  std::vector<std::size_t> idx;
  if (!opt.regions.empty()) {
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& w : opt.regions)
        if (spec.axis_hz[i] >= w.lo_hz && spec.axis_hz[i] <= w.hi_hz) {
          idx.push_back(i);
          break;
        }
  } else {
    if (!(opt.auto_fraction > 0.0 && opt.auto_fraction <= 1.0))
      throw std::invalid_argument("baseline auto fraction must lie in (0, 1]");
    idx.resize(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    const auto keep = static_cast<std::size_t>(std::floor(opt.auto_fraction * static_cast<double>(n)));
    std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(keep), idx.end(),
                     [&](std::size_t a, std::size_t b) { return std::abs(spec.values[a]) < std::abs(spec.values[b]); });
    idx.resize(keep);
  }
  const auto cols = static_cast<Eigen::Index>(opt.order + 1);
  if (static_cast<Eigen::Index>(idx.size()) < cols + 1) throw NumericError("baseline_correct: insufficient baseline points");

  const double lo = spec.axis_hz.front();
  const double span = spec.axis_hz.back() - lo;
  auto xnorm = [&](double nu) { return 2.0 * (nu - lo) / span - 1.0; };
  Eigen::MatrixXd v(static_cast<Eigen::Index>(idx.size()), cols);
  Eigen::VectorXd yr(v.rows());
  Eigen::VectorXd yi(v.rows());
  for (Eigen::Index r = 0; r < v.rows(); ++r) {
    const std::size_t i = idx[static_cast<std::size_t>(r)];
    const double x = xnorm(spec.axis_hz[i]);
    double p = 1.0;
    for (Eigen::Index c = 0; c < cols; ++c, p *= x) v(r, c) = p;
    yr(r) = spec.values[i].real();
    yi(r) = spec.values[i].imag();
  }
  const auto qr = v.colPivHouseholderQr();
  if (qr.rank() < cols) throw NumericError("baseline_correct: baseline points do not constrain the polynomial");
  const Eigen::VectorXd cr = qr.solve(yr);
  const Eigen::VectorXd ci = qr.solve(yi);

  Spectrum out = spec;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = xnorm(spec.axis_hz[i]);
    double br = 0.0;
    double bi = 0.0;
    double p = 1.0;
    for (Eigen::Index c = 0; c < cols; ++c, p *= x) {
      br += cr(c) * p;
      bi += ci(c) * p;
    }
    out.values[i] -= Complex(br, bi);
  }
  return out;
}

// ---------------------------------------------------------------- integration

std::vector<Window> line_windows(const std::vector<double>& centres_hz, double width_hz) {
  std::vector<double> c = centres_hz;
  std::sort(c.begin(), c.end());
  std::vector<Window> out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    double lo = c[i] - width_hz;
    double hi = c[i] + width_hz;
    if (i > 0) lo = std::max(lo, 0.5 * (c[i - 1] + c[i]));
    if (i + 1 < c.size()) hi = std::min(hi, 0.5 * (c[i] + c[i + 1]));
    out.push_back(Window{lo, hi});
  }
  // Restore the caller's ordering.
  std::vector<Window> ordered;
  for (double x : centres_hz) {
    const auto it = std::find(c.begin(), c.end(), x);
    ordered.push_back(out[static_cast<std::size_t>(it - c.begin())]);
  }
  return ordered;
}

std::vector<PeakIntegral> integrate_peaks(const Spectrum& spec, const std::vector<Window>& windows,
                                          const std::vector<Window>& noise_regions) {
  spec.validate();
  const std::size_t n = spec.values.size();
  const double dnu = spec.resolution_hz();
  std::vector<Window> sorted = windows;
  std::sort(sorted.begin(), sorted.end(), [](const Window& a, const Window& b) { return a.lo_hz < b.lo_hz; });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (!(sorted[i].hi_hz > sorted[i].lo_hz)) throw std::invalid_argument("integration window must have lo < hi");
    if (sorted[i].lo_hz < spec.axis_hz.front() || sorted[i].hi_hz > spec.axis_hz.back())
      throw std::out_of_range("integration window outside the spectral axis");
    if (i > 0 && sorted[i].lo_hz < sorted[i - 1].hi_hz) throw std::invalid_argument("integration windows overlap");
  }
  auto inside = [](double nu, const Window& w) { return nu >= w.lo_hz && nu < w.hi_hz; };

  // Baseline noise: points in the noise regions, or outside every window by default.
  std::vector<double> noise;
  std::vector<std::vector<double>> runs(1);
  for (std::size_t i = 0; i < n; ++i) {
    const double nu = spec.axis_hz[i];
    bool is_noise;
    if (!noise_regions.empty()) {
      is_noise = std::any_of(noise_regions.begin(), noise_regions.end(), [&](const Window& w) { return inside(nu, w); });
    } else {
      is_noise = std::none_of(windows.begin(), windows.end(), [&](const Window& w) { return inside(nu, w); });
    }
    if (is_noise) {
      noise.push_back(spec.values[i].real());
      runs.back().push_back(spec.values[i].real());
    } else if (!runs.back().empty()) {
      runs.emplace_back();
    }
  }

  std::vector<PeakIntegral> out;
  for (const auto& w : windows) {
    double sum = 0.0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (inside(spec.axis_hz[i], w)) {
        sum += spec.values[i].real();
        ++m;
      }
    PeakIntegral pi;
    pi.value = sum * dnu;
    // Integrals over baseline blocks of the same width.
    std::vector<double> blocks;
    if (m > 0)
      for (const auto& r : runs)
        for (std::size_t s = 0; s + m <= r.size(); s += m)
          blocks.push_back(std::accumulate(r.begin() + static_cast<std::ptrdiff_t>(s),
                                           r.begin() + static_cast<std::ptrdiff_t>(s + m), 0.0) *
                           dnu);
    if (blocks.size() >= 2) {
      const double mean = std::accumulate(blocks.begin(), blocks.end(), 0.0) / static_cast<double>(blocks.size());
      double var = 0.0;
      for (double b : blocks) var += (b - mean) * (b - mean);
      pi.std_error = std::sqrt(var / static_cast<double>(blocks.size() - 1));
    } else if (noise.size() >= 2) {
      const double mean = std::accumulate(noise.begin(), noise.end(), 0.0) / static_cast<double>(noise.size());
      double var = 0.0;
      for (double x : noise) var += (x - mean) * (x - mean);
      pi.std_error = std::sqrt(var / static_cast<double>(noise.size() - 1)) * dnu * std::sqrt(static_cast<double>(m));
    }
    out.push_back(pi);
  }
  return out;
}

// ----------------------------------------------------------- J processing

Fid excise(const Spectrum& spec, const Window& band) {
  spec.validate();
  if (!(band.hi_hz > band.lo_hz)) throw std::invalid_argument("excise: band must have lo < hi");
  Spectrum cut = spec;
  for (std::size_t i = 0; i < cut.values.size(); ++i)
    if (cut.axis_hz[i] < band.lo_hz || cut.axis_hz[i] > band.hi_hz) cut.values[i] = Complex(0.0, 0.0);
  return inverse_transform(cut);
}

namespace {

JMatchResult j_grid(const JMatchOptions& opt) {
  if (opt.steps < 3) throw std::invalid_argument("j_match: grid needs at least three points");
  if (!(opt.j_max_hz > opt.j_min_hz) || opt.j_min_hz < 0.0) throw std::invalid_argument("j_match: invalid J range");
  JMatchResult res;
  res.grid_step_hz = (opt.j_max_hz - opt.j_min_hz) / static_cast<double>(opt.steps - 1);
  for (int g = 0; g < opt.steps; ++g) res.grid_hz.push_back(opt.j_min_hz + res.grid_step_hz * g);
  res.objective.assign(res.grid_hz.size(), 0.0);
  return res;
}

void accumulate_objective(JMatchResult& res, const Fid& fid, const JMatchOptions& opt) {
  Fid mod = fid;
  for (std::size_t g = 0; g < res.grid_hz.size(); ++g) {
    const double jp = res.grid_hz[g];
    for (std::size_t k = 0; k < fid.samples.size(); ++k)
      mod.samples[k] = fid.samples[k] * (2.0 * std::cos(kPi * jp * time_at(fid, k)));
    const Spectrum s = transform(mod, opt.zero_fill_factor);
    double obj = 0.0;
    for (const auto& v : s.values) obj += std::abs(v.real());
    res.objective[g] += obj * s.resolution_hz();
  }
}

void pick_minimum(JMatchResult& res, const JMatchOptions& opt, double sweep_hz) {
  const auto [mn, mx] = std::minmax_element(res.objective.begin(), res.objective.end());
  if (*mx - *mn <= 1e-9 * std::abs(*mx)) {
    res.flat = true;
    res.j_hz = opt.j_min_hz;
  } else {
    const auto idx = static_cast<std::size_t>(mn - res.objective.begin());
    if (idx + 1 == res.objective.size()) throw NumericError("j_match: no interior minimum on the J' grid");
    res.j_hz = res.grid_hz[idx];
  }
  res.j_nyquist = res.j_hz / (sweep_hz / 2.0);
}

}  // namespace

JMatchResult j_match(const Fid& fid, const JMatchOptions& opt) {
  fid.validate();
  JMatchResult res = j_grid(opt);
  accumulate_objective(res, fid, opt);
  pick_minimum(res, opt, fid.sweep_hz());
  return res;
}

JMatchResult j_match(const Spectrum& spec, const JMatchOptions& opt) { return j_match(inverse_transform(spec), opt); }

JMatchResult j_match(const Spectrum& spec, const std::vector<Window>& bands, const JMatchOptions& opt) {
  if (bands.empty()) return j_match(spec, opt);
  JMatchResult res = j_grid(opt);
  for (const auto& b : bands) accumulate_objective(res, excise(spec, b), opt);
  pick_minimum(res, opt, spec.sweep_hz);
  return res;
}

DoubledSpectrum j_double(const Spectrum& spec, double j_hz, int m) {
  spec.validate();
  if (m < 0) throw std::invalid_argument("j_double: m must be >= 0");
  DoubledSpectrum out{spec, m, std::ldexp(1.0, m)};
  if (m == 0) return out;
  if (!(j_hz > 0.0)) throw std::invalid_argument("j_double: J must be positive");
  Fid fid = inverse_transform(spec);
  // stage s splits every line by the current apparent J, 2^s J
  for (std::size_t k = 0; k < fid.samples.size(); ++k) {
    const double t = time_at(fid, k);
    for (int s = 0; s < m; ++s) fid.samples[k] *= std::cos(kPi * std::ldexp(j_hz, s) * t);
  }
  out.spectrum = transform(fid, 1, spec.first_point_scale);
  out.spectrum.acquired_points = spec.acquired_points;
  return out;
}

}  // namespace phnmr
