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

#include "commands.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "phnmr/io.hpp"

namespace phnmr::cli {

namespace {

namespace fs = std::filesystem;

const std::vector<std::string> kTopLevel{"seed", "format", "system", "experiment", "processing", "tomography",
                                         "bounds", "algo", "twirl", "entmetrics"};

Section root(const RunContext& ctx) {
  Section r(ctx.config, "");
  r.allow(kTopLevel);
  return r;
}

// ---------------------------------------------------------------- builders

constexpr double kPlanck = 6.62607015e-34;
constexpr double kBoltzmannK = 1.380649e-23;

SpinSystem system_from(const Section& s) {
  s.allow({"delta_hz", "j_hz", "t1_s", "t2_s", "boltzmann", "field_mhz", "temperature_k", "offsets_hz"});
  double b = 6.48e-5;
  if (s.has("boltzmann")) {
    b = s.positive("boltzmann", b);
  } else if (s.has("field_mhz") || s.has("temperature_k")) {
    const double f = s.positive("field_mhz", 0.0) * 1e6;
    const double t = s.positive("temperature_k", 0.0);
    b = kPlanck * f / (kBoltzmannK * t);
  }
  SpinSystem sys = SpinSystem::two_spin(s.number("delta_hz"), s.number("j_hz"), s.positive("t1_s", kInf),
                                        s.positive("t2_s", kInf), b);
  if (s.has("offsets_hz")) {
    const auto o = s.numbers("offsets_hz");
    if (o.size() != 2) s.fail("offsets_hz", "expected two offsets");
    sys.offsets_hz = {o[0], o[1]};
  }
  try {
    sys.validate();
  } catch (const std::invalid_argument& e) {
    s.fail("", e.what());
  }
  return sys;
}

std::string slurp(const fs::path& p, const Section& s, const std::string& key) {
  std::ifstream in(p);
  if (!in) s.fail(key, "cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path resolve(const RunContext& ctx, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : ctx.base_dir / path;
}

DensityState state_from(const Section& s, const RunContext& ctx) {
  const std::string kind =
      s.choice("kind", {"singlet", "werner", "singlet_triplet", "para_ortho", "thermal", "density", "file"}, "singlet");
  try {
    if (kind == "singlet") {
      s.allow({"kind"});
      return states::singlet();
    }
    if (kind == "werner") {
      s.allow({"kind", "epsilon"});
      return states::werner(s.number("epsilon"));
    }
    if (kind == "singlet_triplet") {
      s.allow({"kind", "a", "b", "c"});
      return states::singlet_triplet(s.number("a"), s.number("b"), s.number("c"));
    }
    if (kind == "para_ortho") {
      s.allow({"kind", "para_fraction"});
      return states::para_ortho(s.number("para_fraction"));
    }
    if (kind == "thermal") {
      s.allow({"kind", "boltzmann"});
      return states::thermal(2, s.positive("boltzmann", 6.48e-5));
    }
    if (kind == "density") {
      s.allow({"kind", "matrix"});
      return io::density_from_json(s.child("matrix").raw());
    }
    s.allow({"kind", "path"});
    const fs::path p = resolve(ctx, s.text("path", ""));
    const std::string body = slurp(p, s, "path");
    return p.extension() == ".json" ? io::density_from_json(json::parse(body)) : io::density_from_csv(body);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    s.fail("", e.what());
  } catch (const json::exception& e) {
    s.fail("", e.what());
  }
}

PulseSequence named_detection(const std::string& name, const SpinSystem& sys, const Section& s) {
  PulseSequence seq;
  if (name == "none") return seq;
  if (name == "90x") return seq.add(pulse_deg(90, 0));
  if (name == "90y") return seq.add(pulse_deg(90, 90));
  if (name == "45y") return seq.add(pulse_deg(45, 90));
  if (name == "90Iy") return jump_return_90Iy(sys);
  if (name == "90Iy_ideal") return seq.add(pulse_deg(90, 90, 0));
  s.fail("detection", "expected none, 90x, 90y, 45y, 90Iy, 90Iy_ideal or a sequence list");
}

PulseSequence detection_from(const Section& s, const SpinSystem& sys, std::string& label) {
  if (!s.has("detection")) {
    label = "90y";
    return named_detection(label, sys, s);
  }
  const json& d = s.raw()["detection"];
  if (d.is_string()) {
    label = d.get<std::string>();
    return named_detection(label, sys, s);
  }
  label = "sequence";
  try {
    return io::sequence_from_json(d);
  } catch (const std::invalid_argument& e) {
    s.fail("detection", e.what());
  }
}

PhipVariant variant_of(const std::string& v) {
  if (v == "delayed") return PhipVariant::delayed;
  if (v == "incoherent") return PhipVariant::incoherent;
  if (v == "isotropic") return PhipVariant::isotropic;
  if (v == "altadena") return PhipVariant::altadena;
  return PhipVariant::instantaneous;
}

std::optional<EnhancementCase> closed_form_case(const std::string& variant, const std::string& det) {
  if (variant == "altadena" && det == "90y") return EnhancementCase::altadena;
  if (variant == "instantaneous" && (det == "90Iy" || det == "90Iy_ideal")) return EnhancementCase::instantaneous;
  if (variant == "incoherent" && det == "45y") return EnhancementCase::incoherent_45y;
  if (variant == "incoherent" && (det == "90Iy" || det == "90Iy_ideal")) return EnhancementCase::incoherent_90Iy;
  if (variant == "delayed" && det == "90x") return EnhancementCase::delayed_90x;
  return std::nullopt;
}

struct Acquisition {
  int points = 8192;
  double sweep_hz = 2000.0;
  double line_t2_s = 0.3;
  int zero_fill = 1;
  std::optional<double> snr;
  std::optional<double> noise_sigma;
};

Acquisition acquisition_from(const Section& p) {
  Acquisition a;
  a.points = p.integer("points", a.points);
  a.sweep_hz = p.positive("sweep_hz", a.sweep_hz);
  a.line_t2_s = p.positive("line_t2_s", a.line_t2_s);
  a.zero_fill = p.integer("zero_fill", a.zero_fill);
  if (a.zero_fill < 1) p.fail("zero_fill", "must be >= 1");
  if (p.has("snr")) a.snr = p.positive("snr", 1.0);
  if (p.has("noise_sigma")) a.noise_sigma = p.number("noise_sigma");
  if (a.snr && a.noise_sigma) p.fail("snr", "give snr or noise_sigma, not both");
  return a;
}

Fid acquire(const SignalVector& sv, const SpinSystem& sys, const Acquisition& a, std::uint64_t seed) {
  Fid fid = synthesize_fid(sv, sys, a.points, a.sweep_hz, a.line_t2_s);
  double peak = 0.0;
  for (const auto& v : sv) peak = std::max(peak, std::abs(v));
  double sigma = a.noise_sigma.value_or(0.0);
  if (a.snr && peak > 0.0) sigma = noise_sigma_for_snr(*a.snr, peak, a.line_t2_s, fid);
  return sigma > 0.0 ? add_noise(fid, sigma, seed) : fid;
}

// ---------------------------------------------------------------- writers

void write_state(OutputSink& out, const std::string& stem, const DensityState& rho) {
  if (out.format() == Format::csv)
    out.write(stem + ".csv", io::to_csv(rho, out.header("re,im dimensionless")));
  else
    out.write_json(stem + ".json", out.stamp(json{{"state", io::to_json(rho)}}));
}

void write_fid(OutputSink& out, const std::string& stem, const Fid& f) {
  if (out.format() == Format::csv)
    out.write(stem + ".csv", io::to_csv(f, out.header("t_s seconds, re/im arbitrary")));
  else
    out.write_json(stem + ".json", out.stamp(io::to_json(f), json{{"t", "s"}}));
}

void write_spectrum(OutputSink& out, const std::string& stem, const Spectrum& s) {
  if (out.format() == Format::csv)
    out.write(stem + ".csv", io::to_csv(s, out.header("freq_hz hertz, re/im arbitrary")));
  else
    out.write_json(stem + ".json", out.stamp(io::to_json(s), json{{"axis", "Hz"}}));
}

struct Row {
  std::string name;
  double value;
  double error;
};

void write_quantities(OutputSink& out, const std::string& stem, const std::vector<Row>& rows) {
  if (out.format() == Format::csv) {
    std::ostringstream os;
    for (const auto& h : out.header("all quantities dimensionless")) os << "# " << h << '\n';
    os << "quantity,value,error\n";
    for (const auto& r : rows) os << r.name << ',' << io::fmt(r.value) << ',' << io::fmt(r.error) << '\n';
    out.write(stem + ".csv", os.str());
  } else {
    json j = json::object();
    for (const auto& r : rows) j[r.name] = json{{"value", r.value}, {"error", r.error}};
    out.write_json(stem + ".json", out.stamp(json{{"quantities", j}}));
  }
}

Spectrum read_spectrum(const RunContext& ctx, const Section& s, const std::string& key) {
  const fs::path p = resolve(ctx, s.text(key, ""));
  const std::string body = slurp(p, s, key);
  try {
    return p.extension() == ".json" ? io::spectrum_from_json(json::parse(body)) : io::spectrum_from_csv(body);
  } catch (const std::invalid_argument& e) {
    s.fail(key, p.string() + ": " + e.what());
  } catch (const json::exception& e) {
    s.fail(key, p.string() + ": " + e.what());
  }
}

}  // namespace

// ------------------------------------------------------------------- phip

void cmd_phip(const RunContext& ctx, OutputSink& out) {
  const Section r = root(ctx);
  const SpinSystem sys = system_from(r.child("system"));
  const Section e = r.child_or_empty("experiment");
  e.allow({"variant", "tau_s", "tau_h_s", "singlet_fraction", "averaging", "average_points", "t1rho_s",
           "mixing_nutation_hz", "detection", "para_temperature_k"});
  const Section p = r.child_or_empty("processing");
  p.allow({"points", "sweep_hz", "line_t2_s", "zero_fill", "snr", "noise_sigma"});

  const std::string variant =
      e.choice("variant", {"instantaneous", "delayed", "incoherent", "isotropic", "altadena"}, "instantaneous");
  PhipExperiment ex;
  ex.variant = variant_of(variant);
  ex.tau_s = e.number("tau_s", 0.0);
  ex.tau_h_s = e.number("tau_h_s", 0.0);
  ex.singlet_fraction_in = e.has("para_temperature_k") ? para_fraction(e.positive("para_temperature_k", 77.0))
                                                       : e.number("singlet_fraction", 1.0);
  ex.averaging = e.choice("averaging", {"grid", "monte_carlo"}, "grid") == "grid" ? AveragingMode::uniform_grid
                                                                                  : AveragingMode::monte_carlo;
  ex.average_points = e.integer("average_points", ex.average_points);
  if (e.has("t1rho_s")) ex.t1rho_s = e.positive("t1rho_s", 1.0);
  ex.mixing_nutation_hz = e.positive("mixing_nutation_hz", ex.mixing_nutation_hz);
  ex.seed = ctx.seed;
  try {
    ex.validate();
  } catch (const std::invalid_argument& err) {
    e.fail("", err.what());
  }
  std::string det_label;
  const PulseSequence det = detection_from(e, sys, det_label);
  const Acquisition acq = acquisition_from(p);

  const DensityState rho = run_phip(sys, ex);
  const SignalVector sv = signal(rho, det, sys);
  const double b = sys.boltzmann_factor;

  json lines = json::array();
  for (const auto& l : spectral_lines(sv, sys))
    lines.push_back(json{{"freq_hz", l.freq_hz}, {"re", l.amplitude.real()}, {"im", l.amplitude.imag()}});
  json doc{{"variant", variant},
           {"detection", det_label},
           {"singlet_fraction_in", ex.singlet_fraction_in},
           {"singlet_fraction_out", singlet_fraction(rho)},
           {"boltzmann", b},
           {"signal", io::to_json(sv)},
           {"lines", lines},
           {"signal_enhancement", signal_enhancement(sv, b)}};
  if (const auto c = closed_form_case(variant, det_label))
    doc["enhancement_closed_form"] = enhancement(*c, b, sys.delta_hz(), ex.tau_s);
  else
    doc["enhancement_closed_form"] = nullptr;

  const Fid fid = acquire(sv, sys, acq, ctx.seed);
  const Spectrum spec = transform(fid, acq.zero_fill);
  write_state(out, "state", rho);
  write_fid(out, "fid", fid);
  write_spectrum(out, "spectrum", spec);
  out.write_json("phip.json", out.stamp(doc, json{{"freq_hz", "Hz"}, {"signal", "trace units"}}));

  std::cout << "variant " << variant << ", detection " << det_label << "\n";
  std::cout << "signal (I+Sa, I+Sb, IaS+, IbS+):";
  for (const auto& v : sv) std::cout << ' ' << io::fmt(v.real()) << (v.imag() < 0 ? "" : "+") << io::fmt(v.imag()) << 'i';
  std::cout << "\nsignal enhancement " << io::fmt(doc["signal_enhancement"].get<double>()) << "\n";
}

// -------------------------------------------------------------- tomography

void cmd_tomography(const RunContext& ctx, OutputSink& out) {
  const Section r = root(ctx);
  const Section t = r.child("tomography");
  t.allow({"source", "calibration", "synthetic", "phip_spectrum", "thermal_spectrum", "integrals"});
  const Section p = r.child_or_empty("processing");
  p.allow({"points", "sweep_hz", "line_t2_s", "zero_fill", "snr", "noise_sigma", "doublings", "j_hz", "j_grid",
           "window_linewidths", "baseline_order"});

  const Section c = t.child_or_empty("calibration");
  c.allow({"scans", "flashes", "active_volume_fraction", "active_volume_rel_error", "depletion_x", "depletion_factor",
           "boltzmann", "enhancement", "thermal_integral", "thermal_integral_error"});
  Calibration cal;
  cal.scans = c.positive("scans", 1.0);
  cal.flashes = c.positive("flashes", 1.0);
  cal.active_volume_fraction = c.positive("active_volume_fraction", 1.0);
  cal.active_volume_rel_error = c.number("active_volume_rel_error", 0.0);
  cal.depletion_x = c.number("depletion_x", 0.0);
  if (c.has("depletion_factor")) cal.depletion_factor = c.positive("depletion_factor", 1.0);
  if (c.has("enhancement") && c.has("boltzmann")) c.fail("enhancement", "give boltzmann or enhancement, not both");
  cal.boltzmann_factor = c.has("enhancement") ? 2.0 / c.positive("enhancement", 30864.0) : c.positive("boltzmann", 6.48e-5);
  cal.thermal_integral = {c.positive("thermal_integral", 1.0), c.number("thermal_integral_error", 0.0)};
  try {
    cal.validate();
  } catch (const std::invalid_argument& e) {
    c.fail("", e.what());
  }

  const std::string source = t.choice("source", {"synthetic", "files", "integrals"}, "synthetic");
  json doc{{"source", source}};
  TomographyResult res;
  if (source == "integrals") {
    const Section in = t.child("integrals");
    in.allow({"i", "s", "i_error", "s_error"});
    res = tomography({in.number("i"), in.number("i_error", 0.0)}, {in.number("s"), in.number("s_error", 0.0)}, cal);
  } else {
    const SpinSystem sys = system_from(r.child("system"));
    PipelineOptions opt;
    opt.doublings = p.integer("doublings", opt.doublings);
    if (p.has("j_hz")) opt.j_hz = p.positive("j_hz", 1.0);
    const Section g = p.child_or_empty("j_grid");
    g.allow({"min_hz", "max_hz", "steps", "zero_fill"});
    opt.j_match.j_min_hz = g.number("min_hz", opt.j_match.j_min_hz);
    opt.j_match.j_max_hz = g.number("max_hz", opt.j_match.j_max_hz);
    opt.j_match.steps = g.integer("steps", opt.j_match.steps);
    opt.j_match.zero_fill_factor = g.integer("zero_fill", opt.j_match.zero_fill_factor);
    opt.window_linewidths = p.positive("window_linewidths", opt.window_linewidths);
    opt.line_t2_s = p.positive("line_t2_s", opt.line_t2_s);
    opt.baseline.order = p.integer("baseline_order", opt.baseline.order);

    Spectrum ph, th;
    if (source == "files") {
      ph = read_spectrum(ctx, t, "phip_spectrum");
      th = read_spectrum(ctx, t, "thermal_spectrum");
    } else {
      const Section s = t.child("synthetic");
      s.allow({"a", "b", "c", "p", "q", "through_filter"});
      double pv, qv;
      const bool fractions = s.has("a") || s.has("b") || s.has("c");
      if (fractions) {
        const double a = s.number("a"), b = s.number("b"), cc = s.number("c");
        try {
          const auto pq = pq_from_fractions(a, b, cc);
          pv = pq.p;
          qv = pq.q;
        } catch (const std::invalid_argument& e) {
          s.fail("", e.what());
        }
      } else {
        pv = s.number("p");
        qv = s.number("q");
      }
      // signal as detected, per unit of calibrated scan volume
      const double k = cal.scans * cal.flashes * cal.active_volume_fraction / cal.depletion();
      SignalVector sv{Complex(qv / 4), Complex(-qv / 4), Complex(-pv / 4), Complex(pv / 4)};
      if (s.flag("through_filter", false)) {
        if (!fractions) s.fail("through_filter", "needs a, b, c");
        const DensityState prepared = states::singlet_triplet(s.number("a"), s.number("b"), s.number("c"));
        sv = signal(partial_twirl(prepared, sys), jump_return_90Iy(sys), sys);
      }
      for (auto& v : sv) v /= k;
      const double bq = cal.boltzmann_factor / 8.0;
      const SignalVector thermal{Complex(bq), Complex(bq), Complex(bq), Complex(bq)};
      const Acquisition acq = acquisition_from(p);
      Acquisition clean = acq;
      clean.snr.reset();
      clean.noise_sigma.reset();
      ph = transform(acquire(sv, sys, acq, ctx.seed), acq.zero_fill);
      th = transform(acquire(thermal, sys, clean, ctx.seed), acq.zero_fill);
      write_spectrum(out, "phip_spectrum", ph);
      write_spectrum(out, "thermal_spectrum", th);
      doc["injected"] = json{{"p", pv}, {"q", qv}};
    }
    const PipelineResult pr = run_tomography_pipeline(ph, th, sys, cal, opt);
    res = pr.tomography;
    json lines = json::array();
    for (const auto& l : pr.lines) lines.push_back(json{{"value", l.value}, {"error", l.std_error}});
    doc["j_used_hz"] = pr.j_used_hz;
    doc["j_match"] = opt.j_hz ? json(nullptr)
                              : json{{"j_hz", pr.j_match.j_hz},
                                     {"grid_step_hz", pr.j_match.grid_step_hz},
                                     {"flat", pr.j_match.flat}};
    doc["line_integrals"] = lines;
    doc["thermal_per_line"] = io::to_json(pr.thermal_per_line);
  }
  doc["result"] = io::to_json(res);

  const std::vector<Row> rows{{"p", res.p.value, res.p.error},         {"q", res.q.value, res.q.error},
                              {"a", res.a.value, res.a.error},         {"b", res.b.value, res.b.error},
                              {"c", res.c.value, res.c.error},         {"epsilon", res.epsilon.value, res.epsilon.error},
                              {"concurrence", res.concurrence, 0.0},   {"eof", res.eof, 0.0},
                              {"normalization", res.normalization, 0.0}};
  write_quantities(out, "tomography_table", rows);
  out.write_json("tomography.json", out.stamp(doc, json{{"j", "Hz"}, {"integrals", "spectrum units Hz"}}));
  for (const auto& row : rows)
    std::cout << row.name << std::string(14 - row.name.size(), ' ') << io::fmt(row.value)
              << (row.error > 0 ? " +- " + io::fmt(row.error) : "") << '\n';
}

// ------------------------------------------------------------------ bounds

void cmd_bounds(const RunContext& ctx, OutputSink& out) {
  const Section r = root(ctx);
  const Section b = r.child_or_empty("bounds");
  b.allow({"n_min", "n_max", "boltzmann", "para_temperatures_k", "theta_r_k", "j_max"});
  const int n_min = b.integer("n_min", 1);
  const int n_max = b.integer("n_max", 20);
  if (n_min < 1) b.fail("n_min", "must be >= 1");
  if (n_max < n_min) b.fail("n_max", "must be >= n_min");
  const double boltz = b.positive("boltzmann", 1e-5);

  std::vector<BoundsReport> rows;
  for (int n = n_min; n <= n_max; ++n) rows.push_back(bounds_report(n, boltz));
  if (out.format() == Format::csv) {
    out.write("bounds.csv", io::to_csv(rows, out.header("n qubits, all other columns dimensionless")));
  } else {
    json a = json::array();
    for (const auto& x : rows) a.push_back(io::to_json(x));
    out.write_json("bounds.json", out.stamp(json{{"rows", a}}));
  }

  json summary{{"boltzmann", boltz}};
  for (const auto& [name, bound] : {std::pair{"crossover_n_lower", SeparabilityBound::lower},
                                    std::pair{"crossover_n_upper", SeparabilityBound::upper}}) {
    try {
      summary[name] = crossover_qubits(boltz, 1000, bound);
    } catch (const NumericError&) {
      summary[name] = nullptr;
    }
  }
  json bmin = json::array();
  for (int n = n_min; n <= n_max; ++n) bmin.push_back(json{{"n", n}, {"b", crossover_boltzmann(n)}});
  summary["boltzmann_at_crossover"] = bmin;

  if (b.has("para_temperatures_k")) {
    RotorParams rotor;
    rotor.theta_r_k = b.positive("theta_r_k", rotor.theta_r_k);
    rotor.j_max = b.integer("j_max", rotor.j_max);
    const auto temps = b.numbers("para_temperatures_k");
    std::vector<std::pair<double, double>> para;
    for (std::size_t i = 0; i < temps.size(); ++i) {
      if (!(temps[i] > 0.0)) b.fail("para_temperatures_k[" + std::to_string(i) + "]", "must be positive");
      para.emplace_back(temps[i], para_fraction(temps[i], rotor));
    }
    if (out.format() == Format::csv) {
      std::ostringstream os;
      for (const auto& h : out.header("temperature_k kelvin, para_fraction dimensionless")) os << "# " << h << '\n';
      os << "temperature_k,para_fraction\n";
      for (const auto& [tk, f] : para) os << io::fmt(tk) << ',' << io::fmt(f) << '\n';
      out.write("para.csv", os.str());
    } else {
      json a = json::array();
      for (const auto& [tk, f] : para) a.push_back(json{{"temperature_k", tk}, {"para_fraction", f}});
      out.write_json("para.json", out.stamp(json{{"rows", a}}, json{{"temperature_k", "K"}}));
    }
  }
  out.write_json("bounds_summary.json", out.stamp(summary));
  std::cout << "crossover (lower bound) at n = " << summary["crossover_n_lower"].dump() << " for B = " << io::fmt(boltz)
            << '\n';
}

// -------------------------------------------------------------------- algo

void cmd_algo(const RunContext& ctx, OutputSink& out) {
  const Section r = root(ctx);
  const Section a = r.child("algo");
  a.allow({"algorithm", "oracles", "targets", "iterations", "bridge", "input", "decoherence"});
  const std::string algorithm = a.choice("algorithm", {"deutsch_jozsa", "grover"}, "grover");
  const DensityState rho0 = state_from(a.child_or_empty("input"), ctx);
  const bool bridge = a.flag("bridge", true);
  CircuitOptions opt;
  if (a.has("decoherence")) {
    const Section d = a.child("decoherence");
    d.allow({"single_gate_s", "two_gate_s"});
    opt.decoherence = system_from(r.child("system"));
    opt.single_gate_s = d.number("single_gate_s", 0.0);
    opt.two_gate_s = d.number("two_gate_s", -1.0);
  }

  struct Case {
    std::string name;
    AlgorithmResult res;
  };
  std::vector<Case> cases;
  try {
    if (algorithm == "deutsch_jozsa") {
      const auto oracles =
          a.has("oracles") ? a.texts("oracles") : std::vector<std::string>{"dj:c0", "dj:c1", "dj:b0", "dj:b1"};
      for (const auto& o : oracles) cases.push_back({o, deutsch_jozsa(o, rho0, bridge, opt)});
    } else {
      const auto targets = a.has("targets") ? a.integers("targets") : std::vector<int>{0, 1, 2, 3};
      const int it = a.integer("iterations", 1);
      for (int t : targets) cases.push_back({"grover:" + std::to_string(t), grover(t, rho0, it, bridge, opt)});
    }
  } catch (const std::invalid_argument& e) {
    a.fail("", e.what());
  }

  json docs = json::array();
  for (const auto& c : cases) {
    json j = io::to_json(c.res);
    j["case"] = c.name;
    docs.push_back(j);
  }
  if (out.format() == Format::csv) {
    std::ostringstream os;
    for (const auto& h : out.header("probabilities dimensionless")) os << "# " << h << '\n';
    os << "case,answer,success_probability,p00,p01,p10,p11\n";
    for (const auto& c : cases) {
      os << c.name << ',' << c.res.answer << ',' << io::fmt(c.res.success_probability);
      for (double pp : c.res.populations) os << ',' << io::fmt(pp);
      os << '\n';
    }
    out.write("algo.csv", os.str());
  }
  out.write_json("algo.json", out.stamp(json{{"algorithm", algorithm}, {"bridge", bridge}, {"results", docs}}));
  for (const auto& c : cases)
    std::cout << c.name << " -> " << c.res.answer << " (P = " << io::fmt(c.res.success_probability) << ")\n";
}

// ------------------------------------------------------------------- twirl

void cmd_twirl(const RunContext& ctx, OutputSink& out) {
  const Section r = root(ctx);
  const Section t = r.child_or_empty("twirl");
  t.allow({"input", "mode", "samples"});
  const DensityState rho = state_from(t.child_or_empty("input"), ctx);
  TwirlOptions opt;
  opt.mode = t.choice("mode", {"average", "sampled"}, "average") == "average" ? TwirlMode::deterministic_average
                                                                             : TwirlMode::sampled;
  opt.n_samples = t.integer("samples", opt.n_samples);
  if (opt.n_samples < 1) t.fail("samples", "must be >= 1");
  opt.seed = ctx.seed;
  const DensityState tw = full_twirl(rho, opt);
  write_state(out, "twirled_state", tw);
  const double f_in = singlet_fraction(rho);
  const double f_out = singlet_fraction(tw);
  out.write_json("twirl.json", out.stamp(json{{"mode", opt.mode == TwirlMode::sampled ? "sampled" : "average"},
                                              {"singlet_fraction_in", f_in},
                                              {"singlet_fraction_out", f_out},
                                              {"werner_epsilon", (4.0 * f_out - 1.0) / 3.0},
                                              {"state", io::to_json(tw)}}));
  std::cout << "singlet fraction " << io::fmt(f_in) << " -> " << io::fmt(f_out) << '\n';
}

// -------------------------------------------------------------- entmetrics

void cmd_entmetrics(const RunContext& ctx, OutputSink& out) {
  const Section r = root(ctx);
  const Section e = r.child_or_empty("entmetrics");
  e.allow({"input"});
  const Section in = e.child_or_empty("input");
  const DensityState rho = state_from(in, ctx);
  const EntanglementReport rep = analyze_entanglement(rho);
  const PptResult pt = ppt(rho);

  json doc = io::to_json(rep);
  doc["singlet_fraction"] = singlet_fraction(rho);
  doc["pt_eigenvalues"] = std::vector<double>(pt.eigenvalues.data(), pt.eigenvalues.data() + pt.eigenvalues.size());
  std::vector<Row> rows{{"min_pt_eigenvalue", rep.min_pt_eigenvalue, 0.0},
                        {"concurrence", rep.concurrence, 0.0},
                        {"eof", rep.eof, 0.0},
                        {"singlet_fraction", singlet_fraction(rho), 0.0}};
  if (in.text("kind", "singlet") == "singlet_triplet") {
    const double cf = st_concurrence_closed_form(in.number("a"), in.number("b"), in.number("c"));
    doc["closed_form_concurrence"] = cf;
    rows.push_back({"closed_form_concurrence", cf, 0.0});
  }
  write_quantities(out, "entmetrics_table", rows);
  out.write_json("entmetrics.json", out.stamp(doc));
  std::cout << "concurrence " << io::fmt(rep.concurrence) << ", EoF " << io::fmt(rep.eof) << ", "
            << (rep.entangled ? "entangled" : "separable") << '\n';
}

}  // namespace phnmr::cli
