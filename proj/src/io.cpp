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

#include "phnmr/io.hpp"

#include <charconv>
#include <map>
#include <sstream>
#include <stdexcept>

namespace phnmr::io {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::invalid_argument(path + ": " + what);
}

const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing field");
  return *it;
}

double number(const json& j, const std::string& key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

double number_or(const json& j, const std::string& key, double dflt, const std::string& path) {
  if (!j.contains(key)) return dflt;
  return number(j, key, path);
}

std::string text(const json& j, const std::string& key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

int integer(const json& j, const std::string& key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  return v.get<int>();
}

void write_header(std::ostringstream& os, const Header& header) {
  for (const auto& h : header) os << "# " << h << '\n';
}

// accepts subnormals, which stod rejects
bool parse_double(const std::string& s, double& out) {
  const char* first = s.data();
  const char* last = first + s.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, out);
  return res.ec != std::errc::invalid_argument && res.ptr == last && first != last;
}

struct CsvTable {
  std::map<std::string, std::string> meta;
  std::vector<std::vector<double>> rows;
};

CsvTable parse_csv(const std::string& s) {
  CsvTable t;
  std::istringstream in(s);
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line.substr(1));
      std::string tok;
      while (ls >> tok) {
        const auto eq = tok.find('=');
        if (eq != std::string::npos) t.meta[tok.substr(0, eq)] = tok.substr(eq + 1);
      }
      continue;
    }
    if (!header_seen && !(std::isdigit(static_cast<unsigned char>(line[0])) || line[0] == '-' || line[0] == '+' ||
                          line[0] == '.')) {
      header_seen = true;
      continue;
    }
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      double x = 0.0;
      if (!parse_double(cell, x))
        throw std::invalid_argument("CSV row " + std::to_string(t.rows.size() + 1) + ": bad number '" + cell + "'");
      row.push_back(x);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

double meta_number(const CsvTable& t, const std::string& key) {
  auto it = t.meta.find(key);
  if (it == t.meta.end()) throw std::invalid_argument("CSV header: missing " + key);
  double x = 0.0;
  if (!parse_double(it->second, x)) throw std::invalid_argument("CSV header: bad number for " + key);
  return x;
}

}  // namespace

std::string fmt(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

// ------------------------------------------------------------------ matrices

json to_json(const Matrix& m) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json rr = json::array();
    json ii = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ii.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return json{{"dim", m.rows()}, {"re", re}, {"im", im}};
}

Matrix matrix_from_json(const json& j) {
  const int d = integer(j, "dim", "state");
  const json& re = field(j, "re", "state");
  const json& im = field(j, "im", "state");
  if (d < 1 || !re.is_array() || !im.is_array() || static_cast<int>(re.size()) != d || static_cast<int>(im.size()) != d)
    fail("state", "re/im must be dim x dim arrays");
  Matrix m(d, d);
  for (int r = 0; r < d; ++r) {
    if (static_cast<int>(re[static_cast<std::size_t>(r)].size()) != d || static_cast<int>(im[static_cast<std::size_t>(r)].size()) != d)
      fail("state.re[" + std::to_string(r) + "]", "row length differs from dim");
    for (int c = 0; c < d; ++c)
      m(r, c) = Complex(re[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>(),
                        im[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>());
  }
  return m;
}

json to_json(const DensityState& rho) { return to_json(rho.matrix()); }

DensityState density_from_json(const json& j) { return DensityState(matrix_from_json(j)); }

std::string to_csv(const DensityState& rho, const Header& header) {
  std::ostringstream os;
  write_header(os, header);
  os << "row,col,re,im\n";
  for (int r = 0; r < rho.dim(); ++r)
    for (int c = 0; c < rho.dim(); ++c)
      os << r << ',' << c << ',' << fmt(rho(r, c).real()) << ',' << fmt(rho(r, c).imag()) << '\n';
  return os.str();
}

DensityState density_from_csv(const std::string& s) {
  const CsvTable t = parse_csv(s);
  int d = 0;
  for (const auto& row : t.rows) {
    if (row.size() != 4) throw std::invalid_argument("state CSV: rows need row,col,re,im");
    d = std::max(d, static_cast<int>(std::max(row[0], row[1])) + 1);
  }
  if (static_cast<std::size_t>(d) * static_cast<std::size_t>(d) != t.rows.size())
    throw std::invalid_argument("state CSV: expected dim*dim rows");
  Matrix m = Matrix::Zero(d, d);
  for (const auto& row : t.rows) m(static_cast<int>(row[0]), static_cast<int>(row[1])) = Complex(row[2], row[3]);
  return DensityState(m);
}

// ----------------------------------------------------------------- sequences

json to_json(const SequenceElement& el) {
  if (const auto* p = std::get_if<Pulse>(&el)) {
    json j{{"type", "pulse"}, {"flip_rad", p->flip_rad}, {"phase_rad", p->phase_rad},
           {"flip_error_rad", p->flip_error_rad}, {"duration_s", p->duration_s}};
    j["qubit"] = (p->qubit == kAllQubits) ? json(nullptr) : json(p->qubit);
    return j;
  }
  if (const auto* d = std::get_if<Delay>(&el)) return json{{"type", "delay"}, {"t_s", d->t_s}};
  if (const auto* g = std::get_if<GradientCrush>(&el))
    return json{{"type", "gradient"},
                {"mode", g->mode == GradientMode::homonuclear ? "homonuclear" : "heteronuclear"},
                {"duration_s", g->duration_s}};
  if (const auto* z = std::get_if<ZRotation>(&el)) return json{{"type", "zrotation"}, {"angles_rad", z->angles_rad}};
  if (const auto* m = std::get_if<MixingBlock>(&el))
    return json{{"type", "mixing"}, {"kind", "MLEV16"}, {"duration_s", m->duration_s}, {"nutation_hz", m->nutation_hz}};
  const auto& dc = std::get<Decohere>(el);
  return json{{"type", "decohere"}, {"t_s", dc.t_s}};
}

namespace {

SequenceElement element_at(const json& j, const std::string& path) {
  const std::string type = text(j, "type", path);
  if (type == "pulse") {
    Pulse p;
    if (j.contains("flip_deg")) p.flip_rad = number(j, "flip_deg", path) * kPi / 180.0;
    else p.flip_rad = number(j, "flip_rad", path);
    if (j.contains("phase_deg")) p.phase_rad = number(j, "phase_deg", path) * kPi / 180.0;
    else p.phase_rad = number_or(j, "phase_rad", 0.0, path);
    p.flip_error_rad = number_or(j, "flip_error_rad", 0.0, path);
    p.duration_s = number_or(j, "duration_s", 0.0, path);
    if (j.contains("qubit") && !j["qubit"].is_null()) p.qubit = integer(j, "qubit", path);
    if (p.duration_s < 0.0) fail(path + ".duration_s", "must be >= 0");
    return p;
  }
  if (type == "delay") {
    const double t = number(j, "t_s", path);
    if (t < 0.0) fail(path + ".t_s", "must be >= 0");
    return Delay{t};
  }
  if (type == "gradient") {
    const std::string mode = text(j, "mode", path);
    if (mode != "homonuclear" && mode != "heteronuclear") fail(path + ".mode", "expected homonuclear or heteronuclear");
    const double t = number_or(j, "duration_s", 0.0, path);
    if (t < 0.0) fail(path + ".duration_s", "must be >= 0");
    return GradientCrush{mode == "homonuclear" ? GradientMode::homonuclear : GradientMode::heteronuclear, t};
  }
  if (type == "zrotation") {
    const json& a = field(j, "angles_rad", path);
    if (!a.is_array()) fail(path + ".angles_rad", "expected an array");
    ZRotation z;
    for (const auto& v : a) {
      if (!v.is_number()) fail(path + ".angles_rad", "expected numbers");
      z.angles_rad.push_back(v.get<double>());
    }
    return z;
  }
  if (type == "mixing") {
    if (text(j, "kind", path) != "MLEV16") fail(path + ".kind", "only MLEV16 is supported");
    MixingBlock m;
    m.duration_s = number(j, "duration_s", path);
    m.nutation_hz = number_or(j, "nutation_hz", m.nutation_hz, path);
    if (m.duration_s < 0.0) fail(path + ".duration_s", "must be >= 0");
    return m;
  }
  if (type == "decohere") {
    const double t = number(j, "t_s", path);
    if (t < 0.0) fail(path + ".t_s", "must be >= 0");
    return Decohere{t};
  }
  fail(path + ".type", "unknown element type '" + type + "'");
}

}  // namespace

SequenceElement element_from_json(const json& j) { return element_at(j, "element"); }

json to_json(const PulseSequence& seq) {
  json a = json::array();
  for (const auto& e : seq.elements) a.push_back(to_json(e));
  return a;
}

PulseSequence sequence_from_json(const json& j) {
  if (!j.is_array()) fail("sequence", "expected an array of elements");
  PulseSequence s;
  for (std::size_t i = 0; i < j.size(); ++i) s.add(element_at(j[i], "sequence[" + std::to_string(i) + "]"));
  return s;
}

// ------------------------------------------------------------------- signals

json to_json(const SignalVector& sv) {
  json a = json::array();
  for (const auto& v : sv) a.push_back(json::array({v.real(), v.imag()}));
  return a;
}

SignalVector signal_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) fail("signal", "expected four [re, im] pairs");
  SignalVector sv{};
  for (std::size_t i = 0; i < 4; ++i) {
    if (!j[i].is_array() || j[i].size() != 2) fail("signal[" + std::to_string(i) + "]", "expected [re, im]");
    sv[i] = Complex(j[i][0].get<double>(), j[i][1].get<double>());
  }
  return sv;
}

std::string to_csv(const Fid& fid, const Header& header) {
  std::ostringstream os;
  write_header(os, header);
  os << "# unit=s dwell_s=" << fmt(fid.dwell_s) << " start_s=" << fmt(fid.start_s) << '\n';
  os << "t_s,re,im\n";
  for (std::size_t k = 0; k < fid.samples.size(); ++k)
    os << fmt(fid.start_s + static_cast<double>(k) * fid.dwell_s) << ',' << fmt(fid.samples[k].real()) << ','
       << fmt(fid.samples[k].imag()) << '\n';
  return os.str();
}

std::string to_csv(const Spectrum& spec, const Header& header) {
  std::ostringstream os;
  write_header(os, header);
  os << "# unit=Hz sweep_hz=" << fmt(spec.sweep_hz) << " start_s=" << fmt(spec.start_s)
     << " first_point_scale=" << fmt(spec.first_point_scale) << " acquired_points=" << spec.acquired_points << '\n';
  os << "freq_hz,re,im\n";
  for (std::size_t k = 0; k < spec.values.size(); ++k)
    os << fmt(spec.axis_hz[k]) << ',' << fmt(spec.values[k].real()) << ',' << fmt(spec.values[k].imag()) << '\n';
  return os.str();
}

json to_json(const Fid& fid) {
  json re = json::array();
  json im = json::array();
  for (const auto& v : fid.samples) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  return json{{"unit", "s"}, {"dwell_s", fid.dwell_s}, {"start_s", fid.start_s}, {"re", re}, {"im", im}};
}

json to_json(const Spectrum& spec) {
  json re = json::array();
  json im = json::array();
  for (const auto& v : spec.values) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  return json{{"unit", "Hz"},          {"sweep_hz", spec.sweep_hz},
              {"start_s", spec.start_s}, {"first_point_scale", spec.first_point_scale},
              {"acquired_points", spec.acquired_points}, {"axis_hz", spec.axis_hz},
              {"re", re},                {"im", im}};
}

Fid fid_from_json(const json& j) {
  Fid f;
  f.dwell_s = number(j, "dwell_s", "fid");
  f.start_s = number_or(j, "start_s", 0.0, "fid");
  const json& re = field(j, "re", "fid");
  const json& im = field(j, "im", "fid");
  if (!re.is_array() || !im.is_array() || re.size() != im.size()) fail("fid", "re/im arrays must match");
  for (std::size_t i = 0; i < re.size(); ++i) f.samples.emplace_back(re[i].get<double>(), im[i].get<double>());
  f.validate();
  return f;
}

Spectrum spectrum_from_json(const json& j) {
  Spectrum s;
  s.sweep_hz = number(j, "sweep_hz", "spectrum");
  s.start_s = number_or(j, "start_s", 0.0, "spectrum");
  s.first_point_scale = number_or(j, "first_point_scale", 0.5, "spectrum");
  s.axis_hz = field(j, "axis_hz", "spectrum").get<std::vector<double>>();
  const json& re = field(j, "re", "spectrum");
  const json& im = field(j, "im", "spectrum");
  if (!re.is_array() || !im.is_array() || re.size() != im.size()) fail("spectrum", "re/im arrays must match");
  for (std::size_t i = 0; i < re.size(); ++i) s.values.emplace_back(re[i].get<double>(), im[i].get<double>());
  s.acquired_points = j.contains("acquired_points") ? j["acquired_points"].get<std::size_t>() : s.values.size();
  s.validate();
  return s;
}

Fid fid_from_csv(const std::string& text_in) {
  const CsvTable t = parse_csv(text_in);
  Fid f;
  f.dwell_s = meta_number(t, "dwell_s");
  f.start_s = t.meta.count("start_s") ? meta_number(t, "start_s") : 0.0;
  for (const auto& r : t.rows) {
    if (r.size() != 3) throw std::invalid_argument("FID CSV: rows need t_s,re,im");
    f.samples.emplace_back(r[1], r[2]);
  }
  f.validate();
  return f;
}

Spectrum spectrum_from_csv(const std::string& text_in) {
  const CsvTable t = parse_csv(text_in);
  Spectrum s;
  s.sweep_hz = meta_number(t, "sweep_hz");
  s.start_s = t.meta.count("start_s") ? meta_number(t, "start_s") : 0.0;
  s.first_point_scale = t.meta.count("first_point_scale") ? meta_number(t, "first_point_scale") : 0.5;
  for (const auto& r : t.rows) {
    if (r.size() != 3) throw std::invalid_argument("spectrum CSV: rows need freq_hz,re,im");
    s.axis_hz.push_back(r[0]);
    s.values.emplace_back(r[1], r[2]);
  }
  s.acquired_points = t.meta.count("acquired_points") ? static_cast<std::size_t>(meta_number(t, "acquired_points"))
                                                      : s.values.size();
  s.validate();
  return s;
}

// ------------------------------------------------------------------- results

json to_json(const Measured& m) { return json{{"value", m.value}, {"error", m.error}}; }

json to_json(const TomographyResult& r) {
  return json{{"raw", {{"i_integral", r.raw_i_integral}, {"s_integral", r.raw_s_integral}}},
              {"normalization", r.normalization},
              {"p", to_json(r.p)},
              {"q", to_json(r.q)},
              {"a", to_json(r.a)},
              {"b", to_json(r.b)},
              {"c", to_json(r.c)},
              {"epsilon", to_json(r.epsilon)},
              {"concurrence", r.concurrence},
              {"eof", r.eof}};
}

std::string to_csv(const std::vector<BoundsReport>& rows, const Header& header) {
  std::ostringstream os;
  write_header(os, header);
  os << "n,eps_lower,eps_upper,warren,k_pure\n";
  for (const auto& r : rows)
    os << r.n << ',' << fmt(r.eps_lower) << ',' << fmt(r.eps_upper) << ',' << fmt(r.warren) << ',' << fmt(r.k_pure)
       << '\n';
  return os.str();
}

json to_json(const BoundsReport& r) {
  return json{{"n", r.n}, {"eps_lower", r.eps_lower}, {"eps_upper", r.eps_upper}, {"warren", r.warren}, {"k_pure", r.k_pure}};
}

json to_json(const EntanglementReport& r) {
  return json{{"min_pt_eigenvalue", r.min_pt_eigenvalue},
              {"concurrence", r.concurrence},
              {"eof", r.eof},
              {"entangled", r.entangled}};
}

// ------------------------------------------------------------------ circuits

json to_json(const Gate& g) {
  if (const auto* r = std::get_if<gates::Rotation>(&g))
    return json{{"gate", "rotation"}, {"qubit", r->qubit}, {"axis", std::string(1, r->axis)}, {"angle_rad", r->angle_rad}};
  if (const auto* h = std::get_if<gates::Hadamard>(&g)) return json{{"gate", "hadamard"}, {"qubit", h->qubit}};
  if (const auto* p = std::get_if<gates::Phase>(&g))
    return json{{"gate", "phase"}, {"qubit", p->qubit}, {"angle_rad", p->angle_rad}};
  if (const auto* c = std::get_if<gates::CNot>(&g)) return json{{"gate", "cnot"}, {"control", c->control}, {"target", c->target}};
  return json{{"gate", "oracle"}, {"id", std::get<gates::Oracle>(g).id}};
}

namespace {

Gate gate_at(const json& j, const std::string& path) {
  const std::string kind = text(j, "gate", path);
  if (kind == "rotation") {
    const std::string axis = text(j, "axis", path);
    if (axis.size() != 1 || std::string("xyz").find(axis[0]) == std::string::npos) fail(path + ".axis", "expected x, y or z");
    return gates::Rotation{integer(j, "qubit", path), axis[0], number(j, "angle_rad", path)};
  }
  if (kind == "hadamard") return gates::Hadamard{integer(j, "qubit", path)};
  if (kind == "phase") return gates::Phase{integer(j, "qubit", path), number(j, "angle_rad", path)};
  if (kind == "cnot") return gates::CNot{integer(j, "control", path), integer(j, "target", path)};
  if (kind == "oracle") return gates::Oracle{text(j, "id", path)};
  fail(path + ".gate", "unknown gate '" + kind + "'");
}

}  // namespace

Gate gate_from_json(const json& j) { return gate_at(j, "gate"); }

json to_json(const GateCircuit& c) {
  json a = json::array();
  for (const auto& g : c.gates) a.push_back(to_json(g));
  return json{{"n_qubits", c.n_qubits}, {"gates", a}};
}

GateCircuit circuit_from_json(const json& j) {
  GateCircuit c;
  c.n_qubits = integer(j, "n_qubits", "circuit");
  const json& a = field(j, "gates", "circuit");
  if (!a.is_array()) fail("circuit.gates", "expected an array");
  for (std::size_t i = 0; i < a.size(); ++i) c.add(gate_at(a[i], "circuit.gates[" + std::to_string(i) + "]"));
  return c;
}

json to_json(const AlgorithmResult& r) {
  json ro = json::array();
  for (const auto& sv : r.readouts) ro.push_back(to_json(sv));
  return json{{"answer", r.answer},
              {"success_probability", r.success_probability},
              {"populations", r.populations},
              {"readouts", ro},
              {"final_state", to_json(r.final_state)}};
}

}  // namespace phnmr::io
