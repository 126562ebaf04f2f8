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

#include "config.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <fstream>
#include <sstream>

namespace phnmr::cli {

namespace {

const json kEmpty = json::object();

json scalar(const YAML::Node& n) {
  const std::string& s = n.Scalar();
  if (n.Tag() == "!") return s;  // quoted
  if (s.empty() || s == "~" || s == "null") return nullptr;
  if (s == "true" || s == "True") return true;
  if (s == "false" || s == "False") return false;
  const char* b = s.data();
  const char* e = b + s.size();
  if (*b == '+') ++b;
  long long i = 0;
  if (auto r = std::from_chars(b, e, i); r.ec == std::errc() && r.ptr == e) return i;
  double d = 0;
  if (auto r = std::from_chars(b, e, d); r.ec == std::errc() && r.ptr == e) return d;
  if (s == ".inf" || s == ".Inf") return std::numeric_limits<double>::infinity();
  return s;
}

json convert(const YAML::Node& n) {
  switch (n.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
      return nullptr;
    case YAML::NodeType::Scalar:
      return scalar(n);
    case YAML::NodeType::Sequence: {
      json a = json::array();
      for (const auto& x : n) a.push_back(convert(x));
      return a;
    }
    case YAML::NodeType::Map: {
      json o = json::object();
      for (const auto& kv : n) o[kv.first.as<std::string>()] = convert(kv.second);
      return o;
    }
  }
  return nullptr;
}

std::string type_name(const json& j) { return j.type_name(); }

}  // namespace

json yaml_to_json(const std::string& text) {
  try {
    return convert(YAML::Load(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

json load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  json j;
  if (path.extension() == ".json") {
    try {
      j = json::parse(ss.str());
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  } else {
    j = yaml_to_json(ss.str());
  }
  if (j.is_null()) j = json::object();
  if (!j.is_object()) throw ConfigError("config: top level must be a mapping");
  return j;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  for (int i = 15; i >= 0; --i, h >>= 4) buf[i] = "0123456789abcdef"[h & 0xf];
  buf[16] = '\0';
  return buf;
}

// ------------------------------------------------------------------ Section

Section::Section(const json& j, std::string path) : j_(&j), path_(std::move(path)) {
  if (!j.is_object()) throw ConfigError((path_.empty() ? "config" : path_) + ": expected a mapping, got " + type_name(j));
}

void Section::fail(const std::string& key, const std::string& what) const {
  throw ConfigError((key.empty() ? path_ : at_path(key)) + ": " + what);
}

bool Section::has(const std::string& key) const { return j_->contains(key) && !(*j_)[key].is_null(); }

void Section::allow(const std::vector<std::string>& keys) const {
  for (const auto& [k, v] : j_->items())
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) fail(k, "unknown field");
}

const json& Section::get(const std::string& key) const {
  if (!has(key)) fail(key, "missing field");
  return (*j_)[key];
}

Section Section::child(const std::string& key) const {
  const json& v = get(key);
  if (!v.is_object()) fail(key, "expected a mapping, got " + type_name(v));
  return Section(v, at_path(key));
}

Section Section::child_or_empty(const std::string& key) const {
  return has(key) ? child(key) : Section(kEmpty, at_path(key));
}

double Section::number(const std::string& key) const {
  const json& v = get(key);
  if (!v.is_number()) fail(key, "expected a number, got " + type_name(v));
  return v.get<double>();
}

double Section::number(const std::string& key, double dflt) const { return has(key) ? number(key) : dflt; }

double Section::positive(const std::string& key, double dflt) const {
  const double x = number(key, dflt);
  if (!(x > 0.0)) fail(key, "must be positive");
  return x;
}

int Section::integer(const std::string& key, int dflt) const {
  if (!has(key)) return dflt;
  const json& v = get(key);
  if (!v.is_number_integer()) fail(key, "expected an integer, got " + type_name(v));
  return v.get<int>();
}

bool Section::flag(const std::string& key, bool dflt) const {
  if (!has(key)) return dflt;
  const json& v = get(key);
  if (!v.is_boolean()) fail(key, "expected true or false, got " + type_name(v));
  return v.get<bool>();
}

std::string Section::text(const std::string& key, const std::string& dflt) const {
  if (!has(key)) return dflt;
  const json& v = get(key);
  if (!v.is_string()) fail(key, "expected a string, got " + type_name(v));
  return v.get<std::string>();
}

std::string Section::choice(const std::string& key, const std::vector<std::string>& options,
                            const std::string& dflt) const {
  const std::string v = text(key, dflt);
  if (std::find(options.begin(), options.end(), v) == options.end()) {
    std::string list;
    for (const auto& o : options) list += (list.empty() ? "" : ", ") + o;
    fail(key, "expected one of " + list + ", got '" + v + "'");
  }
  return v;
}

std::vector<double> Section::numbers(const std::string& key) const {
  const json& v = get(key);
  if (!v.is_array()) fail(key, "expected a list");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) fail(key + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

std::vector<std::string> Section::texts(const std::string& key) const {
  const json& v = get(key);
  if (!v.is_array()) fail(key, "expected a list");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) fail(key + "[" + std::to_string(i) + "]", "expected a string");
    out.push_back(v[i].get<std::string>());
  }
  return out;
}

std::vector<int> Section::integers(const std::string& key) const {
  const json& v = get(key);
  if (!v.is_array()) fail(key, "expected a list");
  std::vector<int> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number_integer()) fail(key + "[" + std::to_string(i) + "]", "expected an integer");
    out.push_back(v[i].get<int>());
  }
  return out;
}

}  // namespace phnmr::cli
