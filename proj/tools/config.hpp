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
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace phnmr::cli {

using json = nlohmann::json;

/// Bad or missing configuration; the message starts with the field path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// YAML or JSON by extension; YAML scalars are typed the way a reader would expect.
json load_config(const std::filesystem::path& path);
json yaml_to_json(const std::string& text);

std::uint64_t fnv1a(const std::string& bytes);
std::string hex64(std::uint64_t h);

/// Read-only view of one config object that remembers where it lives.
class Section {
 public:
  Section(const json& j, std::string path);

  const std::string& path() const { return path_; }
  const json& raw() const { return *j_; }
  bool has(const std::string& key) const;
  std::string at_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  // Rejects keys outside the list so typos surface.
  void allow(const std::vector<std::string>& keys) const;

  Section child(const std::string& key) const;
  Section child_or_empty(const std::string& key) const;
  double number(const std::string& key) const;
  double number(const std::string& key, double dflt) const;
  double positive(const std::string& key, double dflt) const;
  int integer(const std::string& key, int dflt) const;
  bool flag(const std::string& key, bool dflt) const;
  std::string text(const std::string& key, const std::string& dflt) const;
  std::string choice(const std::string& key, const std::vector<std::string>& options, const std::string& dflt) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<std::string> texts(const std::string& key) const;
  std::vector<int> integers(const std::string& key) const;

  [[noreturn]] void fail(const std::string& key, const std::string& what) const;

 private:
  const json& get(const std::string& key) const;
  const json* j_;
  std::string path_;
};

}  // namespace phnmr::cli
