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

#include <filesystem>
#include <string>
#include <vector>

#include "config.hpp"

namespace phnmr::cli {

enum class Format { csv, json };

/// Collects run outputs. Files land atomically; the manifest goes last.
class OutputSink {
 public:
  OutputSink(std::filesystem::path dir, Format format, std::string config_hash, std::string command,
             std::uint64_t seed);

  Format format() const { return format_; }
  const std::string& config_hash() const { return hash_; }
  const std::filesystem::path& dir() const { return dir_; }

  /// Provenance lines for CSV tables, plus any units line.
  std::vector<std::string> header(const std::string& units = {}) const;
  /// Adds a meta block to a JSON document.
  json stamp(json doc, const json& units = json::object()) const;

  void write(const std::string& name, const std::string& content);
  void write_json(const std::string& name, const json& doc);
  void write_manifest(const json& config);

 private:
  std::filesystem::path dir_;
  Format format_;
  std::string hash_;
  std::string command_;
  std::uint64_t seed_;
  std::string started_;
  std::vector<std::pair<std::string, std::string>> files_;
};

void atomic_write(const std::filesystem::path& path, const std::string& content);
std::string utc_now();

}  // namespace phnmr::cli
