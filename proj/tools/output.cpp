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

#include "output.hpp"

#include <Eigen/Core>

#include <chrono>
#include <ctime>
#include <fstream>
#include <system_error>
#include <unistd.h>

#ifndef PHNMR_VERSION
#define PHNMR_VERSION "unknown"
#endif

namespace phnmr::cli {

namespace fs = std::filesystem;

void atomic_write(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

OutputSink::OutputSink(fs::path dir, Format format, std::string config_hash, std::string command, std::uint64_t seed)
    : dir_(std::move(dir)),
      format_(format),
      hash_(std::move(config_hash)),
      command_(std::move(command)),
      seed_(seed),
      started_(utc_now()) {
  fs::create_directories(dir_);
}

std::vector<std::string> OutputSink::header(const std::string& units) const {
  std::vector<std::string> h{"phnmr " + command_ + " config_hash=" + hash_ + " seed=" + std::to_string(seed_)};
  if (!units.empty()) h.push_back("units: " + units);
  return h;
}

json OutputSink::stamp(json doc, const json& units) const {
  doc["meta"] = json{{"command", command_}, {"config_hash", hash_}, {"seed", seed_}, {"units", units}};
  return doc;
}

void OutputSink::write(const std::string& name, const std::string& content) {
  atomic_write(dir_ / name, content);
  files_.emplace_back(name, hex64(fnv1a(content)));
}

void OutputSink::write_json(const std::string& name, const json& doc) { write(name, doc.dump(2) + "\n"); }

void OutputSink::write_manifest(const json& config) {
  json outputs = json::array();
  for (const auto& [name, h] : files_) outputs.push_back(json{{"path", name}, {"fnv1a", h}});
  const json m{{"command", command_},
               {"config_hash", hash_},
               {"seed", seed_},
               {"config", config},
               {"versions",
                {{"phnmr", PHNMR_VERSION},
                 {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                               std::to_string(EIGEN_MINOR_VERSION)},
                 {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                       std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                       std::to_string(NLOHMANN_JSON_VERSION_PATCH)}}},
               {"started_utc", started_},
               {"finished_utc", utc_now()},
               {"outputs", outputs}};
  atomic_write(dir_ / "manifest.json", m.dump(2) + "\n");
}

}  // namespace phnmr::cli
