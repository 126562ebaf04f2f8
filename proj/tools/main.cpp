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

#include <CLI11.hpp>

#include <iostream>
#include <map>

#include "commands.hpp"
#include "phnmr/spin_core.hpp"

namespace {

using namespace phnmr::cli;

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kNumeric = 3 };

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phnmr: para-hydrogen spin simulation and tomography"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
  std::string format;
  app.add_option("--config", config_path, "YAML or JSON experiment config");
  app.add_option("--seed", seed, "RNG seed; overrides the config");
  app.add_option("--out-dir", out_dir, "directory for output files")->capture_default_str();
  app.add_option("--format", format, "table format")->check(CLI::IsMember({"csv", "json"}));

  using Command = void (*)(const RunContext&, OutputSink&);
  const std::vector<std::tuple<std::string, std::string, Command>> commands{
      {"phip", "prepare a PHIP state, detect it and synthesize its spectrum", cmd_phip},
      {"tomography", "run the twirl tomography pipeline on spectra or integrals", cmd_tomography},
      {"bounds", "separability, polarization and compression tables", cmd_bounds},
      {"algo", "Deutsch-Jozsa or Grover on a two-qubit input", cmd_algo},
      {"twirl", "full U x U twirl of a two-qubit state", cmd_twirl},
      {"entmetrics", "PPT spectrum, concurrence and EoF of a state", cmd_entmetrics},
  };
  std::map<CLI::App*, std::pair<std::string, Command>> by_app;
  for (const auto& [name, help, fn] : commands) by_app[app.add_subcommand(name, help)] = {name, fn};

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  const auto* sub = app.get_subcommands().front();
  const auto& [name, fn] = by_app.at(const_cast<CLI::App*>(sub));
  try {
    RunContext ctx;
    ctx.config = json::object();
    if (!config_path.empty()) {
      ctx.config = load_config(config_path);
      ctx.base_dir = std::filesystem::path(config_path).parent_path();
    }
    if (seed) {
      ctx.config["seed"] = *seed;
    } else if (!ctx.config.contains("seed")) {
      ctx.config["seed"] = 0;
    } else if (!ctx.config["seed"].is_number_integer() || ctx.config["seed"].get<std::int64_t>() < 0) {
      throw ConfigError("seed: expected a non-negative integer");
    }
    ctx.seed = ctx.config["seed"].get<std::uint64_t>();
    if (!format.empty()) ctx.config["format"] = format;
    if (!ctx.config.contains("format")) ctx.config["format"] = "csv";
    if (ctx.config["format"] != "csv" && ctx.config["format"] != "json")
      throw ConfigError("format: expected csv or json");

    const std::string hash = hex64(fnv1a(name + "\n" + ctx.config.dump()));
    OutputSink out(out_dir, ctx.config["format"] == "csv" ? Format::csv : Format::json, hash, name, ctx.seed);
    fn(ctx, out);
    out.write_manifest(ctx.config);
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const phnmr::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}
