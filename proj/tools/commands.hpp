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

#include "config.hpp"
#include "output.hpp"

namespace phnmr::cli {

struct RunContext {
  json config;                     // effective config, seed included
  std::filesystem::path base_dir;  // relative input paths resolve here
  std::uint64_t seed = 0;
};

void cmd_phip(const RunContext& ctx, OutputSink& out);
void cmd_tomography(const RunContext& ctx, OutputSink& out);
void cmd_bounds(const RunContext& ctx, OutputSink& out);
void cmd_algo(const RunContext& ctx, OutputSink& out);
void cmd_twirl(const RunContext& ctx, OutputSink& out);
void cmd_entmetrics(const RunContext& ctx, OutputSink& out);

}  // namespace phnmr::cli
