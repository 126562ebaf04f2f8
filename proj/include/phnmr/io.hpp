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

#include <string>
#include <vector>

#include <json.hpp>

#include "phnmr/entmetrics.hpp"
#include "phnmr/qip_algos.hpp"
#include "phnmr/specproc.hpp"

namespace phnmr::io {

using json = nlohmann::json;

/// Lines written as "# ..." ahead of CSV tables.
using Header = std::vector<std::string>;

json to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);
json to_json(const DensityState& rho);
DensityState density_from_json(const json& j);
std::string to_csv(const DensityState& rho, const Header& header = {});
DensityState density_from_csv(const std::string& text);

json to_json(const SequenceElement& el);
SequenceElement element_from_json(const json& j);
json to_json(const PulseSequence& seq);
PulseSequence sequence_from_json(const json& j);

json to_json(const SignalVector& sv);
SignalVector signal_from_json(const json& j);

std::string to_csv(const Fid& fid, const Header& header = {});
std::string to_csv(const Spectrum& spec, const Header& header = {});
json to_json(const Fid& fid);
json to_json(const Spectrum& spec);
Fid fid_from_json(const json& j);
Spectrum spectrum_from_json(const json& j);
Fid fid_from_csv(const std::string& text);
Spectrum spectrum_from_csv(const std::string& text);

json to_json(const Measured& m);
json to_json(const TomographyResult& r);

std::string to_csv(const std::vector<BoundsReport>& rows, const Header& header = {});
json to_json(const BoundsReport& r);

json to_json(const EntanglementReport& r);

json to_json(const Gate& g);
Gate gate_from_json(const json& j);
json to_json(const GateCircuit& c);
GateCircuit circuit_from_json(const json& j);
json to_json(const AlgorithmResult& r);

/// Round-trip decimal text for a double.
std::string fmt(double x);

}  // namespace phnmr::io
