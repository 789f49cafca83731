// Copyright 2026 the cheshire authors
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

// JSON and CSV views of the core value types. Amplitude maps iterate in
// lexicographic multi-index order, so serialization is byte-stable for equal
// inputs. CSV numbers carry 17 significant digits (enough to round-trip a
// double); deserialization rejects malformed documents with Error.

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "cheshire/hilbert.hpp"
#include "cheshire/pointer.hpp"
#include "cheshire/scenarios.hpp"
#include "cheshire/weakvalue.hpp"

namespace cheshire {

// {"factors": [{"label","dim"}...],
//  "amplitudes": [{"index": [...], "re", "im"}...]}
nlohmann::ordered_json state_to_json(const StateVector& state);
StateVector state_from_json(const nlohmann::ordered_json& j);

// [{"label","re","im"}...]
nlohmann::ordered_json table_to_json(const WeakValueTable& table);

// Header "label,re,im"; one row per entry.
std::string table_to_csv(const WeakValueTable& table);

// {"name","space","pre","post","observables","expected"}; observables are
// term lists with dense per-factor matrices.
nlohmann::ordered_json scenario_to_json(const Scenario& scenario);

// {"g","sigma","success_probability","position_mean","momentum_mean",
//  "weak_value":{"re","im"}}
nlohmann::ordered_json record_to_json(const MeasurementRecord& record);

// "x,density" rows of the conditional pointer distribution.
std::string record_density_csv(const MeasurementRecord& record);

}  // namespace cheshire
