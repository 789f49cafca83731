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

// Command-line front end. run_main is the whole program minus process
// boundaries, so tests can drive commands and capture output in-process.
// Output is byte-stable for identical inputs.
//
// Exit codes: 0 success / verification pass, 1 verification mismatch,
// 2 usage or parse error, 3 numeric failure (null post-selection, grid or
// ladder overflow, structural rejection).

#include <iosfwd>
#include <string>

#include "cheshire/pointer.hpp"
#include "cheshire/weakvalue.hpp"

namespace cheshire {

enum class OutputFormat { table, json, csv };

// "a+bi" with 6 displayed digits; negative zeros are normalized away.
std::string render_complex(Complex z);

// table: aligned label/value columns. json: the module schema. csv:
// "label,re,im" rows.
std::string render_table(const WeakValueTable& table, OutputFormat format);

// table: one labeled line per statistic. json: the module schema. csv: the
// conditional pointer density for external plotting.
std::string render_record(const MeasurementRecord& record,
                          OutputFormat format);

// Builds an observable over `space` from a compact token: "identity",
// "pi<k>" (projector on path k, 1-based), "sx:<factor>" (bit flip on a
// two-level factor, or the encoded flip on a five-level ladder factor),
// "j<m>:<factor>" (exchange of levels 1 and m+1), or '*'-joined products.
OperatorExpr parse_observable(const SpaceDescriptor& space,
                              const std::string& token);

int run_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err);

}  // namespace cheshire
