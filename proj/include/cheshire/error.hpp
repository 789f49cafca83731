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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cheshire {

// Base for everything this library throws. Subtypes carry enough context to
// map onto the CLI exit codes (usage-ish vs numeric-ish) without string
// matching.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed inputs: bad indices, unknown labels, mismatched spaces.
struct BoundsError : Error {
  using Error::Error;
};

struct SpaceMismatchError : Error {
  using Error::Error;
};

// A state that must be normalized is not.
struct NormalizationError : Error {
  using Error::Error;
};

// Dense materialization would exceed the configured dimension cap.
struct CapacityError : Error {
  using Error::Error;
};

// Pre/post overlap (or conditioning probability) too small to divide by.
struct NullPostselectionError : Error {
  NullPostselectionError(const std::string& what, double magnitude)
      : Error(what), magnitude(magnitude) {}
  double magnitude;
};

// Operator fails a structural requirement (e.g. pointer coupling needs
// Hermitian O).
struct StructureError : Error {
  using Error::Error;
};

// Pointer grid cannot represent the requested coupling.
struct GridError : Error {
  using Error::Error;
};

// Circuit element would leave the truncated internal space.
struct OverflowError : Error {
  using Error::Error;
};

// Circuit-level misconfiguration (unknown detector, rank > 1 post-selection).
struct ConfigurationError : Error {
  using Error::Error;
};

// Circuit text rejected; positions are 1-based.
struct ParseError : Error {
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what), line(line), column(column) {}
  std::size_t line;
  std::size_t column;
};

}  // namespace cheshire
