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

// Weak values over pre- and post-selected ensembles.
//
// For pre-selection |pre>, post-selection |post| and observable O, the weak
// value is <post|O|pre> / <post|pre>. It is complex in general and not
// confined to O's eigenvalue range. This module treats operators as opaque
// OperatorExpr values; nothing here interprets factor labels.

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "cheshire/hilbert.hpp"

namespace cheshire {

// Below this overlap magnitude the ensemble is considered null post-selected
// and weak values are undefined.
inline constexpr double kOverlapEpsilon = 1e-10;

struct PrePostEnsemble {
  StateVector pre;
  StateVector post;
  Complex overlap;  // <post|pre>, cached at construction

  // Validates that both states are normalized and share a space.
  static PrePostEnsemble make(StateVector pre, StateVector post);
};

// <post|O|pre> / <post|pre>. Throws NullPostselectionError when
// |<post|pre>| <= overlap_epsilon.
Complex weak_value(const PrePostEnsemble& ensemble, const OperatorExpr& o,
                   double overlap_epsilon = kOverlapEpsilon);

// Probability that post-selection succeeds on the undisturbed ensemble.
double postselection_probability(const PrePostEnsemble& ensemble);

struct WeakValueRow {
  std::string label;
  Complex value;
};

struct WeakValueTable {
  std::vector<WeakValueRow> rows;
};

// Evaluates every labeled observable in order. Labels must be unique. A null
// post-selection is reported with the failing row's label in the message.
WeakValueTable weak_value_table(
    const PrePostEnsemble& ensemble,
    const std::vector<std::pair<std::string, OperatorExpr>>& observables,
    double overlap_epsilon = kOverlapEpsilon);

}  // namespace cheshire
