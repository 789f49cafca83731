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

#include "cheshire/weakvalue.hpp"

#include <cmath>
#include <set>

namespace cheshire {

PrePostEnsemble PrePostEnsemble::make(StateVector pre, StateVector post) {
  if (!(pre.space() == post.space()))
    throw SpaceMismatchError("pre and post states on different spaces");
  if (!is_normalized(pre))
    throw NormalizationError("pre-selection state is not normalized");
  if (!is_normalized(post))
    throw NormalizationError("post-selection state is not normalized");
  Complex overlap = inner(post, pre);
  return PrePostEnsemble{std::move(pre), std::move(post), overlap};
}

Complex weak_value(const PrePostEnsemble& ensemble, const OperatorExpr& o,
                   double overlap_epsilon) {
  double mag = std::abs(ensemble.overlap);
  if (mag <= overlap_epsilon)
    throw NullPostselectionError(
        "null post-selection: |<post|pre>| = " + std::to_string(mag), mag);
  return inner(ensemble.post, apply(o, ensemble.pre)) / ensemble.overlap;
}

double postselection_probability(const PrePostEnsemble& ensemble) {
  return std::norm(ensemble.overlap);
}

WeakValueTable weak_value_table(
    const PrePostEnsemble& ensemble,
    const std::vector<std::pair<std::string, OperatorExpr>>& observables,
    double overlap_epsilon) {
  std::set<std::string> seen;
  for (const auto& [label, o] : observables)
    if (!seen.insert(label).second)
      throw BoundsError("duplicate observable label '" + label + "'");

  WeakValueTable table;
  table.rows.reserve(observables.size());
  for (const auto& [label, o] : observables) {
    try {
      table.rows.push_back({label, weak_value(ensemble, o, overlap_epsilon)});
    } catch (const NullPostselectionError& e) {
      throw NullPostselectionError(
          "row '" + label + "': " + e.what(), e.magnitude);
    }
  }
  return table;
}

}  // namespace cheshire
