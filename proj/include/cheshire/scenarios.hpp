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

// Built-in pre/post-selected scenarios in which path projectors and property
// operators have weak value 1 on exactly one path each: the path marker sits
// on path 1 while each property registers on a different path. Every
// generator returns the ensemble, the labeled observable list, and the
// expected weak-value table the construction guarantees.

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "cheshire/hilbert.hpp"
#include "cheshire/weakvalue.hpp"

namespace cheshire {

// Where an expected value comes from: stated by the reference construction,
// or derived from its generalization pattern.
enum class Provenance { stated, derived };

struct ExpectedRow {
  std::string label;
  Complex value;
  Provenance provenance;
};

struct Scenario {
  std::string name;
  PrePostEnsemble ensemble;
  std::vector<std::pair<std::string, OperatorExpr>> observables;
  std::vector<ExpectedRow> expected;
};

// Two paths, one dichotomic property (polarization). The path projectors
// locate the system on path 1 while sigma-x registers only on path 2.
Scenario original_cheshire();

// Three paths, two dichotomic properties, each disembodied to its own path.
// Includes the joint sigma-x rows, which all vanish even though the separate
// factors are 1: the product-rule failure witness.
Scenario two_property_three_path();

// n paths, n-1 dichotomic properties; (Pi_k sigma_x^(m))_w = 1 iff k = m+1.
// n = 2 reduces to the original two-path scenario.
Scenario n_path_dichotomic(int n, int max_n = 20);

// Three paths, two qutrit properties probed by exchange operators J.
Scenario qutrit_two_property();

// d paths, d-1 qudit properties, exchange operators J^(m) = |1><m+1| + h.c.
Scenario qudit_chain(int d, int max_d = 16);

struct Mismatch {
  std::string label;
  Complex computed;
  Complex expected;
};

struct VerifyReport {
  bool pass = false;
  WeakValueTable table;
  std::vector<Mismatch> mismatches;
};

// Recomputes every row and compares against the expected table.
VerifyReport verify(const Scenario& scenario, double tol = 1e-12);

}  // namespace cheshire
