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

#include "cheshire/json_io.hpp"

#include <cstdio>
#include <nlohmann/json.hpp>

namespace cheshire {

namespace {

using json = nlohmann::ordered_json;

std::string sig17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v + 0.0);
  return buf;
}

json complex_to_json(Complex z) {
  return json{{"re", z.real()}, {"im", z.imag()}};
}

json space_to_json(const SpaceDescriptor& space) {
  json factors = json::array();
  for (const Factor& f : space.factors())
    factors.push_back({{"label", f.label}, {"dim", f.dim}});
  return factors;
}

json matrix_to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

json state_to_json(const StateVector& state) {
  json amplitudes = json::array();
  for (const auto& [index, amp] : state.amplitudes()) {
    amplitudes.push_back({{"index", index},
                          {"re", amp.real()},
                          {"im", amp.imag()}});
  }
  return json{{"factors", space_to_json(state.space())},
              {"amplitudes", std::move(amplitudes)}};
}

StateVector state_from_json(const json& j) {
  try {
    std::vector<Factor> factors;
    for (const json& f : j.at("factors"))
      factors.push_back({f.at("label").get<std::string>(),
                         f.at("dim").get<int>()});
    StateVector state{SpaceDescriptor{std::move(factors)}};
    for (const json& a : j.at("amplitudes")) {
      MultiIndex index = a.at("index").get<MultiIndex>();
      state.set_amplitude(index, Complex{a.at("re").get<double>(),
                                         a.at("im").get<double>()});
    }
    return state;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed state document: ") + e.what());
  }
}

json table_to_json(const WeakValueTable& table) {
  json rows = json::array();
  for (const WeakValueRow& row : table.rows)
    rows.push_back({{"label", row.label},
                    {"re", row.value.real()},
                    {"im", row.value.imag()}});
  return rows;
}

std::string table_to_csv(const WeakValueTable& table) {
  std::string out = "label,re,im\n";
  for (const WeakValueRow& row : table.rows) {
    out += row.label;
    out += ',';
    out += sig17(row.value.real());
    out += ',';
    out += sig17(row.value.imag());
    out += '\n';
  }
  return out;
}

json scenario_to_json(const Scenario& scenario) {
  json observables = json::array();
  for (const auto& [label, op] : scenario.observables) {
    json terms = json::array();
    for (const OperatorExpr::Term& term : op.terms()) {
      json factors = json::array();
      for (const auto& [position, matrix] : term.factors)
        factors.push_back(
            {{"label", op.space().factor(position).label},
             {"matrix", matrix_to_json(matrix)}});
      terms.push_back({{"coeff", complex_to_json(term.coeff)},
                       {"factors", std::move(factors)}});
    }
    observables.push_back({{"label", label}, {"terms", std::move(terms)}});
  }

  json expected = json::array();
  for (const ExpectedRow& row : scenario.expected)
    expected.push_back(
        {{"label", row.label},
         {"re", row.value.real()},
         {"im", row.value.imag()},
         {"provenance",
          row.provenance == Provenance::stated ? "stated" : "derived"}});

  return json{{"name", scenario.name},
              {"space", space_to_json(scenario.ensemble.pre.space())},
              {"pre", state_to_json(scenario.ensemble.pre)},
              {"post", state_to_json(scenario.ensemble.post)},
              {"observables", std::move(observables)},
              {"expected", std::move(expected)}};
}

json record_to_json(const MeasurementRecord& record) {
  return json{{"g", record.g},
              {"sigma", record.sigma},
              {"success_probability", record.success_probability},
              {"position_mean", record.position_mean},
              {"momentum_mean", record.momentum_mean},
              {"weak_value", complex_to_json(record.inferred_weak_value)}};
}

std::string record_density_csv(const MeasurementRecord& record) {
  std::string out = "x,density\n";
  for (std::size_t i = 0; i < record.grid_x.size(); ++i) {
    out += sig17(record.grid_x[i]);
    out += ',';
    out += sig17(record.density[i]);
    out += '\n';
  }
  return out;
}

}  // namespace cheshire
