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

#include <catch2/catch.hpp>
#include <cmath>
#include <random>

#include "cheshire/circuit.hpp"
#include "cheshire/cli.hpp"
#include "helpers.hpp"

using namespace cheshire;
using cheshire::testing::close;
using cheshire::testing::fixture_path;

namespace {

CircuitSpace photon3() { return {SpaceKind::photon, 3}; }
CircuitSpace neutron3() { return {SpaceKind::neutron, 3}; }

StateVector ref_state(const CircuitSpace& space, const std::string& which) {
  SpaceDescriptor d = space.descriptor();
  double r = 1.0 / std::sqrt(3.0);
  auto b = [&](int mode, int i1, int i2) {
    return make_basis_state(d, {mode, i1, i2});
  };
  if (which == "photon_marked")
    return superpose({{r, b(0, kPolR, oam_index(+2))},
                      {r, b(1, kPolL, oam_index(+2))},
                      {r, b(2, kPolR, oam_index(-2))}});
  if (which == "photon_uniform")
    return superpose({{r, b(0, kPolR, oam_index(+2))},
                      {r, b(1, kPolR, oam_index(+2))},
                      {r, b(2, kPolR, oam_index(+2))}});
  if (which == "neutron_marked")
    return superpose({{r, b(0, kSpinUp, kEnergyE0)},
                      {r, b(1, kSpinDown, kEnergyE0)},
                      {r, b(2, kSpinUp, kEnergyE1)}});
  return superpose({{r, b(0, kSpinUp, kEnergyE0)},
                    {r, b(1, kSpinUp, kEnergyE0)},
                    {r, b(2, kSpinUp, kEnergyE0)}});
}

// Random normalized state with support restricted by a predicate on the
// multi-index.
StateVector restricted_random_state(const SpaceDescriptor& space,
                                    std::mt19937_64& rng,
                                    bool (*keep)(const MultiIndex&)) {
  StateVector s = cheshire::testing::random_state(space, rng);
  std::vector<MultiIndex> drop;
  for (const auto& [idx, amp] : s.amplitudes())
    if (!keep(idx)) drop.push_back(idx);
  for (const MultiIndex& idx : drop) s.set_amplitude(idx, 0.0);
  return normalized(s);
}

bool any_index(const MultiIndex&) { return true; }
bool oam_interior(const MultiIndex& idx) {
  return idx[2] != 0 && idx[2] != 4;
}

}  // namespace

TEST_CASE("circuit elements preserve inner products", "[property]") {
  std::mt19937_64 rng(71);
  int checked = 0;

  auto check_element = [&](const CircuitSpace& space,
                           const CircuitElement& element,
                           bool (*keep)(const MultiIndex&)) {
    SpaceDescriptor desc = space.descriptor();
    OperatorExpr u = element_unitary(space, element);
    for (int trial = 0; trial < 10; ++trial) {
      StateVector a = restricted_random_state(desc, rng, keep);
      StateVector b = restricted_random_state(desc, rng, keep);
      REQUIRE(close(inner(apply(u, a), apply(u, b)), inner(a, b), 1e-11));
      ++checked;
    }
  };

  check_element(photon3(), BeamSplitter{0, 1, 1.0 / 3.0}, any_index);
  check_element(photon3(), BeamSplitter{1, 2, 0.5}, any_index);
  check_element(photon3(), Mirror{1}, any_index);
  check_element(photon3(), PhaseShifter{2, 0.37}, any_index);
  check_element(photon3(), HalfWavePlate{0}, any_index);
  check_element(photon3(), QPlate{1}, oam_interior);
  check_element(neutron3(), BeamSplitter{0, 1, 0.5}, any_index);
  check_element(neutron3(), Mirror{0}, any_index);
  check_element(neutron3(), PhaseShifter{1, -0.25}, any_index);
  check_element(neutron3(), SpinFlipper{0}, any_index);
  check_element(neutron3(), RFFlipper{2}, any_index);
  CHECK(checked >= 100);
}

TEST_CASE("element conventions on basis states") {
  CircuitSpace ph = photon3();
  SpaceDescriptor d = ph.descriptor();
  auto b = [&](int mode, int pol, int oam) {
    return make_basis_state(d, {mode, pol, oam});
  };

  SECTION("beam splitter splits with an i on reflection") {
    OperatorExpr u = element_unitary(ph, BeamSplitter{0, 1, 1.0 / 3.0});
    StateVector out = apply(u, b(0, kPolL, 2));
    CHECK(close(out.amplitude({0, 0, 2}), std::sqrt(1.0 / 3.0)));
    CHECK(close(out.amplitude({1, 0, 2}),
                Complex{0.0, std::sqrt(2.0 / 3.0)}));
    out = apply(u, b(1, kPolL, 2));
    CHECK(close(out.amplitude({1, 0, 2}), std::sqrt(1.0 / 3.0)));
    CHECK(close(out.amplitude({0, 0, 2}),
                Complex{0.0, std::sqrt(2.0 / 3.0)}));
    // Bystander mode untouched.
    CHECK(close(apply(u, b(2, 0, 2)).amplitude({2, 0, 2}), 1.0));
  }

  SECTION("mirror and phase shifter are mode-local phases") {
    OperatorExpr m = element_unitary(ph, Mirror{1});
    CHECK(close(apply(m, b(1, 0, 2)).amplitude({1, 0, 2}),
                Complex{0.0, 1.0}));
    CHECK(close(apply(m, b(0, 0, 2)).amplitude({0, 0, 2}), 1.0));
    OperatorExpr p = element_unitary(ph, PhaseShifter{2, 0.5});
    CHECK(close(apply(p, b(2, 0, 2)).amplitude({2, 0, 2}),
                Complex{0.0, 1.0}));
    OperatorExpr flip = element_unitary(ph, PhaseShifter{2, 1.0});
    CHECK(close(apply(flip, b(2, 0, 2)).amplitude({2, 0, 2}), -1.0));
  }

  SECTION("half-wave plate swaps polarization") {
    OperatorExpr u = element_unitary(ph, HalfWavePlate{1});
    CHECK(close(apply(u, b(1, kPolL, 3)).amplitude({1, kPolR, 3}), 1.0));
    CHECK(close(apply(u, b(1, kPolR, 3)).amplitude({1, kPolL, 3}), 1.0));
    CHECK(close(apply(u, b(0, kPolL, 3)).amplitude({0, kPolL, 3}), 1.0));
  }

  SECTION("q-plate walks the ladder in opposite directions per polarization") {
    OperatorExpr u = element_unitary(ph, QPlate{1});
    CHECK(close(apply(u, b(1, kPolL, oam_index(0)))
                    .amplitude({1, kPolR, oam_index(+2)}),
                1.0));
    CHECK(close(apply(u, b(1, kPolR, oam_index(0)))
                    .amplitude({1, kPolL, oam_index(-2)}),
                1.0));
    // Off-mode edge states are untouched, on-mode edge states annihilate:
    // stepping off the ladder never aliases.
    CHECK(close(apply(u, b(0, kPolL, oam_index(+4)))
                    .amplitude({0, kPolL, oam_index(+4)}),
                1.0));
    CHECK(norm(apply(u, b(1, kPolL, oam_index(+4)))) ==
          Approx(0.0).margin(1e-15));
    CHECK(norm(apply(u, b(1, kPolR, oam_index(-4)))) ==
          Approx(0.0).margin(1e-15));
  }

  CircuitSpace ne = neutron3();
  SpaceDescriptor nd = ne.descriptor();
  auto nb = [&](int mode, int spin, int energy) {
    return make_basis_state(nd, {mode, spin, energy});
  };

  SECTION("spin flipper swaps spin, resonant flipper trades spin for energy") {
    OperatorExpr sf = element_unitary(ne, SpinFlipper{1});
    CHECK(close(apply(sf, nb(1, kSpinUp, 0)).amplitude({1, kSpinDown, 0}),
                1.0));
    OperatorExpr rf = element_unitary(ne, RFFlipper{2});
    CHECK(close(apply(rf, nb(2, kSpinUp, kEnergyE0))
                    .amplitude({2, kSpinDown, kEnergyE1}),
                Complex{0.0, 1.0}));
    CHECK(close(apply(rf, nb(2, kSpinDown, kEnergyE1))
                    .amplitude({2, kSpinUp, kEnergyE0}),
                Complex{0.0, 1.0}));
    // Off-resonant states pass through.
    CHECK(close(apply(rf, nb(2, kSpinUp, kEnergyE1))
                    .amplitude({2, kSpinUp, kEnergyE1}),
                1.0));
    CHECK(close(apply(rf, nb(2, kSpinDown, kEnergyE0))
                    .amplitude({2, kSpinDown, kEnergyE0}),
                1.0));
    CHECK(close(apply(rf, nb(0, kSpinUp, kEnergyE0))
                    .amplitude({0, kSpinUp, kEnergyE0}),
                1.0));
  }

  SECTION("adjoint undoes an element") {
    OperatorExpr u = element_unitary(ph, BeamSplitter{0, 2, 0.7});
    std::mt19937_64 rng(72);
    StateVector s = cheshire::testing::random_state(d, rng);
    StateVector back = apply(u.adjoint(), apply(u, s));
    CHECK(std::abs(inner(back, s) - 1.0) < 1e-12);
  }
}

TEST_CASE("the photon preparation fixture lands on the marked state") {
  Circuit c = parse_circuit_file(fixture_path("photon_prep.qcc"));
  CHECK(c.space == photon3());
  REQUIRE(c.input.has_value());
  StateVector out = run(c, input_state(c));
  StateVector want = ref_state(c.space, "photon_marked");
  // Exact coefficient match, not merely fidelity up to phase.
  CHECK(close(inner(want, out), 1.0, 1e-12));
}

TEST_CASE("the filtered detector post-selects the uniform reference") {
  Circuit c = parse_circuit_file(fixture_path("photon_postsel_filtered.qcc"));
  StateVector want = ref_state(c.space, "photon_uniform");
  ProjectorReport rep = effective_postselection_projector(c, "D3", want);
  CHECK(rep.rank == 1);
  REQUIRE(rep.range.has_value());
  REQUIRE(rep.fidelity_to_target.has_value());
  CHECK(*rep.fidelity_to_target >= 1.0 - 1e-12);
}

TEST_CASE("an unfiltered detector accepts its whole internal space") {
  Circuit c = parse_circuit_file(fixture_path("photon_postsel_paper.qcc"));
  ProjectorReport rep = effective_postselection_projector(c, "D3");
  CHECK(rep.rank == 10);
  CHECK(!rep.range.has_value());
  CHECK(!rep.fidelity_to_target.has_value());
}

TEST_CASE("detection probabilities at the output ports") {
  Circuit c = parse_circuit_file(fixture_path("photon_postsel_filtered.qcc"));

  SECTION("the uniform reference goes entirely to the filtered port") {
    StateVector out = run(c, ref_state(c.space, "photon_uniform"));
    std::vector<DetectionResult> hits = detect(c, out);
    REQUIRE(hits.size() == 3);
    for (const DetectionResult& h : hits) {
      if (h.name == "D3") {
        CHECK(h.probability == Approx(1.0).margin(1e-12));
        CHECK(h.conditional.has_value());
      } else {
        CHECK(h.probability <= 1e-12);
      }
    }
    CHECK_THROWS_AS(detector_conditional_state(c, out, "D1"),
                    NullPostselectionError);
  }

  SECTION("the marked state passes the filter with probability 1/9") {
    StateVector out = run(c, ref_state(c.space, "photon_marked"));
    for (const DetectionResult& h : detect(c, out))
      if (h.name == "D3")
        CHECK(h.probability == Approx(1.0 / 9.0).margin(1e-12));
    StateVector cond = detector_conditional_state(c, out, "D3");
    CHECK(std::abs(std::abs(cond.amplitude(
              {0, kPolR, oam_index(+2)})) - 1.0) < 1e-12);
  }

  SECTION("asking for an unknown detector is a configuration error") {
    StateVector out = run(c, ref_state(c.space, "photon_uniform"));
    CHECK_THROWS_WITH(detector_conditional_state(c, out, "DX"),
                      Catch::Contains("no detector named 'DX'"));
  }
}

TEST_CASE("the neutron fixtures mirror the photon pipeline") {
  Circuit prep = parse_circuit_file(fixture_path("neutron_prep.qcc"));
  CHECK(prep.space == neutron3());
  StateVector out = run(prep, input_state(prep));
  CHECK(close(inner(ref_state(prep.space, "neutron_marked"), out), 1.0,
              1e-12));

  Circuit post = parse_circuit_file(fixture_path("neutron_postsel.qcc"));
  StateVector want = ref_state(post.space, "neutron_uniform");
  ProjectorReport rep = effective_postselection_projector(post, "D3", want);
  CHECK(rep.rank == 1);
  REQUIRE(rep.fidelity_to_target.has_value());
  CHECK(*rep.fidelity_to_target >= 1.0 - 1e-12);
}

TEST_CASE("end to end, each marker reads one on its own path and nowhere else") {
  Circuit prep = parse_circuit_file(fixture_path("photon_prep.qcc"));
  Circuit post = parse_circuit_file(fixture_path("photon_postsel_filtered.qcc"));
  SpaceDescriptor desc = prep.space.descriptor();
  MeterConfig meter = MeterConfig::standard(0.01);

  for (const std::string& token : {std::string("pi1"), std::string("pi2*sx:pol"),
                                   std::string("pi3*sx:oam")}) {
    EndToEndResult r = end_to_end_weak_experiment(
        prep, parse_observable(desc, token), meter, post, "D3");
    INFO("token " << token);
    CHECK(close(r.exact_weak_value, 1.0, 1e-10));
    CHECK(std::abs(r.record.inferred_weak_value - 1.0) < 1e-2);
    CHECK(std::abs(r.ensemble.overlap) == Approx(1.0 / 3.0).margin(1e-12));
  }

  EndToEndResult r = end_to_end_weak_experiment(
      prep, parse_observable(desc, "pi1*sx:pol"), meter, post, "D3");
  CHECK(close(r.exact_weak_value, 0.0, 1e-10));
  CHECK(std::abs(r.record.inferred_weak_value) < 1e-2);

  // A rank-10 post-selection cannot define the experiment.
  Circuit wide = parse_circuit_file(fixture_path("photon_postsel_paper.qcc"));
  CHECK_THROWS_AS(
      end_to_end_weak_experiment(prep, parse_observable(desc, "pi1"), meter,
                                 wide, "D3"),
      ConfigurationError);
}

TEST_CASE("a q-plate at the ladder edge raises an overflow naming the element") {
  Circuit c = parse_circuit(
      "space photon modes=1\n"
      "input mode=0 pol=L oam=+4\n"
      "qp 0\n");
  CHECK_THROWS_WITH(run(c, input_state(c)), Catch::Contains("element 0"));
}

TEST_CASE("structural validation rejects malformed elements") {
  CircuitSpace ph = photon3();
  CHECK_THROWS_AS(validate_element(ph, BeamSplitter{1, 1, 0.5}), BoundsError);
  CHECK_THROWS_AS(validate_element(ph, BeamSplitter{0, 1, 1.5}), BoundsError);
  CHECK_THROWS_WITH(validate_element(ph, Mirror{9}),
                    Catch::Contains("mode 9 out of range"));
  CHECK_THROWS_WITH(validate_element(ph, SpinFlipper{0}),
                    Catch::Contains("needs a neutron space"));
  CHECK_THROWS_AS(validate_element(neutron3(), QPlate{0}),
                  ConfigurationError);
  CHECK_NOTHROW(validate_element(ph, BeamSplitter{0, 1, 0.0}));
  CHECK_NOTHROW(validate_element(ph, BeamSplitter{0, 1, 1.0}));
}

TEST_CASE("run guards its input") {
  Circuit c;
  c.space = photon3();
  SpaceDescriptor d = c.space.descriptor();

  StateVector s = make_basis_state(d, {1, kPolR, oam_index(-2)});
  // No elements: identity.
  CHECK(close(inner(run(c, s), s), 1.0));

  StateVector big = superpose({{2.0, s}});
  CHECK_THROWS_AS(run(c, big), NormalizationError);
  CHECK_THROWS_AS(input_state(c), ConfigurationError);
}

TEST_CASE("random element chains preserve the norm", "[property]") {
  std::mt19937_64 rng(73);
  std::uniform_int_distribution<int> mode(0, 2);
  std::uniform_int_distribution<int> which(0, 4);
  std::uniform_int_distribution<int> length(5, 10);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  CircuitSpace ph = photon3();
  SpaceDescriptor d = ph.descriptor();

  for (int trial = 0; trial < 100; ++trial) {
    Circuit c;
    c.space = ph;
    int qplates = 0;
    int n = length(rng);
    for (int i = 0; i < n; ++i) {
      switch (which(rng)) {
        case 0: {
          int a = mode(rng), b = mode(rng);
          if (a == b) b = (b + 1) % 3;
          c.elements.push_back(BeamSplitter{a, b, unit(rng)});
          break;
        }
        case 1:
          c.elements.push_back(Mirror{mode(rng)});
          break;
        case 2:
          c.elements.push_back(PhaseShifter{mode(rng), 2.0 * unit(rng) - 1.0});
          break;
        case 3:
          c.elements.push_back(HalfWavePlate{mode(rng)});
          break;
        default:
          // Two plates starting from the ladder center cannot overflow.
          if (qplates < 2) {
            c.elements.push_back(QPlate{mode(rng)});
            ++qplates;
          } else {
            c.elements.push_back(Mirror{mode(rng)});
          }
          break;
      }
    }
    StateVector in = restricted_random_state(
        d, rng, [](const MultiIndex& idx) { return idx[2] == 2; });
    StateVector out = run(c, in);
    REQUIRE(norm(out) == Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("fixture circuits survive a serialize/parse round trip") {
  for (const char* name :
       {"photon_prep.qcc", "photon_postsel_filtered.qcc",
        "photon_postsel_paper.qcc", "neutron_prep.qcc",
        "neutron_postsel.qcc"}) {
    Circuit c = parse_circuit_file(fixture_path(name));
    Circuit again = parse_circuit(serialize_circuit(c));
    INFO(name);
    CHECK(c == again);
  }
}
