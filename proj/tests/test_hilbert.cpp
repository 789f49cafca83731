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
#include <nlohmann/json.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "cheshire/hilbert.hpp"
#include "cheshire/json_io.hpp"
#include "helpers.hpp"

using namespace cheshire;
using cheshire::testing::close;
using cheshire::testing::random_operator;
using cheshire::testing::random_space;
using cheshire::testing::random_state;

TEST_CASE("space descriptor validation") {
  CHECK_THROWS_AS(SpaceDescriptor{std::vector<Factor>{}}, BoundsError);
  CHECK_THROWS_AS(SpaceDescriptor({{"a", 2}, {"a", 3}}), BoundsError);
  CHECK_THROWS_AS(SpaceDescriptor({{"a", 0}}), BoundsError);
  CHECK_THROWS_AS(SpaceDescriptor({{"", 2}}), BoundsError);

  SpaceDescriptor space({{"path", 3}, {"pol", 2}});
  CHECK(space.factor_count() == 2);
  CHECK(space.position_of("pol") == 1);
  CHECK(space.has_factor("path"));
  CHECK(!space.has_factor("oam"));
  CHECK(space.total_dimension() == 6);
  CHECK_THROWS_AS(space.position_of("oam"), BoundsError);
}

TEST_CASE("total dimension saturates instead of overflowing") {
  std::vector<Factor> factors;
  for (int i = 0; i < 40; ++i) factors.push_back({"f" + std::to_string(i), 16});
  SpaceDescriptor space{std::move(factors)};
  CHECK(space.total_dimension() == SIZE_MAX);
  CHECK(space.total_dimension() > 4096);
}

TEST_CASE("basis states and amplitude maps") {
  SpaceDescriptor space({{"path", 2}, {"pol", 2}});
  StateVector s = make_basis_state(space, {1, 0});
  CHECK(s.amplitudes().size() == 1);
  CHECK(s.amplitude({1, 0}) == Complex{1.0, 0.0});
  CHECK(s.amplitude({0, 0}) == Complex{0.0, 0.0});
  CHECK_THROWS_AS(make_basis_state(space, {2, 0}), BoundsError);
  CHECK_THROWS_AS(make_basis_state(space, {0}), BoundsError);
  CHECK_THROWS_AS(s.amplitude({0, 5}), BoundsError);

  // Exact zeros leave the map; the representation stays minimal.
  StateVector t{space};
  t.set_amplitude({0, 1}, {0.5, 0.0});
  t.set_amplitude({0, 1}, {0.0, 0.0});
  CHECK(t.amplitudes().empty());
  t.add_amplitude({1, 1}, {0.25, 0.0});
  t.add_amplitude({1, 1}, {-0.25, 0.0});
  CHECK(t.amplitudes().empty());
}

// Overlap oracle: the two-path marked ensemble has <post|pre> = 1/2 and the
// three-path ensemble 1/3, computed by hand from the branch structure.
TEST_CASE("inner product oracles") {
  SpaceDescriptor two({{"path", 2}, {"pol", 2}});
  double r2 = 1.0 / std::sqrt(2.0);
  StateVector pre2 = superpose({{r2, make_basis_state(two, {0, 1})},
                                {r2, make_basis_state(two, {1, 0})}});
  StateVector post2 = superpose({{r2, make_basis_state(two, {0, 1})},
                                 {r2, make_basis_state(two, {1, 1})}});
  CHECK(close(inner(post2, pre2), Complex{0.5, 0.0}));

  SpaceDescriptor three({{"path", 3}, {"p1", 2}, {"p2", 2}});
  double r3 = 1.0 / std::sqrt(3.0);
  StateVector pre3 = superpose({{r3, make_basis_state(three, {0, 1, 1})},
                                {r3, make_basis_state(three, {1, 0, 1})},
                                {r3, make_basis_state(three, {2, 1, 0})}});
  StateVector post3 = superpose({{r3, make_basis_state(three, {0, 1, 1})},
                                 {r3, make_basis_state(three, {1, 1, 1})},
                                 {r3, make_basis_state(three, {2, 1, 1})}});
  CHECK(close(inner(post3, pre3), Complex{1.0 / 3.0, 0.0}));

  // Conjugate-linear in the bra: <i a|b> = -i <a|b>.
  StateVector scaled = superpose({{Complex{0.0, 1.0}, post3}});
  CHECK(close(inner(scaled, pre3), Complex{0.0, -1.0 / 3.0}));

  CHECK_THROWS_AS(inner(pre2, pre3), SpaceMismatchError);
}

TEST_CASE("norms and normalization") {
  SpaceDescriptor space({{"q", 3}});
  StateVector s = superpose({{3.0, make_basis_state(space, {0})},
                             {4.0, make_basis_state(space, {1})}});
  CHECK(norm(s) == Approx(5.0).margin(1e-12));
  CHECK(!is_normalized(s));
  StateVector n = normalized(s);
  CHECK(is_normalized(n));
  CHECK(close(n.amplitude({0}), Complex{0.6, 0.0}));

  StateVector zero{space};
  CHECK_THROWS_AS(normalized(zero), NormalizationError);
}

TEST_CASE("tensor products concatenate factors and multiply amplitudes") {
  SpaceDescriptor a({{"path", 2}});
  SpaceDescriptor b({{"pol", 2}});
  double r = 1.0 / std::sqrt(2.0);
  StateVector sa = superpose({{r, make_basis_state(a, {0})},
                              {Complex{0.0, r}, make_basis_state(a, {1})}});
  StateVector sb = make_basis_state(b, {1});
  StateVector t = tensor(sa, sb);
  CHECK(t.space().factor_count() == 2);
  CHECK(close(t.amplitude({0, 1}), Complex{r, 0.0}));
  CHECK(close(t.amplitude({1, 1}), Complex{0.0, r}));
  CHECK(norm(t) == Approx(norm(sa) * norm(sb)).margin(1e-12));

  // Label collision is rejected.
  CHECK_THROWS_AS(tensor(sa, sa), BoundsError);
}

TEST_CASE("operator expression construction rules") {
  SpaceDescriptor space({{"path", 3}, {"pol", 2}});
  OperatorExpr op{space};
  Eigen::MatrixXcd wrong(3, 3);
  wrong.setZero();
  CHECK_THROWS_AS(op.add_term(1.0, {{"pol", wrong}}), BoundsError);
  CHECK_THROWS_AS(op.add_term(1.0, {{"nope", wrong}}), BoundsError);
  Eigen::MatrixXcd sx(2, 2);
  sx << 0, 1, 1, 0;
  CHECK_THROWS_AS(op.add_term(1.0, {{"pol", sx}, {"pol", sx}}), BoundsError);

  OperatorExpr other{SpaceDescriptor({{"path", 3}})};
  CHECK_THROWS_AS(op + other, SpaceMismatchError);
}

TEST_CASE("identity and apply") {
  SpaceDescriptor space({{"path", 3}, {"pol", 2}});
  std::mt19937_64 rng(41);
  StateVector s = random_state(space, rng);
  StateVector t = apply(OperatorExpr::identity(space), s);
  for (const auto& [idx, amp] : s.amplitudes()) CHECK(close(t.amplitude(idx), amp));
  CHECK(apply(OperatorExpr::zero(space), s).amplitudes().empty());
}

TEST_CASE("apply agrees with dense materialization", "[property]") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 120; ++trial) {
    SpaceDescriptor space = random_space(rng);
    OperatorExpr op = random_operator(space, rng);
    StateVector s = random_state(space, rng);
    Eigen::VectorXcd sparse_path = dense(apply(op, s));
    Eigen::VectorXcd dense_path = materialize(op) * dense(s);
    REQUIRE((sparse_path - dense_path).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("adjoint transposes matrix elements", "[property]") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 120; ++trial) {
    SpaceDescriptor space = random_space(rng);
    OperatorExpr op = random_operator(space, rng);
    StateVector a = random_state(space, rng);
    StateVector b = random_state(space, rng);
    // <a|O b> = <O^dagger a|b>
    Complex lhs = inner(a, apply(op, b));
    Complex rhs = inner(apply(op.adjoint(), a), b);
    REQUIRE(close(lhs, rhs, 1e-11));
  }
}

TEST_CASE("operator algebra: sum and scaling") {
  std::mt19937_64 rng(44);
  SpaceDescriptor space({{"a", 2}, {"b", 3}});
  OperatorExpr p = random_operator(space, rng);
  OperatorExpr q = random_operator(space, rng);
  StateVector s = random_state(space, rng);
  Complex scale{0.5, -2.0};

  Eigen::VectorXcd got = dense(apply((p + q).scaled(scale), s));
  Eigen::VectorXcd want =
      scale * (materialize(p) + materialize(q)) * dense(s);
  CHECK((got - want).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("structure checks on known operators") {
  SpaceDescriptor space({{"path", 2}, {"pol", 2}});
  Eigen::MatrixXcd sx(2, 2), proj(2, 2);
  sx << 0, 1, 1, 0;
  proj << 1, 0, 0, 0;

  OperatorExpr flip{space};
  flip.add_term(1.0, {{"pol", sx}});
  StructureReport r = check_structure(flip);
  CHECK(r.hermitian);
  CHECK(r.unitary);
  CHECK(!r.projector);

  OperatorExpr pr{space};
  pr.add_term(1.0, {{"path", proj}});
  r = check_structure(pr);
  CHECK(r.hermitian);
  CHECK(!r.unitary);
  CHECK(r.projector);

  // i sigma_x: unitary but not Hermitian.
  OperatorExpr iflip = flip.scaled(Complex{0.0, 1.0});
  r = check_structure(iflip);
  CHECK(!r.hermitian);
  CHECK(r.unitary);
  CHECK(!r.projector);

  r = check_structure(OperatorExpr::identity(space));
  CHECK(r.hermitian);
  CHECK(r.unitary);
  CHECK(r.projector);
}

// The structural verdict of A (x) identity must be the verdict of A, and it
// must be reachable even when the full space is far beyond the dense cap.
TEST_CASE("structure checks use only active factors") {
  std::vector<Factor> factors;
  for (int i = 0; i < 8; ++i) factors.push_back({"f" + std::to_string(i), 8});
  SpaceDescriptor big{std::move(factors)};  // 8^8 = 16.7M total
  CHECK(big.total_dimension() > 4096);

  Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(8, 8);
  proj(2, 2) = 1.0;
  OperatorExpr op{big};
  op.add_term(1.0, {{"f3", proj}});

  StructureReport r = check_structure(op);
  CHECK(r.hermitian);
  CHECK(r.projector);
  CHECK(active_factor_positions(op) == std::vector<std::size_t>{3});
  CHECK_THROWS_AS(materialize(op), CapacityError);
}

TEST_CASE("dense flattening is row-major in factor order") {
  SpaceDescriptor space({{"a", 2}, {"b", 3}});
  StateVector s{space};
  s.set_amplitude({1, 2}, {7.0, 0.0});
  Eigen::VectorXcd v = dense(s);
  REQUIRE(v.size() == 6);
  CHECK(v(1 * 3 + 2) == Complex{7.0, 0.0});
}

TEST_CASE("fidelity up to phase") {
  SpaceDescriptor space({{"q", 2}});
  StateVector a = normalized(superpose({{0.6, make_basis_state(space, {0})},
                                        {0.8, make_basis_state(space, {1})}}));
  StateVector b = superpose({{std::exp(Complex{0.0, 0.7}), a}});
  CHECK(fidelity_up_to_phase(a, b) == Approx(1.0).margin(1e-12));

  StateVector c = normalized(superpose({{0.8, make_basis_state(space, {0})},
                                        {-0.6, make_basis_state(space, {1})}}));
  CHECK(fidelity_up_to_phase(a, c) == Approx(0.0).margin(1e-12));

  StateVector unnorm = superpose({{2.0, a}});
  CHECK_THROWS_AS(fidelity_up_to_phase(a, unnorm), NormalizationError);
}

TEST_CASE("random unitary terms preserve the norm", "[property]") {
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 110; ++trial) {
    SpaceDescriptor space = random_space(rng);
    StateVector s = random_state(space, rng);
    std::uniform_int_distribution<std::size_t> pick(0,
                                                    space.factor_count() - 1);
    std::size_t p = pick(rng);
    int dim = space.factor(p).dim;
    Eigen::MatrixXcd u =
        (Complex{0.0, 1.0} * cheshire::testing::random_hermitian(dim, rng))
            .exp();
    OperatorExpr op{space};
    op.add_term(1.0, {{space.factor(p).label, u}});
    REQUIRE(std::abs(norm(apply(op, s)) - 1.0) < 1e-10);
  }
}

TEST_CASE("state json round trip") {
  SpaceDescriptor space({{"path", 3}, {"pol", 2}});
  StateVector s{space};
  // Insert out of order; serialization must come out lexicographic.
  s.set_amplitude({2, 1}, {0.25, -0.5});
  s.set_amplitude({0, 1}, {0.5, 0.0});
  s.set_amplitude({1, 0}, {0.0, 0.75});

  nlohmann::ordered_json j = state_to_json(s);
  REQUIRE(j.contains("factors"));
  REQUIRE(j.contains("amplitudes"));
  CHECK(j["factors"][0]["label"] == "path");
  CHECK(j["factors"][0]["dim"] == 3);
  REQUIRE(j["amplitudes"].size() == 3);
  CHECK(j["amplitudes"][0]["index"] == nlohmann::ordered_json({0, 1}));
  CHECK(j["amplitudes"][1]["index"] == nlohmann::ordered_json({1, 0}));
  CHECK(j["amplitudes"][2]["index"] == nlohmann::ordered_json({2, 1}));

  StateVector back = state_from_json(j);
  CHECK(back.space() == s.space());
  CHECK(back.amplitudes() == s.amplitudes());

  nlohmann::ordered_json bad = {{"factors", 3}};
  CHECK_THROWS_AS(state_from_json(bad), Error);
}
