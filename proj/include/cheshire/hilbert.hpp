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

// Sparse states and operators on labeled tensor-product spaces.
//
// A space is an ordered list of factors, each a (label, dimension) pair.
// States store only nonzero amplitudes, keyed by multi-index (one basis index
// per factor). Operators are sums of product terms: each term is a complex
// coefficient times local matrices on a subset of factors; factors a term does
// not mention act as identity.
//
// Index conventions used throughout:
//   - dichotomic factors: |0>, |1> map to indices 0, 1
//   - qudit factors: levels |1>..|d> map to indices 0..d-1
// Amplitude maps are ordered lexicographically by multi-index, so iteration
// and serialization order are deterministic.

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cheshire/error.hpp"

namespace cheshire {

using Complex = std::complex<double>;

// One basis index per factor, in factor order.
using MultiIndex = std::vector<int>;

struct Factor {
  std::string label;
  int dim = 0;

  bool operator==(const Factor&) const = default;
};

class SpaceDescriptor {
 public:
  SpaceDescriptor() = default;
  explicit SpaceDescriptor(std::vector<Factor> factors);

  std::size_t factor_count() const { return factors_.size(); }
  const Factor& factor(std::size_t position) const;
  const std::vector<Factor>& factors() const { return factors_; }

  // Position of the factor with the given label; throws BoundsError if absent.
  std::size_t position_of(const std::string& label) const;
  bool has_factor(const std::string& label) const;

  // Product of factor dimensions, saturating at SIZE_MAX (16 factors of
  // dimension 16 already exceed 2^63). Comparisons against small caps stay
  // correct under saturation.
  std::size_t total_dimension() const;

  bool operator==(const SpaceDescriptor&) const = default;

 private:
  std::vector<Factor> factors_;
};

class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(SpaceDescriptor space) : space_(std::move(space)) {}

  const SpaceDescriptor& space() const { return space_; }
  const std::map<MultiIndex, Complex>& amplitudes() const { return amps_; }

  // Sets one amplitude; exact zeros are erased so the map stays minimal.
  void set_amplitude(const MultiIndex& index, Complex value);
  void add_amplitude(const MultiIndex& index, Complex value);
  Complex amplitude(const MultiIndex& index) const;

 private:
  void check_index(const MultiIndex& index) const;

  SpaceDescriptor space_;
  std::map<MultiIndex, Complex> amps_;
};

class OperatorExpr {
 public:
  struct Term {
    Complex coeff;
    // Factor position -> local matrix (square, matching the factor dim).
    std::map<std::size_t, Eigen::MatrixXcd> factors;
  };

  explicit OperatorExpr(SpaceDescriptor space) : space_(std::move(space)) {}

  static OperatorExpr zero(SpaceDescriptor space);
  static OperatorExpr identity(SpaceDescriptor space);

  // Factors are addressed by label here; positions are resolved and
  // validated against the space immediately.
  OperatorExpr& add_term(
      Complex coeff,
      const std::vector<std::pair<std::string, Eigen::MatrixXcd>>& factors);

  const SpaceDescriptor& space() const { return space_; }
  const std::vector<Term>& terms() const { return terms_; }

  OperatorExpr operator+(const OperatorExpr& other) const;
  OperatorExpr scaled(Complex factor) const;
  OperatorExpr adjoint() const;

 private:
  SpaceDescriptor space_;
  std::vector<Term> terms_;
};

struct StructureReport {
  bool hermitian = false;
  bool unitary = false;
  bool projector = false;
};

// Basis state |indices>; every index is bounds-checked against its factor.
StateVector make_basis_state(const SpaceDescriptor& space,
                             const MultiIndex& indices);

// Linear combination sum_i coeff_i |state_i|. Not renormalized.
StateVector superpose(
    const std::vector<std::pair<Complex, StateVector>>& terms);

// <bra|ket>, conjugate-linear in the bra.
Complex inner(const StateVector& bra, const StateVector& ket);

double norm(const StateVector& state);
bool is_normalized(const StateVector& state, double tol = 1e-12);
StateVector normalized(const StateVector& state);

// Product state on the concatenated factor list; labels must not collide.
StateVector tensor(const StateVector& a, const StateVector& b);

StateVector apply(const OperatorExpr& op, const StateVector& state);

// |<a|b>|^2; both states must be normalized and live on the same space.
double fidelity_up_to_phase(const StateVector& a, const StateVector& b);

// Positions of all factors any term touches, sorted ascending.
std::vector<std::size_t> active_factor_positions(const OperatorExpr& op);

// Dense matrix of op restricted to the given factor positions; factors
// outside the subset must be untouched by every term. Row-major flattening in
// position order. Throws CapacityError above dim_cap.
Eigen::MatrixXcd materialize_on(const OperatorExpr& op,
                                const std::vector<std::size_t>& positions,
                                std::size_t dim_cap = 4096);

// Dense matrix on the full space.
Eigen::MatrixXcd materialize(const OperatorExpr& op,
                             std::size_t dim_cap = 4096);

Eigen::VectorXcd dense(const StateVector& state, std::size_t dim_cap = 4096);

// Hermitian / unitary / projector predicates, evaluated on the dense
// materialization over the operator's active factors (identity factors cannot
// change any verdict, and skipping them keeps large sparse spaces under the
// cap). Deviations are compared against tol in the max-abs norm.
StructureReport check_structure(const OperatorExpr& op,
                                std::size_t dim_cap = 4096,
                                double tol = 1e-12);

}  // namespace cheshire
