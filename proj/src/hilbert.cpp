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

#include "cheshire/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace cheshire {

namespace {

std::size_t saturating_mul(std::size_t a, std::size_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > std::numeric_limits<std::size_t>::max() / b)
    return std::numeric_limits<std::size_t>::max();
  return a * b;
}

}  // namespace

SpaceDescriptor::SpaceDescriptor(std::vector<Factor> factors)
    : factors_(std::move(factors)) {
  if (factors_.empty()) throw BoundsError("space needs at least one factor");
  std::set<std::string> seen;
  for (const Factor& f : factors_) {
    if (f.label.empty()) throw BoundsError("factor label must be non-empty");
    if (f.dim < 1)
      throw BoundsError("factor '" + f.label + "' has dimension " +
                        std::to_string(f.dim));
    if (!seen.insert(f.label).second)
      throw BoundsError("duplicate factor label '" + f.label + "'");
  }
}

const Factor& SpaceDescriptor::factor(std::size_t position) const {
  if (position >= factors_.size())
    throw BoundsError("factor position " + std::to_string(position) +
                      " out of range");
  return factors_[position];
}

std::size_t SpaceDescriptor::position_of(const std::string& label) const {
  for (std::size_t i = 0; i < factors_.size(); ++i)
    if (factors_[i].label == label) return i;
  throw BoundsError("no factor labeled '" + label + "'");
}

bool SpaceDescriptor::has_factor(const std::string& label) const {
  return std::any_of(factors_.begin(), factors_.end(),
                     [&](const Factor& f) { return f.label == label; });
}

std::size_t SpaceDescriptor::total_dimension() const {
  std::size_t dim = 1;
  for (const Factor& f : factors_)
    dim = saturating_mul(dim, static_cast<std::size_t>(f.dim));
  return dim;
}

void StateVector::check_index(const MultiIndex& index) const {
  if (index.size() != space_.factor_count())
    throw BoundsError("multi-index has " + std::to_string(index.size()) +
                      " entries, space has " +
                      std::to_string(space_.factor_count()) + " factors");
  for (std::size_t i = 0; i < index.size(); ++i) {
    const Factor& f = space_.factor(i);
    if (index[i] < 0 || index[i] >= f.dim)
      throw BoundsError("index " + std::to_string(index[i]) +
                        " out of range for factor '" + f.label + "' (dim " +
                        std::to_string(f.dim) + ")");
  }
}

void StateVector::set_amplitude(const MultiIndex& index, Complex value) {
  check_index(index);
  if (value == Complex{0.0, 0.0})
    amps_.erase(index);
  else
    amps_[index] = value;
}

void StateVector::add_amplitude(const MultiIndex& index, Complex value) {
  check_index(index);
  auto it = amps_.find(index);
  Complex next = (it == amps_.end() ? value : it->second + value);
  if (next == Complex{0.0, 0.0}) {
    if (it != amps_.end()) amps_.erase(it);
  } else {
    amps_[index] = next;
  }
}

Complex StateVector::amplitude(const MultiIndex& index) const {
  check_index(index);
  auto it = amps_.find(index);
  return it == amps_.end() ? Complex{0.0, 0.0} : it->second;
}

OperatorExpr OperatorExpr::zero(SpaceDescriptor space) {
  return OperatorExpr(std::move(space));
}

OperatorExpr OperatorExpr::identity(SpaceDescriptor space) {
  OperatorExpr op(std::move(space));
  op.terms_.push_back(Term{Complex{1.0, 0.0}, {}});
  return op;
}

OperatorExpr& OperatorExpr::add_term(
    Complex coeff,
    const std::vector<std::pair<std::string, Eigen::MatrixXcd>>& factors) {
  Term term;
  term.coeff = coeff;
  for (const auto& [label, matrix] : factors) {
    std::size_t pos = space_.position_of(label);
    int dim = space_.factor(pos).dim;
    if (matrix.rows() != dim || matrix.cols() != dim)
      throw BoundsError("matrix for factor '" + label + "' is " +
                        std::to_string(matrix.rows()) + "x" +
                        std::to_string(matrix.cols()) + ", factor dim is " +
                        std::to_string(dim));
    if (term.factors.count(pos))
      throw BoundsError("factor '" + label + "' repeated within a term");
    term.factors[pos] = matrix;
  }
  terms_.push_back(std::move(term));
  return *this;
}

OperatorExpr OperatorExpr::operator+(const OperatorExpr& other) const {
  if (!(space_ == other.space_))
    throw SpaceMismatchError("operator sum across different spaces");
  OperatorExpr out(space_);
  out.terms_ = terms_;
  out.terms_.insert(out.terms_.end(), other.terms_.begin(),
                    other.terms_.end());
  return out;
}

OperatorExpr OperatorExpr::scaled(Complex factor) const {
  OperatorExpr out(space_);
  out.terms_ = terms_;
  for (Term& t : out.terms_) t.coeff *= factor;
  return out;
}

OperatorExpr OperatorExpr::adjoint() const {
  OperatorExpr out(space_);
  out.terms_ = terms_;
  for (Term& t : out.terms_) {
    t.coeff = std::conj(t.coeff);
    for (auto& [pos, m] : t.factors) m = m.adjoint().eval();
  }
  return out;
}

StateVector make_basis_state(const SpaceDescriptor& space,
                             const MultiIndex& indices) {
  StateVector s(space);
  s.set_amplitude(indices, Complex{1.0, 0.0});
  return s;
}

StateVector superpose(
    const std::vector<std::pair<Complex, StateVector>>& terms) {
  if (terms.empty()) throw BoundsError("superpose needs at least one term");
  const SpaceDescriptor& space = terms.front().second.space();
  StateVector out(space);
  for (const auto& [coeff, state] : terms) {
    if (!(state.space() == space))
      throw SpaceMismatchError("superpose across different spaces");
    for (const auto& [idx, amp] : state.amplitudes())
      out.add_amplitude(idx, coeff * amp);
  }
  return out;
}

Complex inner(const StateVector& bra, const StateVector& ket) {
  if (!(bra.space() == ket.space()))
    throw SpaceMismatchError("inner product across different spaces");
  // Merge walk over the two sorted maps.
  Complex acc{0.0, 0.0};
  auto ib = bra.amplitudes().begin(), eb = bra.amplitudes().end();
  auto ik = ket.amplitudes().begin(), ek = ket.amplitudes().end();
  while (ib != eb && ik != ek) {
    if (ib->first < ik->first) {
      ++ib;
    } else if (ik->first < ib->first) {
      ++ik;
    } else {
      acc += std::conj(ib->second) * ik->second;
      ++ib;
      ++ik;
    }
  }
  return acc;
}

double norm(const StateVector& state) {
  double sumsq = 0.0;
  for (const auto& [idx, amp] : state.amplitudes()) sumsq += std::norm(amp);
  return std::sqrt(sumsq);
}

bool is_normalized(const StateVector& state, double tol) {
  double sumsq = 0.0;
  for (const auto& [idx, amp] : state.amplitudes()) sumsq += std::norm(amp);
  return std::abs(sumsq - 1.0) <= tol;
}

StateVector normalized(const StateVector& state) {
  double n = norm(state);
  if (n == 0.0) throw NormalizationError("cannot normalize the zero state");
  StateVector out(state.space());
  for (const auto& [idx, amp] : state.amplitudes())
    out.set_amplitude(idx, amp / n);
  return out;
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  std::vector<Factor> factors = a.space().factors();
  factors.insert(factors.end(), b.space().factors().begin(),
                 b.space().factors().end());
  SpaceDescriptor space(std::move(factors));  // rejects label collisions
  StateVector out(space);
  for (const auto& [ia, va] : a.amplitudes()) {
    for (const auto& [ib, vb] : b.amplitudes()) {
      MultiIndex idx = ia;
      idx.insert(idx.end(), ib.begin(), ib.end());
      out.set_amplitude(idx, va * vb);
    }
  }
  return out;
}

StateVector apply(const OperatorExpr& op, const StateVector& state) {
  if (!(op.space() == state.space()))
    throw SpaceMismatchError("operator applied to state on different space");
  StateVector out(state.space());
  for (const auto& term : op.terms()) {
    std::map<MultiIndex, Complex> current = state.amplitudes();
    for (const auto& [pos, matrix] : term.factors) {
      std::map<MultiIndex, Complex> next;
      for (const auto& [idx, amp] : current) {
        int col = idx[pos];
        for (int row = 0; row < matrix.rows(); ++row) {
          Complex v = matrix(row, col);
          if (v == Complex{0.0, 0.0}) continue;
          MultiIndex nidx = idx;
          nidx[pos] = row;
          next[nidx] += amp * v;
        }
      }
      current = std::move(next);
    }
    for (const auto& [idx, amp] : current)
      out.add_amplitude(idx, term.coeff * amp);
  }
  return out;
}

double fidelity_up_to_phase(const StateVector& a, const StateVector& b) {
  if (!(a.space() == b.space()))
    throw SpaceMismatchError("fidelity across different spaces");
  if (!is_normalized(a) || !is_normalized(b))
    throw NormalizationError("fidelity_up_to_phase needs normalized states");
  return std::norm(inner(a, b));
}

std::vector<std::size_t> active_factor_positions(const OperatorExpr& op) {
  std::set<std::size_t> active;
  for (const auto& term : op.terms())
    for (const auto& [pos, m] : term.factors) active.insert(pos);
  return {active.begin(), active.end()};
}

Eigen::MatrixXcd materialize_on(const OperatorExpr& op,
                                const std::vector<std::size_t>& positions,
                                std::size_t dim_cap) {
  const SpaceDescriptor& space = op.space();
  std::set<std::size_t> allowed(positions.begin(), positions.end());
  for (const auto& term : op.terms())
    for (const auto& [pos, m] : term.factors)
      if (!allowed.count(pos))
        throw BoundsError("term touches factor '" + space.factor(pos).label +
                          "' outside the materialization subset");

  std::size_t dim = 1;
  for (std::size_t pos : positions)
    dim = saturating_mul(dim, static_cast<std::size_t>(space.factor(pos).dim));
  if (dim > dim_cap)
    throw CapacityError("materialization dimension " + std::to_string(dim) +
                        " exceeds cap " + std::to_string(dim_cap));

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& term : op.terms()) {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Constant(1, 1, term.coeff);
    for (std::size_t pos : positions) {
      int d = space.factor(pos).dim;
      auto it = term.factors.find(pos);
      Eigen::MatrixXcd local =
          (it == term.factors.end()) ? Eigen::MatrixXcd::Identity(d, d)
                                     : it->second;
      Eigen::MatrixXcd next(acc.rows() * d, acc.cols() * d);
      for (Eigen::Index i = 0; i < acc.rows(); ++i)
        for (Eigen::Index j = 0; j < acc.cols(); ++j)
          next.block(i * d, j * d, d, d) = acc(i, j) * local;
      acc = std::move(next);
    }
    out += acc;
  }
  return out;
}

Eigen::MatrixXcd materialize(const OperatorExpr& op, std::size_t dim_cap) {
  std::vector<std::size_t> all(op.space().factor_count());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return materialize_on(op, all, dim_cap);
}

Eigen::VectorXcd dense(const StateVector& state, std::size_t dim_cap) {
  std::size_t dim = state.space().total_dimension();
  if (dim > dim_cap)
    throw CapacityError("dense state dimension " + std::to_string(dim) +
                        " exceeds cap " + std::to_string(dim_cap));
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim);
  for (const auto& [idx, amp] : state.amplitudes()) {
    std::size_t linear = 0;
    for (std::size_t i = 0; i < idx.size(); ++i)
      linear = linear * state.space().factor(i).dim + idx[i];
    out(linear) = amp;
  }
  return out;
}

StructureReport check_structure(const OperatorExpr& op, std::size_t dim_cap,
                                double tol) {
  Eigen::MatrixXcd a =
      materialize_on(op, active_factor_positions(op), dim_cap);
  Eigen::Index n = a.rows();
  StructureReport report;
  report.hermitian =
      (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
  report.unitary =
      (a.adjoint() * a - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() <= tol;
  report.projector =
      report.hermitian && (a * a - a).cwiseAbs().maxCoeff() <= tol;
  return report;
}

}  // namespace cheshire
