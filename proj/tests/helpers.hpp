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

// Shared randomized-test plumbing. Every suite seeds its own mt19937_64 so
// failures reproduce deterministically.

#include <random>
#include <string>

#include "cheshire/hilbert.hpp"

namespace cheshire::testing {

inline std::string fixture_path(const std::string& name) {
  return std::string(CHESHIRE_FIXTURE_DIR "/") + name;
}

inline bool close(Complex a, Complex b, double tol = 1e-12) {
  return std::abs(a - b) <= tol;
}

// Random small space: 1..3 factors of dimension 2..4.
inline SpaceDescriptor random_space(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nf(1, 3), nd(2, 4);
  std::vector<Factor> factors;
  int count = nf(rng);
  for (int i = 0; i < count; ++i)
    factors.push_back({"f" + std::to_string(i), nd(rng)});
  return SpaceDescriptor{std::move(factors)};
}

// Dense normalized random state over the whole space.
inline StateVector random_state(const SpaceDescriptor& space,
                                std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  StateVector s{space};
  MultiIndex idx(space.factor_count(), 0);
  while (true) {
    s.set_amplitude(idx, Complex{gauss(rng), gauss(rng)});
    std::size_t pos = 0;
    while (pos < idx.size()) {
      if (++idx[pos] < space.factor(pos).dim) break;
      idx[pos] = 0;
      ++pos;
    }
    if (pos == idx.size()) break;
  }
  return normalized(s);
}

inline Eigen::MatrixXcd random_matrix(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXcd m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = Complex{gauss(rng), gauss(rng)};
  return m;
}

inline Eigen::MatrixXcd random_hermitian(int dim, std::mt19937_64& rng) {
  Eigen::MatrixXcd m = random_matrix(dim, rng);
  return Eigen::MatrixXcd((m + m.adjoint()) / 2.0);
}

// 1..3 product terms over random nonempty factor subsets. With
// hermitian_terms the coefficients are real and each local matrix Hermitian,
// so the sum is Hermitian.
inline OperatorExpr random_operator(const SpaceDescriptor& space,
                                    std::mt19937_64& rng,
                                    bool hermitian_terms = false) {
  std::uniform_int_distribution<int> nt(1, 3);
  std::normal_distribution<double> gauss;
  std::bernoulli_distribution take(0.6);
  OperatorExpr op{space};
  int terms = nt(rng);
  for (int t = 0; t < terms; ++t) {
    std::vector<std::pair<std::string, Eigen::MatrixXcd>> factors;
    while (factors.empty()) {
      for (std::size_t p = 0; p < space.factor_count(); ++p) {
        if (!take(rng)) continue;
        int dim = space.factor(p).dim;
        factors.emplace_back(space.factor(p).label,
                             hermitian_terms ? random_hermitian(dim, rng)
                                             : random_matrix(dim, rng));
      }
    }
    Complex coeff = hermitian_terms ? Complex{gauss(rng), 0.0}
                                    : Complex{gauss(rng), gauss(rng)};
    op.add_term(coeff, factors);
  }
  return op;
}

}  // namespace cheshire::testing
