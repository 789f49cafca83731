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

#include "cheshire/pointer.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <map>
#include <numbers>

namespace cheshire {

namespace {

constexpr double kConditioningFloor = 1e-14;

bool power_of_two(int n) { return n >= 2 && (n & (n - 1)) == 0; }

void validate_meter(const MeterConfig& meter) {
  if (meter.g <= 0.0) throw GridError("coupling g must be positive");
  if (meter.sigma <= 0.0) throw GridError("sigma must be positive");
  if (!power_of_two(meter.grid_points))
    throw GridError("grid_points must be a power of two >= 2, got " +
                    std::to_string(meter.grid_points));
  if (meter.grid_halfwidth <= 0.0)
    throw GridError("grid_halfwidth must be positive");
}

// Splits each amplitude of a sparse state into (active linear index, rest
// key) and collects a dense active-subspace vector per rest key.
std::map<MultiIndex, Eigen::VectorXcd> split_by_rest(
    const StateVector& state, const std::vector<std::size_t>& positions,
    Eigen::Index active_dim) {
  const SpaceDescriptor& space = state.space();
  std::vector<bool> is_active(space.factor_count(), false);
  for (std::size_t pos : positions) is_active[pos] = true;

  std::map<MultiIndex, Eigen::VectorXcd> out;
  for (const auto& [idx, amp] : state.amplitudes()) {
    std::size_t linear = 0;
    MultiIndex rest;
    rest.reserve(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (is_active[i])
        linear = linear * space.factor(i).dim + idx[i];
      else
        rest.push_back(idx[i]);
    }
    auto [it, inserted] = out.try_emplace(std::move(rest));
    if (inserted) it->second = Eigen::VectorXcd::Zero(active_dim);
    it->second(linear) += amp;
  }
  return out;
}

}  // namespace

BranchDecomposition branch_decomposition(const PrePostEnsemble& ensemble,
                                         const OperatorExpr& o,
                                         std::size_t dim_cap) {
  if (!(o.space() == ensemble.pre.space()))
    throw SpaceMismatchError("observable space does not match ensemble");
  if (!check_structure(o, dim_cap).hermitian)
    throw StructureError("pointer coupling needs a Hermitian observable");

  std::vector<std::size_t> positions = active_factor_positions(o);
  Eigen::MatrixXcd a = materialize_on(o, positions, dim_cap);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
  if (es.info() != Eigen::Success)
    throw StructureError("eigendecomposition failed");

  auto pre_parts = split_by_rest(ensemble.pre, positions, a.rows());
  auto post_parts = split_by_rest(ensemble.post, positions, a.rows());

  BranchDecomposition branches;
  branches.eigenvalues.resize(a.rows());
  branches.amplitudes.resize(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    double lambda = es.eigenvalues()(i);
    branches.eigenvalues[i] = lambda;
    branches.max_abs_eigenvalue =
        std::max(branches.max_abs_eigenvalue, std::abs(lambda));
    Eigen::VectorXcd u = es.eigenvectors().col(i);
    Complex c{0.0, 0.0};
    for (const auto& [rest, post_vec] : post_parts) {
      auto it = pre_parts.find(rest);
      if (it == pre_parts.end()) continue;
      // <post|P_i|pre> restricted to this rest key.
      c += std::conj(u.dot(post_vec)) * u.dot(it->second);
    }
    branches.amplitudes[i] = c;
  }
  return branches;
}

MeasurementRecord simulate_from_branches(const BranchDecomposition& branches,
                                         const MeterConfig& meter) {
  validate_meter(meter);
  double reach = 5.0 * meter.sigma +
                 std::abs(meter.g) * branches.max_abs_eigenvalue;
  if (meter.grid_halfwidth < reach)
    throw GridError("grid_halfwidth " + std::to_string(meter.grid_halfwidth) +
                    " below required " + std::to_string(reach));

  const int n = meter.grid_points;
  const double dx = 2.0 * meter.grid_halfwidth / n;
  const double var = meter.sigma * meter.sigma;
  const double amp0 =
      std::pow(2.0 * std::numbers::pi * var, -0.25);  // L2-normalized Gaussian

  MeasurementRecord rec;
  rec.g = meter.g;
  rec.sigma = meter.sigma;
  rec.grid_x.resize(n);

  std::vector<Complex> psi(n, Complex{0.0, 0.0});
  for (int k = 0; k < n; ++k)
    rec.grid_x[k] = -meter.grid_halfwidth + k * dx;
  for (std::size_t i = 0; i < branches.eigenvalues.size(); ++i) {
    Complex c = branches.amplitudes[i];
    if (c == Complex{0.0, 0.0}) continue;
    double center = meter.g * branches.eigenvalues[i];
    for (int k = 0; k < n; ++k) {
      double u = rec.grid_x[k] - center;
      psi[k] += c * (amp0 * std::exp(-u * u / (4.0 * var)));
    }
  }

  double success = 0.0;
  for (int k = 0; k < n; ++k) success += std::norm(psi[k]);
  success *= dx;
  rec.success_probability = success;
  if (success < kConditioningFloor)
    throw NullPostselectionError(
        "post-selection probability " + std::to_string(success) +
            " below conditioning floor",
        success);

  double scale = 1.0 / std::sqrt(success);
  for (int k = 0; k < n; ++k) psi[k] *= scale;

  rec.density.resize(n);
  double mean_x = 0.0;
  for (int k = 0; k < n; ++k) {
    rec.density[k] = std::norm(psi[k]);
    mean_x += rec.grid_x[k] * rec.density[k];
  }
  // density entries integrate against dx; the stored density is per unit
  // length so that sum(density)*dx = 1.
  mean_x *= dx;
  rec.position_mean = mean_x;

  Eigen::FFT<double> fft;
  std::vector<Complex> psi_p;
  fft.fwd(psi_p, psi);
  double wsum = 0.0, mean_p = 0.0;
  for (int j = 0; j < n; ++j) {
    int f = (j < n / 2) ? j : j - n;
    double p = 2.0 * std::numbers::pi * f / (n * dx);
    double w = std::norm(psi_p[j]);
    wsum += w;
    mean_p += p * w;
  }
  mean_p /= wsum;
  rec.momentum_mean = mean_p;

  rec.inferred_weak_value =
      Complex{mean_x / meter.g, mean_p * 2.0 * var / meter.g};
  return rec;
}

MeasurementRecord simulate_weak_measurement(const PrePostEnsemble& ensemble,
                                            const OperatorExpr& o,
                                            const MeterConfig& meter) {
  return simulate_from_branches(branch_decomposition(ensemble, o), meter);
}

std::vector<SweepPoint> convergence_sweep(const PrePostEnsemble& ensemble,
                                          const OperatorExpr& o,
                                          const MeterConfig& base,
                                          const std::vector<double>& g_list) {
  if (g_list.empty()) throw BoundsError("empty coupling list");
  for (std::size_t i = 1; i < g_list.size(); ++i)
    if (!(g_list[i] < g_list[i - 1]))
      throw BoundsError("coupling list must be sorted strictly descending");

  Complex exact = weak_value(ensemble, o);
  BranchDecomposition branches = branch_decomposition(ensemble, o);

  std::vector<SweepPoint> points;
  points.reserve(g_list.size());
  for (double g : g_list) {
    MeterConfig meter = base;
    meter.g = g;
    SweepPoint p;
    p.g = g;
    p.record = simulate_from_branches(branches, meter);
    p.error = std::abs(p.record.inferred_weak_value - exact);
    points.push_back(std::move(p));
  }
  return points;
}

}  // namespace cheshire
