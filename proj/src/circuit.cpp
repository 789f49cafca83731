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

#include "cheshire/circuit.hpp"

#include <cmath>
#include <numbers>
#include <set>

namespace cheshire {

namespace {

constexpr double kConditioningFloor = 1e-14;
constexpr int kOamLevels = 5;

const Complex kI{0.0, 1.0};

Eigen::MatrixXcd mode_projector(int modes, int m) {
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(modes, modes);
  p(m, m) = 1.0;
  return p;
}

Eigen::MatrixXcd mode_complement(int modes, int m) {
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(modes, modes);
  p(m, m) = 0.0;
  return p;
}

Eigen::MatrixXcd unit(int dim, int row, int col) {
  Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(dim, dim);
  e(row, col) = 1.0;
  return e;
}

Eigen::MatrixXcd swap2() {
  Eigen::MatrixXcd x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

void check_mode(const CircuitSpace& space, int mode, const char* what) {
  if (mode < 0 || mode >= space.modes)
    throw BoundsError(std::string(what) + " mode " + std::to_string(mode) +
                      " out of range [0, " + std::to_string(space.modes - 1) +
                      "]");
}

}  // namespace

SpaceDescriptor CircuitSpace::descriptor() const {
  if (modes < 1)
    throw BoundsError("circuit needs at least one mode");
  if (kind == SpaceKind::photon)
    return SpaceDescriptor(
        {{"path", modes}, {"pol", 2}, {"oam", kOamLevels}});
  return SpaceDescriptor({{"path", modes}, {"spin", 2}, {"energy", 2}});
}

std::vector<std::string> CircuitSpace::internal_labels() const {
  if (kind == SpaceKind::photon) return {"pol", "oam"};
  return {"spin", "energy"};
}

int oam_index(int m) {
  if (m < -4 || m > 4 || m % 2 != 0)
    throw BoundsError("OAM level " + std::to_string(m) +
                      " outside the truncated ladder {-4,-2,0,+2,+4}");
  return (m + 4) / 2;
}

int oam_level(int index) {
  if (index < 0 || index >= kOamLevels)
    throw BoundsError("OAM index " + std::to_string(index) + " out of range");
  return index * 2 - 4;
}

void validate_element(const CircuitSpace& space,
                      const CircuitElement& element) {
  bool photon = space.kind == SpaceKind::photon;
  std::visit(
      [&](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, BeamSplitter>) {
          check_mode(space, e.mode_a, "beam splitter");
          check_mode(space, e.mode_b, "beam splitter");
          if (e.mode_a == e.mode_b)
            throw BoundsError("beam splitter needs two distinct modes");
          if (!(e.transmittance >= 0.0 && e.transmittance <= 1.0))
            throw BoundsError("transmittance " +
                              std::to_string(e.transmittance) +
                              " outside [0, 1]");
        } else if constexpr (std::is_same_v<T, Mirror>) {
          check_mode(space, e.mode, "mirror");
        } else if constexpr (std::is_same_v<T, PhaseShifter>) {
          check_mode(space, e.mode, "phase shifter");
        } else if constexpr (std::is_same_v<T, HalfWavePlate>) {
          if (!photon)
            throw ConfigurationError("half-wave plate needs a photon space");
          check_mode(space, e.mode, "half-wave plate");
        } else if constexpr (std::is_same_v<T, QPlate>) {
          if (!photon)
            throw ConfigurationError("q-plate needs a photon space");
          check_mode(space, e.mode, "q-plate");
        } else if constexpr (std::is_same_v<T, SpinFlipper>) {
          if (photon)
            throw ConfigurationError("spin flipper needs a neutron space");
          check_mode(space, e.mode, "spin flipper");
        } else if constexpr (std::is_same_v<T, RFFlipper>) {
          if (photon)
            throw ConfigurationError("RF flipper needs a neutron space");
          check_mode(space, e.mode, "RF flipper");
        }
      },
      element);
}

OperatorExpr element_unitary(const CircuitSpace& space,
                             const CircuitElement& element) {
  validate_element(space, element);
  SpaceDescriptor desc = space.descriptor();
  int n = space.modes;
  OperatorExpr op(desc);

  if (const auto* bs = std::get_if<BeamSplitter>(&element)) {
    double t = std::sqrt(bs->transmittance);
    Complex r = kI * std::sqrt(1.0 - bs->transmittance);
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(n, n);
    u(bs->mode_a, bs->mode_a) = t;
    u(bs->mode_b, bs->mode_b) = t;
    u(bs->mode_a, bs->mode_b) = r;
    u(bs->mode_b, bs->mode_a) = r;
    op.add_term(1.0, {{"path", u}});
  } else if (const auto* m = std::get_if<Mirror>(&element)) {
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(n, n);
    u(m->mode, m->mode) = kI;
    op.add_term(1.0, {{"path", u}});
  } else if (const auto* ps = std::get_if<PhaseShifter>(&element)) {
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(n, n);
    u(ps->mode, ps->mode) =
        std::exp(kI * (std::numbers::pi * ps->phase_pi));
    op.add_term(1.0, {{"path", u}});
  } else if (const auto* h = std::get_if<HalfWavePlate>(&element)) {
    op.add_term(1.0, {{"path", mode_projector(n, h->mode)},
                      {"pol", swap2()}});
    op.add_term(1.0, {{"path", mode_complement(n, h->mode)}});
  } else if (const auto* q = std::get_if<QPlate>(&element)) {
    // One OAM index step is one unit of 2 in m. The raising/lowering
    // matrices drop the edge columns; run() refuses states that would land
    // there before this operator is ever applied.
    Eigen::MatrixXcd up = Eigen::MatrixXcd::Zero(kOamLevels, kOamLevels);
    Eigen::MatrixXcd down = Eigen::MatrixXcd::Zero(kOamLevels, kOamLevels);
    for (int k = 0; k + 1 < kOamLevels; ++k) {
      up(k + 1, k) = 1.0;
      down(k, k + 1) = 1.0;
    }
    op.add_term(1.0, {{"path", mode_projector(n, q->mode)},
                      {"pol", unit(2, kPolL, kPolR)},
                      {"oam", down}});
    op.add_term(1.0, {{"path", mode_projector(n, q->mode)},
                      {"pol", unit(2, kPolR, kPolL)},
                      {"oam", up}});
    op.add_term(1.0, {{"path", mode_complement(n, q->mode)}});
  } else if (const auto* sf = std::get_if<SpinFlipper>(&element)) {
    op.add_term(1.0, {{"path", mode_projector(n, sf->mode)},
                      {"spin", swap2()}});
    op.add_term(1.0, {{"path", mode_complement(n, sf->mode)}});
  } else if (const auto* rf = std::get_if<RFFlipper>(&element)) {
    Eigen::MatrixXcd pm = mode_projector(n, rf->mode);
    op.add_term(kI, {{"path", pm},
                     {"spin", unit(2, kSpinDown, kSpinUp)},
                     {"energy", unit(2, kEnergyE1, kEnergyE0)}});
    op.add_term(kI, {{"path", pm},
                     {"spin", unit(2, kSpinUp, kSpinDown)},
                     {"energy", unit(2, kEnergyE0, kEnergyE1)}});
    op.add_term(1.0, {{"path", pm},
                      {"spin", unit(2, kSpinDown, kSpinDown)},
                      {"energy", unit(2, kEnergyE0, kEnergyE0)}});
    op.add_term(1.0, {{"path", pm},
                      {"spin", unit(2, kSpinUp, kSpinUp)},
                      {"energy", unit(2, kEnergyE1, kEnergyE1)}});
    op.add_term(1.0, {{"path", mode_complement(n, rf->mode)}});
  }
  return op;
}

StateVector input_state(const Circuit& circuit) {
  if (!circuit.input)
    throw ConfigurationError("circuit has no input directive");
  const InputSpec& in = *circuit.input;
  SpaceDescriptor desc = circuit.space.descriptor();
  MultiIndex idx{in.mode};
  idx.insert(idx.end(), in.internal_indices.begin(),
             in.internal_indices.end());
  return make_basis_state(desc, idx);
}

StateVector run(const Circuit& circuit, const StateVector& input) {
  SpaceDescriptor desc = circuit.space.descriptor();
  if (!(input.space() == desc))
    throw SpaceMismatchError("input state does not live on the circuit space");
  if (!is_normalized(input))
    throw NormalizationError("circuit input must be normalized");

  StateVector state = input;
  for (std::size_t i = 0; i < circuit.elements.size(); ++i) {
    const CircuitElement& element = circuit.elements[i];
    if (const auto* q = std::get_if<QPlate>(&element)) {
      // |L,+4> and |R,-4> on the plate's mode have no in-ladder image.
      for (const auto& [idx, amp] : state.amplitudes()) {
        if (idx[0] != q->mode) continue;
        bool l_top = idx[1] == kPolL && idx[2] == kOamLevels - 1;
        bool r_bottom = idx[1] == kPolR && idx[2] == 0;
        if (l_top || r_bottom)
          throw OverflowError(
              "element " + std::to_string(i) + " (qp on mode " +
              std::to_string(q->mode) + "): OAM step leaves the ladder from m=" +
              std::to_string(oam_level(idx[2])));
      }
    }
    state = apply(element_unitary(circuit.space, element), state);
  }
  return state;
}

namespace {

const Detector& find_detector(const Circuit& circuit,
                              const std::string& name) {
  for (const Detector& d : circuit.detectors)
    if (d.name == name) return d;
  throw ConfigurationError("no detector named '" + name + "'");
}

bool detector_matches(const Detector& det, const MultiIndex& idx) {
  if (idx[0] != det.mode) return false;
  if (det.filter.empty()) return true;
  for (std::size_t i = 0; i < det.filter.size(); ++i)
    if (idx[i + 1] != det.filter[i]) return false;
  return true;
}

DetectionResult detect_one(const Detector& det, const StateVector& state) {
  DetectionResult result;
  result.name = det.name;
  result.mode = det.mode;
  StateVector projected(state.space());
  for (const auto& [idx, amp] : state.amplitudes()) {
    if (!detector_matches(det, idx)) continue;
    projected.set_amplitude(idx, amp);
    result.probability += std::norm(amp);
  }
  if (result.probability >= kConditioningFloor) {
    double scale = 1.0 / std::sqrt(result.probability);
    StateVector conditional(state.space());
    for (const auto& [idx, amp] : projected.amplitudes())
      conditional.set_amplitude(idx, amp * scale);
    result.conditional = std::move(conditional);
  }
  return result;
}

}  // namespace

std::vector<DetectionResult> detect(const Circuit& circuit,
                                    const StateVector& state) {
  SpaceDescriptor desc = circuit.space.descriptor();
  if (!(state.space() == desc))
    throw SpaceMismatchError("state does not live on the circuit space");
  std::vector<DetectionResult> results;
  results.reserve(circuit.detectors.size());
  for (const Detector& det : circuit.detectors)
    results.push_back(detect_one(det, state));
  return results;
}

StateVector detector_conditional_state(const Circuit& circuit,
                                       const StateVector& state,
                                       const std::string& name) {
  DetectionResult result = detect_one(find_detector(circuit, name), state);
  if (!result.conditional)
    throw NullPostselectionError(
        "detector '" + name + "' clicks with probability " +
            std::to_string(result.probability),
        result.probability);
  return std::move(*result.conditional);
}

ProjectorReport effective_postselection_projector(
    const Circuit& circuit, const std::string& detector_name,
    const std::optional<StateVector>& target) {
  const Detector& det = find_detector(circuit, detector_name);
  SpaceDescriptor desc = circuit.space.descriptor();
  std::size_t dim = desc.total_dimension();

  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  for (const CircuitElement& element : circuit.elements)
    u = materialize(element_unitary(circuit.space, element)) * u;

  OperatorExpr proj(desc);
  std::vector<std::pair<std::string, Eigen::MatrixXcd>> factors;
  factors.emplace_back("path", mode_projector(circuit.space.modes, det.mode));
  if (!det.filter.empty()) {
    std::vector<std::string> labels = circuit.space.internal_labels();
    for (std::size_t i = 0; i < labels.size(); ++i) {
      int d = desc.factor(desc.position_of(labels[i])).dim;
      factors.emplace_back(labels[i], unit(d, det.filter[i], det.filter[i]));
    }
  }
  proj.add_term(1.0, factors);

  ProjectorReport report;
  report.matrix = u.adjoint() * materialize(proj) * u;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(report.matrix);
  int rank = 0;
  Eigen::Index top = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) > 1e-10) ++rank;
    if (es.eigenvalues()(i) > es.eigenvalues()(top)) top = i;
  }
  report.rank = rank;

  if (rank == 1) {
    Eigen::VectorXcd v = es.eigenvectors().col(top);
    StateVector range(desc);
    for (Eigen::Index linear = 0; linear < v.size(); ++linear) {
      if (v(linear) == Complex{0.0, 0.0}) continue;
      MultiIndex idx(desc.factor_count());
      std::size_t rem = linear;
      for (std::size_t f = desc.factor_count(); f-- > 0;) {
        idx[f] = rem % desc.factor(f).dim;
        rem /= desc.factor(f).dim;
      }
      range.set_amplitude(idx, v(linear));
    }
    if (target) report.fidelity_to_target = fidelity_up_to_phase(range, *target);
    report.range = std::move(range);
  }
  return report;
}

EndToEndResult end_to_end_weak_experiment(const Circuit& prep,
                                          const OperatorExpr& observable,
                                          const MeterConfig& meter,
                                          const Circuit& postsel,
                                          const std::string& detector_name) {
  if (!(prep.space == postsel.space))
    throw SpaceMismatchError(
        "prep and post-selection circuits on different spaces");

  StateVector pre = run(prep, input_state(prep));
  pre = normalized(pre);  // absorb unitary roundoff

  ProjectorReport report =
      effective_postselection_projector(postsel, detector_name);
  if (report.rank != 1)
    throw ConfigurationError(
        "effective projector at '" + detector_name + "' has rank " +
        std::to_string(report.rank) + "; a weak experiment needs rank 1");

  PrePostEnsemble ensemble =
      PrePostEnsemble::make(std::move(pre), normalized(*report.range));
  EndToEndResult result{ensemble, weak_value(ensemble, observable),
                        simulate_weak_measurement(ensemble, observable, meter)};
  return result;
}

}  // namespace cheshire
