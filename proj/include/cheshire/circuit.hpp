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

// Interferometer circuits over path modes with particle-specific internal
// factors.
//
// Photon spaces carry polarization ("pol": L=0, R=1) and orbital angular
// momentum ("oam": m in {-4,-2,0,+2,+4} mapped to indices 0..4; the +-4
// levels are a guard band so that a quarter-wave plate stepping outside the
// ladder is a detectable error, not silent aliasing). Neutron spaces carry
// spin ("spin": up=0, down=1) and a two-level energy ladder ("energy": E0=0,
// E1=1 where E1 is the level one RF quantum below E0).
//
// Element conventions:
//   BeamSplitter  |a> -> sqrt(t)|a> + i sqrt(1-t)|b>   (symmetric i on
//                 reflection; the transmitted arm keeps its mode index)
//   Mirror        phase i on one mode
//   PhaseShifter  phase e^{i pi c} on one mode, c stored in pi units
//   HalfWavePlate swaps L <-> R on one mode
//   QPlate        |R,m> -> |L,m-2>, |L,m> -> |R,m+2> on one mode
//   SpinFlipper   swaps up <-> down on one mode
//   RFFlipper     |up,E0> -> i|down,E1> and back, also with phase i; the two
//                 off-resonant internal states are untouched
//   Detector      projector on one mode, optionally filtered to a single
//                 internal basis state (making it rank 1)

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cheshire/hilbert.hpp"
#include "cheshire/pointer.hpp"
#include "cheshire/weakvalue.hpp"

namespace cheshire {

enum class SpaceKind { photon, neutron };

struct CircuitSpace {
  SpaceKind kind = SpaceKind::photon;
  int modes = 0;

  SpaceDescriptor descriptor() const;
  // Labels of the two internal factors, in descriptor order.
  std::vector<std::string> internal_labels() const;

  bool operator==(const CircuitSpace&) const = default;
};

// OAM level m <-> factor index.
int oam_index(int m);
int oam_level(int index);

inline constexpr int kPolL = 0;
inline constexpr int kPolR = 1;
inline constexpr int kSpinUp = 0;
inline constexpr int kSpinDown = 1;
inline constexpr int kEnergyE0 = 0;
inline constexpr int kEnergyE1 = 1;

struct BeamSplitter {
  int mode_a = 0;
  int mode_b = 0;
  double transmittance = 0.5;
  bool operator==(const BeamSplitter&) const = default;
};

struct Mirror {
  int mode = 0;
  bool operator==(const Mirror&) const = default;
};

struct PhaseShifter {
  int mode = 0;
  double phase_pi = 0.0;  // phase in units of pi
  bool operator==(const PhaseShifter&) const = default;
};

struct HalfWavePlate {
  int mode = 0;
  bool operator==(const HalfWavePlate&) const = default;
};

struct QPlate {
  int mode = 0;
  bool operator==(const QPlate&) const = default;
};

struct SpinFlipper {
  int mode = 0;
  bool operator==(const SpinFlipper&) const = default;
};

struct RFFlipper {
  int mode = 0;
  bool operator==(const RFFlipper&) const = default;
};

using CircuitElement = std::variant<BeamSplitter, Mirror, PhaseShifter,
                                    HalfWavePlate, QPlate, SpinFlipper,
                                    RFFlipper>;

struct Detector {
  int mode = 0;
  std::string name;
  // Basis indices for every internal factor, in descriptor order; empty
  // means unfiltered (identity on internals).
  std::vector<int> filter;
  bool operator==(const Detector&) const = default;
};

struct InputSpec {
  int mode = 0;
  std::vector<int> internal_indices;  // one per internal factor
  bool operator==(const InputSpec&) const = default;
};

struct Circuit {
  CircuitSpace space;
  std::optional<InputSpec> input;
  std::vector<CircuitElement> elements;
  std::vector<Detector> detectors;
  bool operator==(const Circuit&) const = default;
};

// Structural validity: mode bounds, transmittance range, element/space kind
// agreement. Throws BoundsError/ConfigurationError.
void validate_element(const CircuitSpace& space, const CircuitElement& element);

OperatorExpr element_unitary(const CircuitSpace& space,
                             const CircuitElement& element);

// Basis state from the circuit's input directive.
StateVector input_state(const Circuit& circuit);

// Applies every element in order. The input must be normalized. A QPlate
// facing an amplitude at the edge of the OAM ladder raises OverflowError
// naming the element index.
StateVector run(const Circuit& circuit, const StateVector& input);

struct DetectionResult {
  std::string name;
  int mode = 0;
  double probability = 0.0;
  // Present when probability is above the conditioning floor.
  std::optional<StateVector> conditional;
};

// Click probabilities for every detector, evaluated on a run() output.
std::vector<DetectionResult> detect(const Circuit& circuit,
                                    const StateVector& state);

// Conditional state for one detector; explicitly conditioning on a
// zero-probability outcome raises NullPostselectionError.
StateVector detector_conditional_state(const Circuit& circuit,
                                       const StateVector& state,
                                       const std::string& name);

struct ProjectorReport {
  int rank = 0;
  Eigen::MatrixXcd matrix;
  // Present when rank is 1.
  std::optional<StateVector> range;
  // Present when rank is 1 and a target was supplied.
  std::optional<double> fidelity_to_target;
};

// M = U^dag (|mode><mode| x filter) U for the named detector: the projector
// the circuit effectively post-selects on, pulled back to its input.
ProjectorReport effective_postselection_projector(
    const Circuit& circuit, const std::string& detector_name,
    const std::optional<StateVector>& target = std::nullopt);

struct EndToEndResult {
  PrePostEnsemble ensemble;
  Complex exact_weak_value;
  MeasurementRecord record;
};

// Prep output becomes the pre-selection; the post-selection is the range of
// the postsel circuit's effective projector at the named detector, which must
// have rank 1 (ConfigurationError otherwise).
EndToEndResult end_to_end_weak_experiment(const Circuit& prep,
                                          const OperatorExpr& observable,
                                          const MeterConfig& meter,
                                          const Circuit& postsel,
                                          const std::string& detector_name);

// Line-based circuit text. Errors carry 1-based line and column.
Circuit parse_circuit(const std::string& text);
Circuit parse_circuit_file(const std::string& path);

// Canonical text form; parse(serialize(c)) is structurally identical to c.
std::string serialize_circuit(const Circuit& circuit);

}  // namespace cheshire
