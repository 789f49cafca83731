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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <type_traits>

#include "cheshire/circuit.hpp"

namespace cheshire {

namespace {

struct Token {
  std::string text;
  std::size_t line = 0;
  std::size_t col = 0;  // 1-based
};

[[noreturn]] void fail(const Token& at, const std::string& message) {
  throw ParseError("line " + std::to_string(at.line) + ", column " +
                       std::to_string(at.col) + ": " + message,
                   at.line, at.col);
}

std::vector<std::vector<Token>> tokenize(const std::string& text) {
  std::vector<std::vector<Token>> lines;
  std::istringstream stream(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(stream, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos)
      raw.erase(hash);
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < raw.size()) {
      if (std::isspace(static_cast<unsigned char>(raw[i]))) {
        ++i;
        continue;
      }
      std::size_t start = i;
      while (i < raw.size() &&
             !std::isspace(static_cast<unsigned char>(raw[i])))
        ++i;
      tokens.push_back({raw.substr(start, i - start), lineno, start + 1});
    }
    if (!tokens.empty()) lines.push_back(std::move(tokens));
  }
  return lines;
}

int parse_int(const Token& tok, const std::string& text) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(text, &used);
  } catch (const std::exception&) {
    fail(tok, "expected an integer, got '" + text + "'");
  }
  if (used != text.size())
    fail(tok, "expected an integer, got '" + text + "'");
  return value;
}

double parse_number(const Token& tok, const std::string& text) {
  auto parse_plain = [&](const std::string& s) {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(s, &used);
    } catch (const std::exception&) {
      fail(tok, "expected a number, got '" + s + "'");
    }
    if (used != s.size())
      fail(tok, "expected a number, got '" + s + "'");
    return value;
  };
  if (auto slash = text.find('/'); slash != std::string::npos) {
    double num = parse_plain(text.substr(0, slash));
    double den = parse_plain(text.substr(slash + 1));
    if (den == 0.0) fail(tok, "zero denominator in '" + text + "'");
    return num / den;
  }
  return parse_plain(text);
}

// Value of a key=value token; the key must match.
std::string expect_kv(const Token& tok, const std::string& key) {
  auto eq = tok.text.find('=');
  if (eq == std::string::npos || tok.text.substr(0, eq) != key)
    fail(tok, "expected " + key + "=..., got '" + tok.text + "'");
  return tok.text.substr(eq + 1);
}

double parse_phase_pi(const Token& tok) {
  std::string value = expect_kv(tok, "phase");
  if (value.size() < 2 || value.substr(value.size() - 2) != "pi")
    fail(tok, "phase must end in 'pi', got '" + value + "'");
  std::string coef = value.substr(0, value.size() - 2);
  if (coef.empty() || coef == "+") return 1.0;
  if (coef == "-") return -1.0;
  return parse_number(tok, coef);
}

int parse_pol(const Token& tok, const std::string& v) {
  if (v == "L") return kPolL;
  if (v == "R") return kPolR;
  fail(tok, "polarization must be L or R, got '" + v + "'");
}

int parse_oam(const Token& tok, const std::string& v) {
  int m = parse_int(tok, v);
  if (m < -4 || m > 4 || m % 2 != 0)
    fail(tok, "OAM level must be one of -4,-2,0,+2,+4, got '" + v + "'");
  return oam_index(m);
}

int parse_spin(const Token& tok, const std::string& v) {
  if (v == "up") return kSpinUp;
  if (v == "down") return kSpinDown;
  fail(tok, "spin must be up or down, got '" + v + "'");
}

int parse_energy(const Token& tok, const std::string& v) {
  if (v == "E0") return kEnergyE0;
  if (v == "E1") return kEnergyE1;
  fail(tok, "energy level must be E0 or E1, got '" + v + "'");
}

int parse_internal_value(const Token& tok, const std::string& label,
                         const std::string& v) {
  if (label == "pol") return parse_pol(tok, v);
  if (label == "oam") return parse_oam(tok, v);
  if (label == "spin") return parse_spin(tok, v);
  return parse_energy(tok, v);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v + 0.0);
  return buf;
}

std::string oam_token(int index) {
  int m = oam_level(index);
  if (m > 0) return "+" + std::to_string(m);
  return std::to_string(m);
}

std::string internal_token(const std::string& label, int index) {
  if (label == "pol") return index == kPolL ? "L" : "R";
  if (label == "oam") return oam_token(index);
  if (label == "spin") return index == kSpinUp ? "up" : "down";
  return index == kEnergyE0 ? "E0" : "E1";
}

}  // namespace

Circuit parse_circuit(const std::string& text) {
  std::vector<std::vector<Token>> lines = tokenize(text);
  if (lines.empty())
    throw ParseError("line 1, column 1: empty circuit text", 1, 1);

  Circuit circuit;
  bool have_space = false;

  auto expect_count = [&](const std::vector<Token>& toks, std::size_t n) {
    if (toks.size() != n)
      fail(toks[0], "'" + toks[0].text + "' takes " + std::to_string(n - 1) +
                        " argument(s), got " + std::to_string(toks.size() - 1));
  };
  auto check_space_declared = [&](const Token& tok) {
    if (!have_space) fail(tok, "the space directive must come first");
  };
  auto parse_mode = [&](const Token& tok) {
    return parse_int(tok, tok.text);
  };
  auto add_element = [&](const Token& kw, CircuitElement element) {
    try {
      validate_element(circuit.space, element);
    } catch (const Error& e) {
      fail(kw, e.what());
    }
    circuit.elements.push_back(std::move(element));
  };

  for (const auto& toks : lines) {
    const Token& kw = toks[0];
    const std::string& word = kw.text;

    if (word == "space") {
      if (have_space) fail(kw, "duplicate space directive");
      expect_count(toks, 3);
      if (toks[1].text == "photon")
        circuit.space.kind = SpaceKind::photon;
      else if (toks[1].text == "neutron")
        circuit.space.kind = SpaceKind::neutron;
      else
        fail(toks[1], "space kind must be photon or neutron, got '" +
                          toks[1].text + "'");
      circuit.space.modes =
          parse_int(toks[2], expect_kv(toks[2], "modes"));
      if (circuit.space.modes < 1)
        fail(toks[2], "mode count must be at least 1");
      have_space = true;
    } else if (word == "input") {
      check_space_declared(kw);
      if (circuit.input) fail(kw, "duplicate input directive");
      expect_count(toks, 4);
      InputSpec in;
      in.mode = parse_int(toks[1], expect_kv(toks[1], "mode"));
      if (in.mode < 0 || in.mode >= circuit.space.modes)
        fail(toks[1], "input mode " + std::to_string(in.mode) +
                          " out of range");
      std::vector<std::string> labels = circuit.space.internal_labels();
      in.internal_indices.assign(labels.size(), -1);
      for (std::size_t t = 2; t < toks.size(); ++t) {
        auto eq = toks[t].text.find('=');
        if (eq == std::string::npos)
          fail(toks[t], "expected <factor>=<level>, got '" + toks[t].text +
                            "'");
        std::string label = toks[t].text.substr(0, eq);
        std::string value = toks[t].text.substr(eq + 1);
        auto pos = std::find(labels.begin(), labels.end(), label);
        if (pos == labels.end())
          fail(toks[t], "unknown internal factor '" + label + "'");
        std::size_t slot = pos - labels.begin();
        if (in.internal_indices[slot] != -1)
          fail(toks[t], "duplicate assignment for '" + label + "'");
        in.internal_indices[slot] =
            parse_internal_value(toks[t], label, value);
      }
      for (std::size_t slot = 0; slot < labels.size(); ++slot)
        if (in.internal_indices[slot] == -1)
          fail(kw, "input is missing '" + labels[slot] + "'");
      circuit.input = std::move(in);
    } else if (word == "bs") {
      check_space_declared(kw);
      expect_count(toks, 4);
      BeamSplitter bs;
      bs.mode_a = parse_mode(toks[1]);
      bs.mode_b = parse_mode(toks[2]);
      bs.transmittance = parse_number(toks[3], expect_kv(toks[3], "t"));
      add_element(kw, bs);
    } else if (word == "ps") {
      check_space_declared(kw);
      expect_count(toks, 3);
      PhaseShifter ps;
      ps.mode = parse_mode(toks[1]);
      ps.phase_pi = parse_phase_pi(toks[2]);
      add_element(kw, ps);
    } else if (word == "mirror" || word == "hwp" || word == "qp" ||
               word == "sf" || word == "rf") {
      check_space_declared(kw);
      expect_count(toks, 2);
      int mode = parse_mode(toks[1]);
      if (word == "mirror")
        add_element(kw, Mirror{mode});
      else if (word == "hwp")
        add_element(kw, HalfWavePlate{mode});
      else if (word == "qp")
        add_element(kw, QPlate{mode});
      else if (word == "sf")
        add_element(kw, SpinFlipper{mode});
      else
        add_element(kw, RFFlipper{mode});
    } else if (word == "detector") {
      check_space_declared(kw);
      if (toks.size() != 3 && toks.size() != 4)
        fail(kw, "'detector' takes <mode> name=<id> [filter=...]");
      Detector det;
      det.mode = parse_mode(toks[1]);
      if (det.mode < 0 || det.mode >= circuit.space.modes)
        fail(toks[1], "detector mode " + std::to_string(det.mode) +
                          " out of range");
      det.name = expect_kv(toks[2], "name");
      if (det.name.empty()) fail(toks[2], "detector name must be non-empty");
      for (const Detector& prev : circuit.detectors) {
        if (prev.name == det.name)
          fail(toks[2], "duplicate detector name '" + det.name + "'");
        if (prev.mode == det.mode)
          fail(toks[1], "mode " + std::to_string(det.mode) +
                            " already has a detector");
      }
      if (toks.size() == 4) {
        std::string spec = expect_kv(toks[3], "filter");
        std::vector<std::string> labels = circuit.space.internal_labels();
        det.filter.assign(labels.size(), -1);
        std::size_t start = 0;
        while (start <= spec.size()) {
          std::size_t comma = spec.find(',', start);
          std::string part = spec.substr(
              start, comma == std::string::npos ? std::string::npos
                                                : comma - start);
          auto colon = part.find(':');
          if (colon == std::string::npos)
            fail(toks[3], "filter entries are <factor>:<level>, got '" +
                              part + "'");
          std::string label = part.substr(0, colon);
          std::string value = part.substr(colon + 1);
          auto pos = std::find(labels.begin(), labels.end(), label);
          if (pos == labels.end())
            fail(toks[3], "unknown internal factor '" + label + "'");
          std::size_t slot = pos - labels.begin();
          if (det.filter[slot] != -1)
            fail(toks[3], "duplicate filter entry for '" + label + "'");
          det.filter[slot] = parse_internal_value(toks[3], label, value);
          if (comma == std::string::npos) break;
          start = comma + 1;
        }
        for (std::size_t slot = 0; slot < labels.size(); ++slot)
          if (det.filter[slot] == -1)
            fail(toks[3], "filter is missing '" + labels[slot] +
                              "' (a filter selects one full internal state)");
      }
      circuit.detectors.push_back(std::move(det));
    } else {
      fail(kw, "unknown directive '" + word + "'");
    }
  }

  if (!have_space)
    throw ParseError("line 1, column 1: missing space directive", 1, 1);
  return circuit;
}

Circuit parse_circuit_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open circuit file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_circuit(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.line, e.column);
  }
}

std::string serialize_circuit(const Circuit& circuit) {
  std::ostringstream out;
  out << "space "
      << (circuit.space.kind == SpaceKind::photon ? "photon" : "neutron")
      << " modes=" << circuit.space.modes << "\n";

  std::vector<std::string> labels = circuit.space.internal_labels();
  if (circuit.input) {
    out << "input mode=" << circuit.input->mode;
    for (std::size_t i = 0; i < labels.size(); ++i)
      out << ' ' << labels[i] << '='
          << internal_token(labels[i], circuit.input->internal_indices[i]);
    out << "\n";
  }

  for (const CircuitElement& element : circuit.elements) {
    std::visit(
        [&](const auto& e) {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, BeamSplitter>) {
            out << "bs " << e.mode_a << ' ' << e.mode_b
                << " t=" << format_double(e.transmittance);
          } else if constexpr (std::is_same_v<T, Mirror>) {
            out << "mirror " << e.mode;
          } else if constexpr (std::is_same_v<T, PhaseShifter>) {
            out << "ps " << e.mode << " phase=" << format_double(e.phase_pi)
                << "pi";
          } else if constexpr (std::is_same_v<T, HalfWavePlate>) {
            out << "hwp " << e.mode;
          } else if constexpr (std::is_same_v<T, QPlate>) {
            out << "qp " << e.mode;
          } else if constexpr (std::is_same_v<T, SpinFlipper>) {
            out << "sf " << e.mode;
          } else if constexpr (std::is_same_v<T, RFFlipper>) {
            out << "rf " << e.mode;
          }
        },
        element);
    out << "\n";
  }

  for (const Detector& det : circuit.detectors) {
    out << "detector " << det.mode << " name=" << det.name;
    if (!det.filter.empty()) {
      out << " filter=";
      for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i) out << ',';
        out << labels[i] << ':' << internal_token(labels[i], det.filter[i]);
      }
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace cheshire
