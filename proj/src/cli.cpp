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

#include "cheshire/cli.hpp"

#include <algorithm>
#include <boost/program_options.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>
#include <ostream>

#include "cheshire/circuit.hpp"
#include "cheshire/json_io.hpp"
#include "cheshire/scenarios.hpp"

namespace cheshire {

namespace {

namespace po = boost::program_options;
using json = nlohmann::ordered_json;

constexpr char kUsage[] =
    "usage: cheshire <command> [options]\n"
    "\n"
    "commands:\n"
    "  scenario-list              list built-in pre/post-selected scenarios\n"
    "  scenario-run <name>        recompute and check a scenario's weak-value "
    "table\n"
    "  circuit-verify <file>      compare a circuit against a named reference "
    "state\n"
    "  pointer-sweep              finite-coupling pointer readout across "
    "couplings\n"
    "  end-to-end                 prepare, couple, post-select and read out\n"
    "\n"
    "run 'cheshire <command> --help' for the command's options.\n"
    "QCC_TOLERANCE overrides the default 1e-12 comparison tolerance;\n"
    "an explicit --tolerance flag overrides both.\n";

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v + 0.0);
  return buf;
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v + 0.0);
  return buf;
}

// Code points, not bytes; every label character is single-width.
std::size_t utf8_width(const std::string& s) {
  std::size_t w = 0;
  for (unsigned char c : s)
    if ((c & 0xC0) != 0x80) ++w;
  return w;
}

std::string pad_to(const std::string& s, std::size_t width) {
  std::string out = s;
  for (std::size_t w = utf8_width(s); w < width; ++w) out += ' ';
  return out;
}

int parse_int_strict(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(text, &used);
  } catch (const std::exception&) {
    throw BoundsError(what + " is not an integer: '" + text + "'");
  }
  if (used != text.size())
    throw BoundsError(what + " is not an integer: '" + text + "'");
  return value;
}

double parse_double_strict(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw Error(what + " is not a number: '" + text + "'");
  }
  if (used != text.size())
    throw Error(what + " is not a number: '" + text + "'");
  return value;
}

double effective_tolerance(const po::variables_map& vm) {
  if (vm.count("tolerance")) return vm["tolerance"].as<double>();
  if (const char* env = std::getenv("QCC_TOLERANCE"))
    return parse_double_strict(env, "QCC_TOLERANCE");
  return 1e-12;
}

OutputFormat parse_format(const std::string& name) {
  if (name == "table") return OutputFormat::table;
  if (name == "json") return OutputFormat::json;
  if (name == "csv") return OutputFormat::csv;
  throw po::error("unknown format '" + name + "' (use table, json or csv)");
}

Scenario build_scenario(const std::string& name, const po::variables_map& vm) {
  auto need = [&](const char* flag) {
    if (!vm.count(flag))
      throw po::error("scenario '" + name + "' needs --" + flag);
    return vm[flag].as<int>();
  };
  if (name == "original_cheshire") return original_cheshire();
  if (name == "two_property_three_path") return two_property_three_path();
  if (name == "qutrit_two_property") return qutrit_two_property();
  if (name == "n_path") return n_path_dichotomic(need("n"));
  if (name == "qudit") return qudit_chain(need("d"));
  throw BoundsError("unknown scenario '" + name +
                    "'; run 'cheshire scenario-list'");
}

// Row labels down-converted to plain ASCII flag values: parentheses, carets
// and the trailing _w dropped, then pi / sx / j substituted.
std::string ascii_alias(const std::string& label) {
  std::string s;
  for (char c : label)
    if (c != '(' && c != ')' && c != '^') s += c;
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "_w") == 0)
    s.erase(s.size() - 2);
  auto replace_all = [](std::string& str, const std::string& from,
                        const std::string& to) {
    for (std::size_t pos = 0; (pos = str.find(from, pos)) != std::string::npos;
         pos += to.size())
      str.replace(pos, from.size(), to);
  };
  replace_all(s, "Π", "pi");
  replace_all(s, "σx", "sx");
  replace_all(s, "J", "j");
  return s;
}

// Accepts a row label, its ASCII alias, or a constructive token.
OperatorExpr scenario_observable(const Scenario& s, const std::string& token) {
  if (token == "identity")
    return OperatorExpr::identity(s.ensemble.pre.space());
  for (const auto& [label, op] : s.observables)
    if (label == token || ascii_alias(label) == token) return op;
  try {
    return parse_observable(s.ensemble.pre.space(), token);
  } catch (const Error&) {
  }
  std::string avail;
  for (const auto& [label, op] : s.observables) {
    if (!avail.empty()) avail += ", ";
    avail += ascii_alias(label);
  }
  throw BoundsError("unknown observable '" + token +
                    "'; scenario rows: " + avail);
}

// The four named reference states the circuit fixtures prepare or
// post-select on, each a three-mode single-excitation superposition.
StateVector reference_state(const CircuitSpace& space,
                            const std::string& name) {
  bool photon = name == "eq28" || name == "eq33";
  bool neutron = name == "eq35" || name == "eq36";
  if (!photon && !neutron)
    throw BoundsError("unknown reference state '" + name +
                      "'; use eq28, eq33, eq35 or eq36");
  if (space.modes != 3)
    throw SpaceMismatchError("reference state '" + name +
                             "' needs 3 modes, circuit has " +
                             std::to_string(space.modes));
  if (photon != (space.kind == SpaceKind::photon))
    throw SpaceMismatchError("reference state '" + name + "' lives on a " +
                             (photon ? "photon" : "neutron") + " space");
  SpaceDescriptor desc = space.descriptor();
  double r = 1.0 / std::sqrt(3.0);
  auto b = [&](int mode, int i1, int i2) {
    return make_basis_state(desc, {mode, i1, i2});
  };
  if (name == "eq28")
    return superpose({{r, b(0, kPolR, oam_index(+2))},
                      {r, b(1, kPolL, oam_index(+2))},
                      {r, b(2, kPolR, oam_index(-2))}});
  if (name == "eq33")
    return superpose({{r, b(0, kPolR, oam_index(+2))},
                      {r, b(1, kPolR, oam_index(+2))},
                      {r, b(2, kPolR, oam_index(+2))}});
  if (name == "eq35")
    return superpose({{r, b(0, kSpinUp, kEnergyE0)},
                      {r, b(1, kSpinDown, kEnergyE0)},
                      {r, b(2, kSpinUp, kEnergyE1)}});
  return superpose({{r, b(0, kSpinUp, kEnergyE0)},
                    {r, b(1, kSpinUp, kEnergyE0)},
                    {r, b(2, kSpinUp, kEnergyE0)}});
}

std::vector<double> parse_g_list(const std::string& text) {
  std::vector<double> gs;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    std::string part = text.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    gs.push_back(parse_double_strict(part, "coupling"));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  for (double g : gs)
    if (!(g > 0.0)) throw Error("couplings must be positive, got " + fmt17(g));
  std::sort(gs.begin(), gs.end(), std::greater<double>());
  gs.erase(std::unique(gs.begin(), gs.end()), gs.end());
  return gs;
}

json complex_json(Complex z) {
  return json{{"re", z.real()}, {"im", z.imag()}};
}

int cmd_scenario_list(const std::vector<std::string>& args, std::ostream& out) {
  for (const std::string& a : args)
    if (a != "--help" && a != "-h")
      throw po::error("scenario-list takes no arguments");
  out << "original_cheshire\n"
         "two_property_three_path\n"
         "n_path --n <2..20>\n"
         "qutrit_two_property\n"
         "qudit --d <2..16>\n";
  return 0;
}

int cmd_scenario_run(const std::vector<std::string>& args, std::ostream& out,
                     std::ostream& err) {
  po::options_description desc("scenario-run options");
  desc.add_options()                                              //
      ("help,h", "show this help")                                //
      ("name", po::value<std::string>(), "scenario name")         //
      ("n", po::value<int>(), "path count for n_path")            //
      ("d", po::value<int>(), "level count for qudit")            //
      ("format", po::value<std::string>()->default_value("table"),
       "table, json or csv")  //
      ("tolerance", po::value<double>(), "comparison tolerance");
  po::positional_options_description pos;
  pos.add("name", 1);
  po::variables_map vm;
  po::store(po::command_line_parser(args).options(desc).positional(pos).run(),
            vm);
  po::notify(vm);
  if (vm.count("help")) {
    out << "usage: cheshire scenario-run <name> [options]\n\n" << desc;
    return 0;
  }
  if (!vm.count("name")) throw po::error("scenario-run needs a scenario name");

  Scenario s = build_scenario(vm["name"].as<std::string>(), vm);
  double tol = effective_tolerance(vm);
  OutputFormat format = parse_format(vm["format"].as<std::string>());
  VerifyReport report = verify(s, tol);
  double prob = postselection_probability(s.ensemble);

  switch (format) {
    case OutputFormat::table:
      out << "scenario: " << s.name << "\n";
      out << "postselection probability: " << fmt6(prob) << "\n\n";
      out << render_table(report.table, OutputFormat::table);
      out << "\n"
          << (report.pass ? "PASS" : "FAIL") << " (tolerance " << fmt6(tol)
          << ")\n";
      break;
    case OutputFormat::json: {
      json mismatches = json::array();
      for (const Mismatch& m : report.mismatches)
        mismatches.push_back({{"label", m.label},
                              {"computed", complex_json(m.computed)},
                              {"expected", complex_json(m.expected)}});
      json doc{{"name", s.name},
               {"pass", report.pass},
               {"tolerance", tol},
               {"postselection_probability", prob},
               {"rows", table_to_json(report.table)},
               {"mismatches", std::move(mismatches)}};
      out << doc.dump(2) << "\n";
      break;
    }
    case OutputFormat::csv:
      out << table_to_csv(report.table);
      break;
  }
  if (!report.pass)
    for (const Mismatch& m : report.mismatches)
      err << "mismatch " << m.label << ": computed "
          << render_complex(m.computed) << ", expected "
          << render_complex(m.expected) << "\n";
  return report.pass ? 0 : 1;
}

int cmd_circuit_verify(const std::vector<std::string>& args, std::ostream& out,
                       std::ostream& err) {
  po::options_description desc("circuit-verify options");
  desc.add_options()                                          //
      ("help,h", "show this help")                            //
      ("file", po::value<std::string>(), "circuit file")      //
      ("expect", po::value<std::string>(),
       "reference state: eq28, eq33, eq35 or eq36")           //
      ("detector", po::value<std::string>(),
       "check this detector's effective projector instead of the "
       "prepared state (default D3 when the file has detectors)")  //
      ("tolerance", po::value<double>(), "comparison tolerance");
  po::positional_options_description pos;
  pos.add("file", 1);
  po::variables_map vm;
  po::store(po::command_line_parser(args).options(desc).positional(pos).run(),
            vm);
  po::notify(vm);
  if (vm.count("help")) {
    out << "usage: cheshire circuit-verify <file> --expect <name> "
           "[options]\n\n"
        << desc;
    return 0;
  }
  if (!vm.count("file")) throw po::error("circuit-verify needs a circuit file");
  if (!vm.count("expect")) throw po::error("circuit-verify needs --expect");

  Circuit circuit = parse_circuit_file(vm["file"].as<std::string>());
  StateVector target =
      reference_state(circuit.space, vm["expect"].as<std::string>());
  double tol = effective_tolerance(vm);

  bool pass = false;
  if (vm.count("detector") || !circuit.detectors.empty()) {
    std::string detector = vm.count("detector")
                               ? vm["detector"].as<std::string>()
                               : std::string("D3");
    ProjectorReport report =
        effective_postselection_projector(circuit, detector, target);
    out << "mode: postselection projector at " << detector << "\n";
    out << "rank: " << report.rank << "\n";
    if (report.rank == 1) {
      out << "fidelity: " << fmt17(*report.fidelity_to_target) << "\n";
      pass = *report.fidelity_to_target >= 1.0 - tol;
    } else {
      err << "projector rank is " << report.rank
          << "; cannot compare against a single state\n";
    }
  } else {
    StateVector got = normalized(run(circuit, input_state(circuit)));
    double fid = fidelity_up_to_phase(got, target);
    out << "mode: prepared state\n";
    out << "fidelity: " << fmt17(fid) << "\n";
    pass = fid >= 1.0 - tol;
  }
  out << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? 0 : 1;
}

int cmd_pointer_sweep(const std::vector<std::string>& args, std::ostream& out,
                      std::ostream& err) {
  po::options_description desc("pointer-sweep options");
  desc.add_options()                                             //
      ("help,h", "show this help")                               //
      ("scenario", po::value<std::string>(), "scenario name")    //
      ("n", po::value<int>(), "path count for n_path")           //
      ("d", po::value<int>(), "level count for qudit")           //
      ("observable", po::value<std::string>(),
       "row label, its ASCII alias (e.g. pi2sxp), or a constructive token "
       "like pi2*sx:pol")                                        //
      ("g", po::value<std::string>(),
       "comma-separated couplings, e.g. 0.1,0.05,0.025")         //
      ("sigma", po::value<double>()->default_value(1.0),
       "pointer width")                                          //
      ("grid-points", po::value<int>()->default_value(1024),
       "grid size (power of two)")                               //
      ("format", po::value<std::string>()->default_value("table"),
       "table, json or csv")                                     //
      ("wavefunction-csv", po::value<std::string>(),
       "write the smallest-coupling pointer density to this file");
  po::variables_map vm;
  po::store(po::command_line_parser(args).options(desc).run(), vm);
  po::notify(vm);
  if (vm.count("help")) {
    out << "usage: cheshire pointer-sweep --scenario <name> --observable "
           "<token> --g <list> [options]\n\n"
        << desc;
    return 0;
  }
  for (const char* flag : {"scenario", "observable", "g"})
    if (!vm.count(flag))
      throw po::error(std::string("pointer-sweep needs --") + flag);

  Scenario s = build_scenario(vm["scenario"].as<std::string>(), vm);
  std::string token = vm["observable"].as<std::string>();
  OperatorExpr obs = scenario_observable(s, token);
  std::vector<double> gs = parse_g_list(vm["g"].as<std::string>());
  OutputFormat format = parse_format(vm["format"].as<std::string>());

  MeterConfig base = MeterConfig::standard(gs.front(),
                                           vm["sigma"].as<double>());
  base.grid_points = vm["grid-points"].as<int>();
  std::vector<SweepPoint> points = convergence_sweep(s.ensemble, obs, base, gs);
  Complex exact = weak_value(s.ensemble, obs);

  switch (format) {
    case OutputFormat::table: {
      out << "scenario: " << s.name << "\n";
      out << "observable: " << token << "\n";
      out << "exact weak value: " << render_complex(exact) << "\n\n";
      out << pad_to("g", 14) << pad_to("inferred", 26) << pad_to("error", 14)
          << "success probability\n";
      for (const SweepPoint& p : points)
        out << pad_to(fmt6(p.g), 14)
            << pad_to(render_complex(p.record.inferred_weak_value), 26)
            << pad_to(fmt6(p.error), 14)
            << fmt6(p.record.success_probability) << "\n";
      break;
    }
    case OutputFormat::json: {
      json pts = json::array();
      for (const SweepPoint& p : points) {
        json rec = record_to_json(p.record);
        rec["error"] = p.error;
        pts.push_back(std::move(rec));
      }
      json doc{{"scenario", s.name},
               {"observable", token},
               {"exact", complex_json(exact)},
               {"points", std::move(pts)}};
      out << doc.dump(2) << "\n";
      break;
    }
    case OutputFormat::csv:
      out << "g,re,im,error,success_probability\n";
      for (const SweepPoint& p : points)
        out << fmt17(p.g) << ','
            << fmt17(p.record.inferred_weak_value.real()) << ','
            << fmt17(p.record.inferred_weak_value.imag()) << ','
            << fmt17(p.error) << ',' << fmt17(p.record.success_probability)
            << "\n";
      break;
  }

  if (vm.count("wavefunction-csv")) {
    std::string path = vm["wavefunction-csv"].as<std::string>();
    std::ofstream file(path);
    if (!file) throw Error("cannot open '" + path + "' for writing");
    file << record_density_csv(points.back().record);
    err << "wrote " << path << "\n";
  }
  return 0;
}

int cmd_end_to_end(const std::vector<std::string>& args, std::ostream& out) {
  po::options_description desc("end-to-end options");
  desc.add_options()                                                    //
      ("help,h", "show this help")                                      //
      ("prep", po::value<std::string>(), "preparation circuit file")    //
      ("postsel", po::value<std::string>(),
       "post-selection circuit file")                                   //
      ("detector", po::value<std::string>()->default_value("D3"),
       "post-selecting detector name")                                  //
      ("observable", po::value<std::string>(),
       "constructive token, e.g. pi1, pi2*sx:pol, pi3*sx:oam")          //
      ("g", po::value<double>()->default_value(0.01), "coupling")       //
      ("sigma", po::value<double>()->default_value(1.0),
       "pointer width")                                                 //
      ("grid-points", po::value<int>()->default_value(1024),
       "grid size (power of two)")                                      //
      ("format", po::value<std::string>()->default_value("table"),
       "table, json or csv");
  po::variables_map vm;
  po::store(po::command_line_parser(args).options(desc).run(), vm);
  po::notify(vm);
  if (vm.count("help")) {
    out << "usage: cheshire end-to-end --prep <file> --postsel <file> "
           "--observable <token> [options]\n\n"
        << desc;
    return 0;
  }
  for (const char* flag : {"prep", "postsel", "observable"})
    if (!vm.count(flag))
      throw po::error(std::string("end-to-end needs --") + flag);

  Circuit prep = parse_circuit_file(vm["prep"].as<std::string>());
  Circuit postsel = parse_circuit_file(vm["postsel"].as<std::string>());
  std::string token = vm["observable"].as<std::string>();
  OperatorExpr obs = parse_observable(prep.space.descriptor(), token);
  MeterConfig meter =
      MeterConfig::standard(vm["g"].as<double>(), vm["sigma"].as<double>());
  meter.grid_points = vm["grid-points"].as<int>();
  OutputFormat format = parse_format(vm["format"].as<std::string>());

  EndToEndResult result = end_to_end_weak_experiment(
      prep, obs, meter, postsel, vm["detector"].as<std::string>());
  double error =
      std::abs(result.record.inferred_weak_value - result.exact_weak_value);

  switch (format) {
    case OutputFormat::table:
      out << "observable: " << token << "\n";
      out << "exact weak value: " << render_complex(result.exact_weak_value)
          << "\n";
      out << "inferred weak value: "
          << render_complex(result.record.inferred_weak_value) << "\n";
      out << "error: " << fmt6(error) << "\n";
      out << "postselection probability: "
          << fmt6(postselection_probability(result.ensemble)) << "\n";
      out << "success probability: "
          << fmt6(result.record.success_probability) << "\n";
      break;
    case OutputFormat::json: {
      json doc{{"observable", token},
               {"exact", complex_json(result.exact_weak_value)},
               {"error", error},
               {"postselection_probability",
                postselection_probability(result.ensemble)},
               {"record", record_to_json(result.record)}};
      out << doc.dump(2) << "\n";
      break;
    }
    case OutputFormat::csv:
      out << record_density_csv(result.record);
      break;
  }
  return 0;
}

}  // namespace

std::string render_complex(Complex z) {
  std::string out = fmt6(z.real());
  out += z.imag() < 0.0 ? '-' : '+';
  out += fmt6(std::fabs(z.imag()));
  out += 'i';
  return out;
}

std::string render_table(const WeakValueTable& table, OutputFormat format) {
  if (format == OutputFormat::json) return table_to_json(table).dump(2) + "\n";
  if (format == OutputFormat::csv) return table_to_csv(table);
  std::size_t label_width = utf8_width("label");
  for (const WeakValueRow& row : table.rows)
    label_width = std::max(label_width, utf8_width(row.label));
  std::string out = pad_to("label", label_width + 2) + "weak value\n";
  for (const WeakValueRow& row : table.rows)
    out += pad_to(row.label, label_width + 2) + render_complex(row.value) +
           "\n";
  return out;
}

std::string render_record(const MeasurementRecord& record,
                          OutputFormat format) {
  if (format == OutputFormat::json)
    return record_to_json(record).dump(2) + "\n";
  if (format == OutputFormat::csv) return record_density_csv(record);
  std::string out;
  out += "g: " + fmt6(record.g) + "\n";
  out += "sigma: " + fmt6(record.sigma) + "\n";
  out += "success probability: " + fmt6(record.success_probability) + "\n";
  out += "position mean: " + fmt6(record.position_mean) + "\n";
  out += "momentum mean: " + fmt6(record.momentum_mean) + "\n";
  out += "inferred weak value: " + render_complex(record.inferred_weak_value) +
         "\n";
  return out;
}

OperatorExpr parse_observable(const SpaceDescriptor& space,
                              const std::string& token) {
  if (token.empty()) throw BoundsError("empty observable token");
  if (token == "identity") return OperatorExpr::identity(space);

  auto part_factor = [&](const std::string& part)
      -> std::pair<std::string, Eigen::MatrixXcd> {
    auto factor_dim = [&](const std::string& label) {
      return space.factor(space.position_of(label)).dim;
    };
    if (part.rfind("pi", 0) == 0 && part.size() > 2) {
      int k = parse_int_strict(part.substr(2), "path number");
      int n = factor_dim("path");
      if (k < 1 || k > n)
        throw BoundsError("path number " + std::to_string(k) +
                          " outside 1.." + std::to_string(n));
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
      m(k - 1, k - 1) = 1.0;
      return {"path", m};
    }
    if (part.rfind("sx:", 0) == 0) {
      std::string label = part.substr(3);
      int dim = factor_dim(label);
      if (dim == 2) {
        Eigen::MatrixXcd m(2, 2);
        m << 0, 1, 1, 0;
        return {label, m};
      }
      if (dim == 5) {
        // Five-level ladder factor: the encoded flip exchanges levels -2
        // and +2.
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(5, 5);
        m(oam_index(-2), oam_index(+2)) = 1.0;
        m(oam_index(+2), oam_index(-2)) = 1.0;
        return {label, m};
      }
      throw BoundsError("sx needs a two-level factor; '" + label +
                        "' has dimension " + std::to_string(dim));
    }
    if (part.size() > 1 && part[0] == 'j') {
      auto colon = part.find(':');
      if (colon != std::string::npos) {
        int m = parse_int_strict(part.substr(1, colon - 1), "exchange level");
        std::string label = part.substr(colon + 1);
        int dim = factor_dim(label);
        if (m < 1 || m >= dim)
          throw BoundsError("exchange level " + std::to_string(m) +
                            " outside 1.." + std::to_string(dim - 1));
        Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(dim, dim);
        mat(0, m) = 1.0;
        mat(m, 0) = 1.0;
        return {label, mat};
      }
    }
    throw BoundsError("cannot parse observable factor '" + part +
                      "' (expected identity, pi<k>, sx:<factor> or "
                      "j<m>:<factor>)");
  };

  std::vector<std::pair<std::string, Eigen::MatrixXcd>> factors;
  std::size_t start = 0;
  while (start <= token.size()) {
    std::size_t sep = token.find('*', start);
    std::string part = token.substr(
        start, sep == std::string::npos ? std::string::npos : sep - start);
    if (part.empty())
      throw BoundsError("empty factor in observable '" + token + "'");
    factors.push_back(part_factor(part));
    if (sep == std::string::npos) break;
    start = sep + 1;
  }
  OperatorExpr op(space);
  op.add_term(1.0, factors);
  return op;
}

int run_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  try {
    if (args.empty()) {
      err << kUsage;
      return 2;
    }
    std::string command = args.front();
    std::vector<std::string> rest(args.begin() + 1, args.end());
    if (command == "--help" || command == "-h" || command == "help") {
      out << kUsage;
      return 0;
    }
    if (command == "scenario-list") return cmd_scenario_list(rest, out);
    if (command == "scenario-run") return cmd_scenario_run(rest, out, err);
    if (command == "circuit-verify") return cmd_circuit_verify(rest, out, err);
    if (command == "pointer-sweep") return cmd_pointer_sweep(rest, out, err);
    if (command == "end-to-end") return cmd_end_to_end(rest, out);
    err << "unknown command '" << command << "'\n\n" << kUsage;
    return 2;
  } catch (const NullPostselectionError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const GridError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const OverflowError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const StructureError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const ConfigurationError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace cheshire
