// Copyright 2026 The superpose Authors
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

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "superpose/io.hpp"
#include "superpose/superpose.hpp"

namespace superpose::cli {

using io::json;

/// Parsed command line. Paths are loaded in full before any computation.
struct RunConfig {
  std::string command;
  std::string action;
  std::string in_path, state_path, basis_path, kraus_path, from_path, to_path;
  std::optional<std::string> out_path;
  double tol = 1e-9;
  std::uint64_t seed = 1;
  double a = 0.5, theta = 0.0, phi = 0.0;
  std::size_t grid = 32;
  std::string input = "superposed";
  std::uint64_t turns = 10000;
};

inline int exit_code(ErrorKind kind) {
  return (kind == ErrorKind::NoConvergence || kind == ErrorKind::SolverFailure) ? 3 : 2;
}

inline json real_array(const std::vector<double>& xs) {
  json out = json::array();
  for (double x : xs) out.push_back(x);
  return out;
}

inline json columns_json(const CMatrix& m) {
  json out = json::array();
  for (std::size_t c = 0; c < m.cols(); ++c) out.push_back(io::to_json(m.column(c)));
  return out;
}

inline json report_json(const MeasureReport& r) {
  json cert = json::object();
  const MeasureCertificate& c = r.certificate;
  if (!c.weights.empty()) cert["weights"] = real_array(c.weights);
  if (c.free_state) cert["free_state"] = io::to_json(*c.free_state);
  if (c.tau) cert["tau"] = io::to_json(*c.tau);
  if (c.s != 0.0 || c.tau) cert["s"] = c.s;
  if (!c.decomposition.empty()) {
    json dec = json::array();
    for (const auto& [w, v] : c.decomposition) {
      dec.push_back(json{{"weight", w}, {"amp", io::to_json(v)}});
    }
    cert["decomposition"] = std::move(dec);
  }
  return json{{"value", r.value},
              {"convention", std::string(r.convention)},
              {"upper_bound", r.upper_bound},
              {"iterations", r.iterations},
              {"certificate", std::move(cert)}};
}

inline json solution_json(const ConversionResult& r, std::size_t transformers) {
  const SdpSolution& s = r.solution;
  return json{{"value", r.probability},     {"primal", s.primal},
              {"dual", s.dual},             {"gap", s.gap},
              {"p", real_array(s.p)},       {"dual_matrix", io::to_json(s.dual_matrix)},
              {"converged", s.converged},   {"newton_steps", s.newton_steps},
              {"transformers", transformers}};
}

inline PureState require_pure(const io::StateData& s) {
  if (!s.pure) throw Error(ErrorKind::InvalidState, "this command needs a pure state {\"amp\": ...}");
  return *s.pure;
}

inline std::string format_csv(const std::vector<HeatmapCell>& cells) {
  std::string out = "theta,phi,p\n";
  for (const HeatmapCell& c : cells) {
    out += io::format_number(c.theta, io::kReportDigits) + "," +
           io::format_number(c.phi, io::kReportDigits) + "," +
           (std::isfinite(c.p) ? io::format_number(c.p, io::kReportDigits) : std::string("nan")) +
           "\n";
  }
  return out;
}

/// Runs one command; returns the text to emit.
inline std::string run(const RunConfig& cfg) {
  auto report = [](const json& j) { return io::canonical_dump(j, io::kReportDigits) + "\n"; };
  const std::string key = cfg.command + " " + cfg.action;

  if (key == "basis check") {
    const FreeBasis b = io::load_basis(cfg.in_path);
    const CMatrix dual = b.reciprocal().adjoint() * b.vectors() - CMatrix::identity(b.dim());
    return report(json{{"d", b.dim()},
                       {"sigma_min", b.sigma_min()},
                       {"filter_probability", filter_probability(b)},
                       {"duality_error", frobenius_norm(dual)},
                       {"gram", io::to_json(b.gram())},
                       {"reciprocal", columns_json(b.reciprocal())}});
  }
  if (key == "basis canonical") {
    return io::canonical_dump(io::basis_to_json(io::load_basis(cfg.in_path)), io::kDataDigits) +
           "\n";
  }
  if (key == "state rank") {
    const io::StateData s = io::load_state(cfg.state_path);
    const FreeBasis b = io::load_basis(cfg.basis_path);
    const PureState psi = require_pure(s);
    json support = json::array();
    for (std::size_t i : superposition_support(psi, b, cfg.tol)) support.push_back(i);
    return report(json{{"superposition_rank", superposition_rank(psi, b, cfg.tol)},
                       {"support", std::move(support)},
                       {"coefficients", io::to_json(free_coefficients(psi, b))}});
  }
  if (key == "state expand") {
    const io::StateData s = io::load_state(cfg.state_path);
    const FreeBasis b = io::load_basis(cfg.basis_path);
    const DensityMatrix rho = s.density();
    return report(json{{"is_free", is_free(rho, b, cfg.tol)},
                       {"free_expansion", io::to_json(free_expansion(rho, b).coeffs)}});
  }
  if (key == "kraus check" || key == "kraus complete") {
    const std::vector<CMatrix> ops = io::load_kraus(cfg.kraus_path);
    const FreeBasis b = io::load_basis(cfg.basis_path);
    const Channel ch(ops);
    if (cfg.action == "complete") {
      std::vector<CMatrix> all = ops;
      for (CMatrix& f : complete_free(ops, b)) all.push_back(std::move(f));
      return report(io::kraus_to_json(all));
    }
    const bool tp = ch.trace_preserving(cfg.tol);
    json entries = json::array();
    bool all_free = true;
    for (const CMatrix& k : ops) {
      const auto form = is_free_kraus(k, b, cfg.tol);
      all_free = all_free && form.has_value();
      json e{{"free", form.has_value()}};
      if (form) {
        e["coeffs"] = io::to_json(form->coeffs);
        json idx = json::array();
        for (std::size_t i : form->index_fn) idx.push_back(i);
        e["index_fn"] = std::move(idx);
      }
      entries.push_back(std::move(e));
    }
    return report(json{{"operators", std::move(entries)},
                       {"all_free", all_free},
                       {"trace_preserving", tp},
                       {"defect_norm", spectral_norm(ch.defect())},
                       {"is_mfo", tp ? json(is_mfo(ch, b, std::max(cfg.tol, 1e-9))) : json()}});
  }
  if (cfg.command == "measure") {
    const io::StateData s = io::load_state(cfg.state_path);
    const FreeBasis b = io::load_basis(cfg.basis_path);
    const DensityMatrix rho = s.density();
    if (cfg.action == "l1") return report(report_json(l1_measure(rho, b)));
    if (cfg.action == "relent") return report(report_json(rel_entropy_measure(rho, b, cfg.tol)));
    if (cfg.action == "robustness") return report(report_json(robustness(rho, b)));
    if (cfg.action == "rank") {
      if (s.pure) return report(report_json(rank_measure(*s.pure, b)));
      return report(report_json(rank_measure(rho, b, 1000, cfg.seed)));
    }
  }
  if (key == "convert prob") {
    const io::StateData from = io::load_state(cfg.from_path);
    const io::StateData to = io::load_state(cfg.to_path);
    const FreeBasis b = io::load_basis(cfg.basis_path);
    const PureState psi = require_pure(from), phi = require_pure(to);
    const std::size_t count = enumerate_transformers(psi, phi, b).operators.size();
    return report(solution_json(max_conversion_prob(psi, phi, b), count));
  }
  if (key == "qubit heatmap") {
    return format_csv(conversion_heatmap(cfg.a, cfg.theta, cfg.phi, cfg.grid));
  }
  if (key == "qubit choi") {
    const BlochMap map = build_phi(cfg.a, cfg.theta, cfg.phi);
    const CMatrix c = choi(map);
    const FreeDecomposition fo = free_kraus_decomposition(c, cfg.a, cfg.tol);
    return report(json{{"choi", io::to_json(c)},
                       {"eigenvalues", real_array(eigenvalues(c))},
                       {"is_mfo", is_mfo(to_channel(map), symmetric_qubit_basis(cfg.a))},
                       {"free_decomposition", fo.exists},
                       {"free_margin", fo.margin}});
  }
  if (key == "game simulate") {
    const FreeBasis b = io::load_basis(cfg.basis_path);
    GameInput input;
    if (cfg.input == "free") {
      input = GameInput::Free;
    } else if (cfg.input == "superposed") {
      input = GameInput::Superposed;
    } else {
      throw Error(ErrorKind::InvalidArgument, "--input must be free or superposed");
    }
    const GameSpec spec = build_game(b);
    const GameStats st = simulate(spec, input, cfg.turns, cfg.seed);
    return report(json{{"input", cfg.input},
                       {"p", spec.p},
                       {"turns", st.turns},
                       {"conclusive_turns", st.conclusive_turns},
                       {"wins", st.wins},
                       {"losses", st.losses},
                       {"restarts", st.restarts},
                       {"win_rate", st.win_rate()}});
  }
  if (key == "entangle convert") {
    const io::StateData s = io::load_state(cfg.state_path);
    const FreeBasis b = io::load_basis(cfg.basis_path);
    const PureState psi = require_pure(s);
    const FaithfulnessReport r = faithfulness_report(faithful_conversion(b), psi, b, cfg.tol);
    return report(json{{"schmidt_rank", r.schmidt_rank},
                       {"classical_rank", r.classical_rank},
                       {"probability", r.probability}});
  }
  throw Error(ErrorKind::UnknownCommand, key);
}

/// Parses argv, runs the command and writes its output. Exit codes: 0 success,
/// 2 parse or validation error, 3 solver failure.
inline int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  static const std::vector<std::string> kCommands = {"basis", "state",   "kraus", "measure",
                                                     "convert", "qubit", "game",  "entangle"};
  if (argc < 2) {
    err << "error: " << to_string(ErrorKind::UnknownCommand) << ": expected one of";
    for (const auto& c : kCommands) err << ' ' << c;
    err << '\n';
    return 2;
  }
  // First token that is neither a global option nor its value.
  std::string first;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--tol" || arg == "--seed" || arg == "--out") {
      ++i;
      continue;
    }
    if (arg.rfind("--tol=", 0) == 0 || arg.rfind("--seed=", 0) == 0 || arg.rfind("--out=", 0) == 0) {
      continue;
    }
    first = arg;
    break;
  }
  if (first != "-h" && first != "--help" &&
      std::find(kCommands.begin(), kCommands.end(), first) == kCommands.end()) {
    err << "error: " << to_string(ErrorKind::UnknownCommand) << ": " << first << '\n';
    return 2;
  }

  RunConfig cfg;
  CLI::App app{"superpose: superposition resource theory over a non-orthogonal basis"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--tol", cfg.tol, "Numerical tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Random seed");
  app.add_option("--out", cfg.out_path, "Output file (default stdout)");

  auto group = [&](const std::string& name, const std::string& help,
                   const std::vector<std::string>& actions) {
    CLI::App* cmd = app.add_subcommand(name, help);
    cmd->require_subcommand(1);
    cmd->fallthrough();
    std::vector<CLI::App*> subs;
    for (const auto& a : actions) {
      CLI::App* sub = cmd->add_subcommand(a);
      sub->fallthrough();
      sub->callback([&cfg, name, a] {
        cfg.command = name;
        cfg.action = a;
      });
      subs.push_back(sub);
    }
    return subs;
  };

  auto basis = group("basis", "Basis validation", {"check", "canonical"});
  for (auto* s : basis) s->add_option("--in", cfg.in_path, "Basis JSON")->required();

  auto state = group("state", "State analysis", {"rank", "expand"});
  for (auto* s : state) {
    s->add_option("--state", cfg.state_path, "State JSON")->required();
    s->add_option("--basis", cfg.basis_path, "Basis JSON")->required();
  }

  auto kraus = group("kraus", "Kraus operator checks", {"check", "complete"});
  for (auto* s : kraus) {
    s->add_option("--kraus", cfg.kraus_path, "Kraus set JSON")->required();
    s->add_option("--basis", cfg.basis_path, "Basis JSON")->required();
  }

  auto measure = group("measure", "Superposition measures", {"l1", "relent", "rank", "robustness"});
  for (auto* s : measure) {
    s->add_option("--state", cfg.state_path, "State JSON")->required();
    s->add_option("--basis", cfg.basis_path, "Basis JSON")->required();
  }

  auto convert = group("convert", "Pure-state conversion", {"prob"});
  convert[0]->add_option("--from", cfg.from_path, "Initial pure state JSON")->required();
  convert[0]->add_option("--to", cfg.to_path, "Target pure state JSON")->required();
  convert[0]->add_option("--basis", cfg.basis_path, "Basis JSON")->required();

  auto qubit = group("qubit", "Qubit constructions", {"heatmap", "choi"});
  for (auto* s : qubit) {
    s->add_option("--a", cfg.a, "Overlap a in [0, 1)")->required()->check(CLI::Range(0.0, 0.999999));
    s->add_option("--theta", cfg.theta, "Polar angle")->required();
    s->add_option("--phi", cfg.phi, "Azimuthal angle")->required();
  }
  qubit[0]->add_option("--grid", cfg.grid, "Grid size n (n x 2n cells)")->check(CLI::Range(8, 4096));

  auto game = group("game", "Channel discrimination game", {"simulate"});
  game[0]->add_option("--basis", cfg.basis_path, "Basis JSON")->required();
  game[0]->add_option("--input", cfg.input, "free or superposed")
      ->check(CLI::IsMember({"free", "superposed"}));
  game[0]->add_option("--turns", cfg.turns, "Number of turns")->check(CLI::PositiveNumber);

  auto entangle = group("entangle", "Superposition to entanglement", {"convert"});
  entangle[0]->add_option("--basis", cfg.basis_path, "Basis JSON")->required();
  entangle[0]->add_option("--state", cfg.state_path, "Pure state JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    const std::string text = run(cfg);
    if (cfg.out_path) {
      std::ofstream file(*cfg.out_path);
      if (!file) throw Error(ErrorKind::InvalidArgument, "cannot write " + *cfg.out_path);
      file << text;
    } else {
      out << text;
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("superpose");
  for (const auto& a : args) argv.push_back(a.c_str());
  return dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace superpose::cli
