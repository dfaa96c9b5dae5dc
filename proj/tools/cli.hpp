// Copyright 2026 The alpharank Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Command-line front end. `run` is kept separate from main() so the tests
// can drive it with in-memory streams.
//
// Exit codes: 0 success, 1 domain/IO error (JSON envelope on stderr),
// 2 usage error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "alpharank/all.hpp"
#include "json.hpp"

namespace alpharank::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

struct CliConfig {
  std::string subcommand;
  std::string game_path;
  std::string winrates_path;
  int m = 50;
  std::optional<double> alpha;
  double alpha_start = 1e-4;
  double alpha_factor = 2.0;
  std::size_t alpha_points = 30;
  double tol = 1e-10;
  double rank_tol = 1e-3;
  std::optional<double> epsilon;
  std::uint64_t seed = 1;
  std::string format = "text";
  std::string out_path;
  // graph
  double threshold = 1.0;
  // replicate
  std::string x0;
  double step = 0.01;
  std::size_t steps = 1000;
  // simulate
  double mu = 1e-3;
  std::uint64_t events = 1'000'000;
};

namespace detail {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void emit_error(std::ostream& err, const std::string& code, const std::string& message) {
  nlohmann::json j{{"error", code}, {"message", message}};
  err << j.dump() << '\n';
}

inline void require_format(const CliConfig& cfg, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed) {
    if (cfg.format == f) return;
  }
  std::string list;
  for (const char* f : allowed) list += std::string(list.empty() ? "" : ", ") + f;
  throw UsageError("--format " + cfg.format + " is not supported by '" + cfg.subcommand +
                   "' (choose from " + list + ")");
}

inline MetaGame load(const CliConfig& cfg) {
  if (!cfg.game_path.empty()) return io::load_game(cfg.game_path);
  return io::load_winrates(cfg.winrates_path);
}

inline SweepOptions sweep_options(const CliConfig& cfg) {
  SweepOptions o;
  o.alpha_start = cfg.alpha_start;
  o.factor = cfg.alpha_factor;
  o.num_points = cfg.alpha_points;
  o.rank_tol = cfg.rank_tol;
  o.solver.tol = cfg.tol;
  return o;
}

// The explicit --alpha, else the converged sweep alpha, else the largest
// alpha at which the sweep could be solved.
inline double resolve_alpha(const MetaGame& game, const CliConfig& cfg) {
  if (cfg.alpha) return *cfg.alpha;
  const SweepResult sweep = alpha_sweep(game, cfg.m, sweep_options(cfg));
  if (sweep.converged_at) return *sweep.converged_at;
  const auto last = sweep.last_valid_index();
  if (!last) {
    throw Error(ErrorCode::kReducibleChain, "no point of the alpha sweep could be solved");
  }
  return sweep.points[*last].alpha;
}

inline std::vector<std::vector<double>> parse_x0(const MetaGame& game, const std::string& text) {
  std::vector<std::vector<double>> shares;
  if (text.empty()) {
    for (std::size_t n : game.population_sizes()) {
      shares.emplace_back(n, 1.0 / static_cast<double>(n));
    }
    return shares;
  }
  std::stringstream pops(text);
  std::string block;
  while (std::getline(pops, block, ';')) {
    std::vector<double> v;
    std::stringstream cells(block);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        std::size_t used = 0;
        v.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw UsageError("--x0: cannot parse '" + cell + "' as a number");
      }
    }
    shares.push_back(std::move(v));
  }
  return shares;
}

inline std::string cmd_rank(const CliConfig& cfg) {
  detail::require_format(cfg, {"text", "csv", "json"});
  const MetaGame game = load(cfg);
  RankParams p;
  p.evo.population_size = cfg.m;
  p.evo.ranking_intensity = resolve_alpha(game, cfg);
  p.solver.tol = cfg.tol;
  const RankingResult r = alpha_rank(game, p);
  if (cfg.format == "csv") return report::ranking_csv(r);
  if (cfg.format == "json") return report::ranking_json(r).dump(2) + "\n";
  return report::ranking_text(r);
}

inline std::string cmd_sweep(const CliConfig& cfg) {
  detail::require_format(cfg, {"text", "csv", "json"});
  const MetaGame game = load(cfg);
  const SweepResult sweep = alpha_sweep(game, cfg.m, sweep_options(cfg));
  if (cfg.format == "json") return report::sweep_json(game, sweep).dump(2) + "\n";
  std::string body = report::sweep_csv(game, sweep);
  if (cfg.format == "csv") return body;
  std::ostringstream out;
  out << body;
  if (sweep.converged_at) {
    out << "# rankings converged at alpha = " << *sweep.converged_at << "\n";
  } else {
    out << "# rankings did not converge on this grid\n";
  }
  for (const auto& pt : sweep.points) {
    if (!pt.ok()) out << "# alpha = " << pt.alpha << ": " << pt.error << "\n";
  }
  return out.str();
}

inline std::string cmd_mcc(const CliConfig& cfg) {
  detail::require_format(cfg, {"text", "json", "dot"});
  const MetaGame game = load(cfg);
  const double eps = cfg.epsilon.value_or(1.0 / cfg.m);
  const ResponseGraph g = response_graph(game);
  const MccSet mcc = mcc_chains(game, eps);
  if (cfg.format == "dot") return response_graph_dot(game, g, mcc.components);
  auto label = [&](std::size_t i) { return game.profile_label(game.index_profile(i)); };
  if (cfg.format == "json") {
    nlohmann::json j;
    j["epsilon"] = mcc.epsilon;
    j["components"] = nlohmann::json::array();
    for (std::size_t c = 0; c < mcc.components.size(); ++c) {
      nlohmann::json comp;
      comp["states"] = nlohmann::json::array();
      for (std::size_t s : mcc.components[c]) comp["states"].push_back(label(s));
      comp["transition_matrix"] = mcc.chains[c];
      j["components"].push_back(std::move(comp));
    }
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  out << mcc.components.size() << " Markov-Conley chain(s), epsilon = " << mcc.epsilon << "\n";
  for (std::size_t c = 0; c < mcc.components.size(); ++c) {
    out << "MCC " << c + 1 << ":";
    for (std::size_t s : mcc.components[c]) out << ' ' << label(s);
    out << "\n";
  }
  return out.str();
}

inline std::string cmd_graph(const CliConfig& cfg) {
  detail::require_format(cfg, {"dot", "csv", "text"});
  const MetaGame game = load(cfg);
  EvoParams p;
  p.population_size = cfg.m;
  p.ranking_intensity = resolve_alpha(game, cfg);
  const SparseMarkovChain chain = transition_matrix(game, p);
  if (cfg.format == "csv") return to_coo_csv(chain);
  SolverOptions opts;
  opts.tol = cfg.tol;
  const auto pi = stationary_distribution(chain, opts);
  return report::export_dot(game, chain, pi.probabilities, cfg.m, cfg.threshold);
}

inline std::string cmd_replicate(const CliConfig& cfg) {
  detail::require_format(cfg, {"text", "csv", "json"});
  const MetaGame game = load(cfg);
  PopulationState x0{parse_x0(game, cfg.x0)};
  const Trajectory t = integrate(game, x0, cfg.step, cfg.steps);
  if (cfg.format == "json") {
    nlohmann::json j;
    j["step_size"] = t.step_size;
    j["max_renormalization_drift"] = t.max_renormalization_drift;
    j["times"] = t.times;
    j["states"] = nlohmann::json::array();
    for (const auto& s : t.states) j["states"].push_back(s.shares);
    return j.dump(2) + "\n";
  }
  return trajectory_csv(game, t);
}

inline std::string cmd_simulate(const CliConfig& cfg) {
  detail::require_format(cfg, {"text", "json"});
  const MetaGame game = load(cfg);
  SimConfig sc;
  sc.population_size = cfg.m;
  sc.alpha = cfg.alpha.value_or(0.0);
  sc.mutation_rate = cfg.mu;
  sc.steps = cfg.events;
  sc.seed = cfg.seed;
  const OccupancyReport r = simulate(game, sc);
  return report::occupancy_json(game, r, sc).dump(2) + "\n";
}

inline std::string cmd_validate(const CliConfig& cfg, bool& all_passed) {
  detail::require_format(cfg, {"text", "json"});
  const MetaGame game = load(cfg);
  const validate::ValidationReport rep = validate::run_all(game, cfg.m);
  all_passed = rep.all_passed();
  if (cfg.format == "json") {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& c : rep.checks) {
      j.push_back({{"check", c.name},
                   {"status", c.skipped ? "skipped" : (c.passed ? "pass" : "fail")},
                   {"detail", c.detail}});
    }
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  for (const auto& c : rep.checks) {
    out << (c.skipped ? "SKIP" : (c.passed ? "PASS" : "FAIL")) << "  " << c.name << ": "
        << c.detail << "\n";
  }
  return out.str();
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  CLI::App app{"Evaluate and rank strategies in K-player meta-games with alpha-Rank.", "alpharank"};
  app.require_subcommand(1, 1);

  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {"rank", "Rank all strategy profiles by stationary mass"},
      {"sweep", "Stationary distribution across a geometric alpha grid"},
      {"mcc", "Response graph and Markov-Conley chains"},
      {"graph", "Dynamics graph (DOT) or transition matrix (CSV)"},
      {"replicate", "Integrate replicator dynamics"},
      {"simulate", "Stochastic copy/mutate simulation"},
      {"validate", "Run the model correspondence checks"},
  };
  std::vector<CLI::App*> apps;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    auto* game = sub->add_option("--game", cfg.game_path, "Game in JSON format")
                     ->check(CLI::ExistingFile);
    auto* wr = sub->add_option("--winrates", cfg.winrates_path, "Win-rate matrix in CSV format")
                   ->check(CLI::ExistingFile);
    game->excludes(wr);
    sub->add_option("--m", cfg.m, "Population size")->check(CLI::Range(2, 1 << 30))
        ->capture_default_str();
    auto* alpha = sub->add_option("--alpha", cfg.alpha, "Ranking intensity")
                      ->check(CLI::NonNegativeNumber);
    auto* a0 = sub->add_option("--alpha-start", cfg.alpha_start, "First alpha of the sweep")
                   ->check(CLI::PositiveNumber);
    auto* af = sub->add_option("--alpha-factor", cfg.alpha_factor, "Sweep growth factor")
                   ->check(CLI::Range(1.0, std::numeric_limits<double>::max()));
    auto* an = sub->add_option("--alpha-points", cfg.alpha_points, "Number of sweep points")
                   ->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
    alpha->excludes(a0)->excludes(af)->excludes(an);
    sub->add_option("--tol", cfg.tol, "Stationary solver residual tolerance")
        ->check(CLI::PositiveNumber);
    sub->add_option("--rank-tol", cfg.rank_tol, "Score tolerance for sweep convergence")
        ->check(CLI::PositiveNumber);
    sub->add_option("--epsilon", cfg.epsilon, "MCC equal-payoff weight (default 1/m)");
    sub->add_option("--seed", cfg.seed, "PRNG seed");
    sub->add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"text", "csv", "json", "dot"}));
    sub->add_option("--out", cfg.out_path, "Write output to this file instead of stdout");
    sub->add_option("--threshold", cfg.threshold,
                    "Hide edges with rho below threshold/m (graph)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--x0", cfg.x0,
                    "Initial shares, comma-separated, populations split by ';' (replicate)");
    sub->add_option("--step", cfg.step, "RK4 step size (replicate)")->check(CLI::PositiveNumber);
    sub->add_option("--steps", cfg.steps, "RK4 steps (replicate)");
    sub->add_option("--mu", cfg.mu, "Mutation rate (simulate)");
    sub->add_option("--events", cfg.events, "Simulated events (simulate)")
        ->check(CLI::PositiveNumber);
    apps.push_back(sub);
  }

  // CLI11 wants argv order reversed when handed a vector.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  for (std::size_t i = 0; i < apps.size(); ++i) {
    if (apps[i]->parsed()) cfg.subcommand = subs[i].name;
  }
  if (cfg.game_path.empty() && cfg.winrates_path.empty()) {
    err << "usage error: one of --game or --winrates is required\n";
    return kExitUsage;
  }
  if (cfg.format == "text" && cfg.subcommand == "graph") cfg.format = "dot";

  std::string text;
  bool validation_ok = true;
  try {
    if (cfg.subcommand == "rank") text = detail::cmd_rank(cfg);
    else if (cfg.subcommand == "sweep") text = detail::cmd_sweep(cfg);
    else if (cfg.subcommand == "mcc") text = detail::cmd_mcc(cfg);
    else if (cfg.subcommand == "graph") text = detail::cmd_graph(cfg);
    else if (cfg.subcommand == "replicate") text = detail::cmd_replicate(cfg);
    else if (cfg.subcommand == "simulate") text = detail::cmd_simulate(cfg);
    else text = detail::cmd_validate(cfg, validation_ok);
  } catch (const detail::UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    detail::emit_error(err, std::string(error_code_name(e.code())), e.detail());
    return kExitDomain;
  } catch (const std::exception& e) {
    detail::emit_error(err, "InternalError", e.what());
    return kExitDomain;
  }

  if (cfg.out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(cfg.out_path, std::ios::binary);
    if (!f || !(f << text)) {
      detail::emit_error(err, "IoError", "cannot write " + cfg.out_path);
      return kExitDomain;
    }
  }
  if (!validation_ok) {
    detail::emit_error(err, "ValidationFailed", "one or more correspondence checks failed");
    return kExitDomain;
  }
  return kExitOk;
}

}  // namespace alpharank::cli
