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

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "alpharank/alpharank.hpp"
#include "alpharank/evodyn.hpp"
#include "alpharank/mcc.hpp"
#include "alpharank/replicator.hpp"

// Cross-checks between the model layers, run on a concrete game.

namespace alpharank::validate {

struct CheckResult {
  std::string name;
  bool passed = false;
  bool skipped = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.passed || c.skipped; });
  }
};

// Symmetric two-player games: the general chain must equal the dedicated
// single-population construction entry for entry.
inline CheckResult single_population_reduction(const MetaGame& game, int m,
                                               const std::vector<double>& alphas,
                                               double tol = 1e-12) {
  CheckResult r{"single-population reduction", false, false, ""};
  if (!game.single_population()) {
    r.skipped = true;
    r.detail = "game is not symmetric two-player";
    return r;
  }
  double worst = 0.0;
  for (double alpha : alphas) {
    EvoParams p;
    p.population_size = m;
    p.ranking_intensity = alpha;
    const auto general = transition_matrix(game, p).to_dense();
    const auto single = single_population_matrix(game, p);
    for (std::size_t i = 0; i < general.size(); ++i) {
      for (std::size_t j = 0; j < general.size(); ++j) {
        worst = std::max(worst, std::abs(general[i][j] - single[i][j]));
      }
    }
  }
  r.passed = worst <= tol;
  std::ostringstream ss;
  ss << "max |C - C_single| = " << worst;
  r.detail = ss.str();
  return r;
}

// Edge mean dynamics in tanh form versus the difference of the two Fermi
// copy probabilities, over every contest of the game and a grid of (x, alpha).
inline CheckResult edge_dynamics_correspondence(const MetaGame& game,
                                                double tol = 1e-12) {
  CheckResult r{"edge dynamics correspondence", false, false, ""};
  const double alphas[] = {0.0, 0.01, 0.1, 1.0, 10.0};
  double worst = 0.0;
  std::size_t points = 0;
  for (std::size_t i = 0; i < game.num_profiles(); ++i) {
    const StrategyProfile profile = game.index_profile(i);
    for (const auto& nb : game.neighbors(profile)) {
      const ContestFitness f = contest_fitness(
          game, {nb.population, profile[nb.population], nb.profile[nb.population], profile});
      for (double alpha : alphas) {
        for (int xi = 0; xi <= 10; ++xi) {
          const double x = xi / 10.0;
          const double lhs = edge_mean_dynamics(f.mutant, f.resident, alpha, x);
          const double rhs = x * (1.0 - x) *
                             (fermi_copy_prob(f.resident, f.mutant, alpha) -
                              fermi_copy_prob(f.mutant, f.resident, alpha));
          worst = std::max(worst, std::abs(lhs - rhs));
          ++points;
        }
      }
    }
  }
  r.passed = worst <= tol;
  std::ostringstream ss;
  ss << points << " points, max difference " << worst;
  r.detail = ss.str();
  return r;
}

// Large-alpha behaviour: the chain restricted to MCC states approaches the
// epsilon = 1/m MCC chain, and the support of pi at the largest solved
// sweep point is the union of MCC states.
inline CheckResult limit_correspondence(const MetaGame& game, int m,
                                        const SweepOptions& sweep_opts = {},
                                        double mass_threshold = 1e-3) {
  CheckResult r{"infinite-alpha MCC correspondence", false, false, ""};
  const auto report = check_limit_correspondence(game, m, {10.0, 100.0, 1000.0});
  const bool deviation_ok = report.deviation_non_increasing();

  const SweepResult sweep = alpha_sweep(game, m, sweep_opts);
  const auto last = sweep.last_valid_index();
  bool support_ok = false;
  std::ostringstream ss;
  if (last) {
    const auto& pi = sweep.points[*last].distribution->probabilities;
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < pi.size(); ++i) {
      if (pi[i] > mass_threshold) support.push_back(i);
    }
    support_ok = support == report.mcc_states;
    ss << "support at alpha=" << sweep.points[*last].alpha << " has " << support.size()
       << " profiles, MCC union has " << report.mcc_states.size() << "; ";
  } else {
    ss << "no sweep point solved; ";
  }
  ss << "deviation";
  for (const auto& row : report.rows) ss << " " << row.max_deviation;
  r.passed = deviation_ok && support_ok;
  r.detail = ss.str();
  return r;
}

inline ValidationReport run_all(const MetaGame& game, int m) {
  ValidationReport report;
  report.checks.push_back(single_population_reduction(game, m, {0.0, 0.1, 1.0, 10.0}));
  report.checks.push_back(edge_dynamics_correspondence(game));
  report.checks.push_back(limit_correspondence(game, m));
  return report;
}

}  // namespace alpharank::validate
