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
#include <cstddef>
#include <future>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "alpharank/error.hpp"
#include "alpharank/evodyn.hpp"
#include "alpharank/metagame.hpp"
#include "alpharank/stationary.hpp"

namespace alpharank {

inline constexpr double kDefaultTieTolerance = 1e-3;

struct RankParams {
  EvoParams evo;
  SolverOptions solver;
  // Scores within this absolute distance share a rank.
  double tie_tolerance = kDefaultTieTolerance;
};

struct RankedProfile {
  StrategyProfile profile;
  std::size_t index = 0;
  std::string label;
  int rank = 0;
  double score = 0.0;
};

struct RankingResult {
  double alpha_used = 0.0;
  std::vector<RankedProfile> entries;
  double residual = 0.0;
};

// Orders profiles by descending score, ties broken by flat index. Profiles
// whose score lies within `tie_tolerance` of the first score of a group share
// that group's rank; ranks are consecutive (1, 1, 2, 2, ...).
inline std::vector<int> dense_ranks(const std::vector<double>& scores,
                                    double tie_tolerance,
                                    std::vector<std::size_t>* order_out = nullptr) {
  std::vector<std::size_t> order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  std::vector<int> rank(scores.size(), 0);
  int current = 0;
  double anchor = 0.0;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const double s = scores[order[pos]];
    if (pos == 0 || s < anchor - tie_tolerance) {
      ++current;
      anchor = s;
    }
    rank[order[pos]] = current;
  }
  if (order_out) *order_out = std::move(order);
  return rank;
}

inline RankingResult rank_profiles(const MetaGame& game,
                                   const std::vector<double>& scores,
                                   double alpha, double tie_tolerance) {
  if (scores.size() != game.num_profiles()) {
    throw Error(ErrorCode::kSizeMismatch, "score vector does not match game");
  }
  std::vector<std::size_t> order;
  const std::vector<int> rank = dense_ranks(scores, tie_tolerance, &order);
  RankingResult out;
  out.alpha_used = alpha;
  out.entries.reserve(order.size());
  for (std::size_t idx : order) {
    RankedProfile e;
    e.profile = game.index_profile(idx);
    e.index = idx;
    e.label = game.profile_label(e.profile);
    e.rank = rank[idx];
    e.score = scores[idx];
    out.entries.push_back(std::move(e));
  }
  return out;
}

// Builds C at the given alpha, solves for pi, and ranks profiles by mass.
inline RankingResult alpha_rank(const MetaGame& game, const RankParams& params) {
  const SparseMarkovChain chain = transition_matrix(game, params.evo);
  const StationaryDistribution pi = stationary_distribution(chain, params.solver);
  RankingResult r = rank_profiles(game, pi.probabilities,
                                  params.evo.ranking_intensity,
                                  params.tie_tolerance);
  r.residual = pi.residual;
  return r;
}

struct SweepPoint {
  double alpha = 0.0;
  std::optional<StationaryDistribution> distribution;
  // Solver failure at this point (e.g. ReducibleChain), empty on success.
  std::string error;

  bool ok() const { return distribution.has_value(); }
};

struct SweepResult {
  std::vector<SweepPoint> points;
  std::optional<double> converged_at;

  std::vector<double> alphas() const {
    std::vector<double> a;
    for (const auto& p : points) a.push_back(p.alpha);
    return a;
  }

  // Largest alpha of the leading run of successfully solved points.
  std::optional<std::size_t> last_valid_index() const {
    std::optional<std::size_t> last;
    for (std::size_t i = 0; i < points.size() && points[i].ok(); ++i) last = i;
    return last;
  }
};

struct SweepOptions {
  double alpha_start = 1e-4;
  double factor = 2.0;
  std::size_t num_points = 30;
  double rank_tol = 1e-3;
  std::size_t window = 3;
  SolverOptions solver;
  double payoff_tolerance = kDefaultPayoffTolerance;
};

// Smallest grid alpha from which the ranking stays settled for the rest of
// the solved sweep: within every run of `window` consecutive points starting
// there, the rank of each profile is unchanged (ties at `rank_tol`) and no
// score moves by more than `rank_tol`. Only the leading run of solved points
// is considered. Returns nullopt when no such alpha exists.
inline std::optional<std::size_t> converged_index(const SweepResult& sweep,
                                                  double rank_tol,
                                                  std::size_t window) {
  const auto last = sweep.last_valid_index();
  if (!last || window == 0 || *last + 1 < window) return std::nullopt;
  const std::size_t count = *last + 1;

  std::vector<std::vector<int>> ranks(count);
  for (std::size_t i = 0; i < count; ++i) {
    ranks[i] = dense_ranks(sweep.points[i].distribution->probabilities, rank_tol);
  }
  auto window_ok = [&](std::size_t start) {
    for (std::size_t i = start + 1; i < start + window; ++i) {
      if (ranks[i] != ranks[start]) return false;
      const auto& a = sweep.points[start].distribution->probabilities;
      const auto& b = sweep.points[i].distribution->probabilities;
      for (std::size_t j = 0; j < a.size(); ++j) {
        if (std::abs(a[j] - b[j]) > rank_tol) return false;
      }
    }
    return true;
  };
  // Walk backwards: find the earliest start such that every window from it to
  // the end is settled.
  std::optional<std::size_t> earliest;
  for (std::size_t start = count - window + 1; start-- > 0;) {
    if (!window_ok(start)) break;
    earliest = start;
  }
  return earliest;
}

inline std::optional<double> converged_alpha(const SweepResult& sweep,
                                             double rank_tol = 1e-3,
                                             std::size_t window = 3) {
  const auto idx = converged_index(sweep, rank_tol, window);
  if (!idx) return std::nullopt;
  return sweep.points[*idx].alpha;
}

// Solves the chain on the geometric grid alpha_start * factor^i. Points are
// independent and are solved concurrently; a failed point records its error.
inline SweepResult alpha_sweep(const MetaGame& game, int m,
                               const SweepOptions& opts = {}) {
  if (!(opts.alpha_start > 0.0) || !std::isfinite(opts.alpha_start)) {
    throw Error(ErrorCode::kInvalidParameter, "alpha_start must be > 0");
  }
  if (!(opts.factor > 1.0) || !std::isfinite(opts.factor)) {
    throw Error(ErrorCode::kInvalidParameter, "factor must be > 1");
  }
  if (opts.num_points < 1) {
    throw Error(ErrorCode::kInvalidParameter, "num_points must be >= 1");
  }
  EvoParams base;
  base.population_size = m;
  base.payoff_tolerance = opts.payoff_tolerance;
  base.validate();

  SweepResult out;
  out.points.resize(opts.num_points);
  for (std::size_t i = 0; i < opts.num_points; ++i) {
    out.points[i].alpha = opts.alpha_start * std::pow(opts.factor, static_cast<double>(i));
  }
  auto solve_point = [&](std::size_t i) {
    SweepPoint& pt = out.points[i];
    try {
      EvoParams p = base;
      p.ranking_intensity = pt.alpha;
      pt.distribution = stationary_distribution(transition_matrix(game, p), opts.solver);
    } catch (const Error& e) {
      pt.error = e.what();
    }
  };
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(),
                                                     opts.num_points));
  if (workers == 1) {
    for (std::size_t i = 0; i < opts.num_points; ++i) solve_point(i);
  } else {
    std::vector<std::future<void>> tasks;
    for (std::size_t w = 0; w < workers; ++w) {
      tasks.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t i = w; i < opts.num_points; i += workers) solve_point(i);
      }));
    }
    for (auto& t : tasks) t.get();
  }
  out.converged_at = converged_alpha(out, opts.rank_tol, opts.window);
  return out;
}

}  // namespace alpharank
