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
#include <sstream>
#include <string>
#include <vector>

#include "alpharank/error.hpp"
#include "alpharank/metagame.hpp"

// Finite-population evolutionary macro-model in the small-mutation limit.
//
// The state of the chain is a profile of monomorphic populations. A single
// mutant appears in one population, fixates with probability rho, and the
// chain jumps to the neighboring profile.

namespace alpharank {

// Population size m and ranking intensity alpha. The mutation rate mu has no
// field: the model is defined in the limit mu -> 0, where a mutant fixates or
// dies out before the next mutation appears anywhere.
struct EvoParams {
  int population_size = 50;
  double ranking_intensity = 0.0;
  // Relative threshold under which two fitnesses are treated as equal.
  double payoff_tolerance = kDefaultPayoffTolerance;

  void validate() const {
    if (population_size < 2) {
      throw Error(ErrorCode::kInvalidParameter, "population size must be >= 2");
    }
    if (!std::isfinite(ranking_intensity) || ranking_intensity < 0.0) {
      throw Error(ErrorCode::kInvalidParameter,
                  "ranking intensity must be finite and non-negative");
    }
    if (!(payoff_tolerance >= 0.0)) {
      throw Error(ErrorCode::kInvalidParameter,
                  "payoff tolerance must be non-negative");
    }
  }
};

// A mutant strategy invading a monomorphic resident population. The other
// populations sit at `background` (its entry for `population` is ignored).
struct PairwiseContest {
  std::size_t population = 0;
  std::size_t resident = 0;
  std::size_t mutant = 0;
  StrategyProfile background;
};

struct ContestFitness {
  double mutant;
  double resident;
};

// Fitness of an individual of population k playing `strategy` while every
// other population is monomorphic at `background`. In a single-population
// game background[0] is the opponent strategy.
inline double fitness(const MetaGame& game, std::size_t population,
                      std::size_t strategy, const StrategyProfile& background) {
  if (population >= game.num_populations()) {
    throw Error(ErrorCode::kIndexOutOfRange, "population out of range");
  }
  if (game.single_population()) {
    return game.payoff(0, {strategy, background.strategies.at(0)});
  }
  StrategyProfile p = background;
  if (p.size() != game.num_populations()) {
    throw Error(ErrorCode::kIndexOutOfRange, "background has wrong length");
  }
  p[population] = strategy;
  return game.payoff(population, p.strategies);
}

inline ContestFitness contest_fitness(const MetaGame& game,
                                      const PairwiseContest& c) {
  if (c.population >= game.num_populations() ||
      c.resident >= game.num_strategies(c.population) ||
      c.mutant >= game.num_strategies(c.population)) {
    throw Error(ErrorCode::kIndexOutOfRange, "contest strategy out of range");
  }
  if (game.single_population()) {
    // Local pairwise payoffs: each plays the other.
    return {game.payoff(0, {c.mutant, c.resident}),
            game.payoff(0, {c.resident, c.mutant})};
  }
  return {fitness(game, c.population, c.mutant, c.background),
          fitness(game, c.population, c.resident, c.background)};
}

// Probability that an individual with fitness f_tau copies one with fitness
// f_sigma: (1 + exp(alpha (f_tau - f_sigma)))^-1.
inline double fermi_copy_prob(double f_tau, double f_sigma, double alpha) {
  const double x = alpha * (f_tau - f_sigma);
  if (x > 0.0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

// Fixation probability of one mutant (fitness f_tau) among m - 1 residents
// (fitness f_sigma) under Fermi selection:
//   rho = (1 - e^{-u}) / (1 - e^{-m u}),  u = alpha (f_tau - f_sigma),
// and 1/m for equal fitness. Both signs of u are evaluated without forming
// e^{+|u|}, so the result underflows gracefully to 0 instead of producing
// inf/inf.
inline double fixation_probability(double f_tau, double f_sigma, double alpha,
                                   int m,
                                   double tol = kDefaultPayoffTolerance) {
  const double inv_m = 1.0 / static_cast<double>(m);
  if (payoffs_equal(f_tau, f_sigma, tol)) return inv_m;
  const double u = alpha * (f_tau - f_sigma);
  if (std::abs(u) < 1e-12) return inv_m;
  const double md = static_cast<double>(m);
  if (u > 0.0) return std::expm1(-u) / std::expm1(-md * u);
  const double v = -u;
  return std::exp(-(md - 1.0) * v) * (-std::expm1(-v)) / (-std::expm1(-md * v));
}

struct SparseEntry {
  std::size_t column;
  double probability;
};

// Row-stochastic sparse matrix. Rows keep their structural entries (including
// any that underflowed to exactly 0) sorted by column; the diagonal is always
// present.
class SparseMarkovChain {
 public:
  SparseMarkovChain() = default;
  SparseMarkovChain(std::vector<std::vector<SparseEntry>> rows, double eta)
      : rows_(std::move(rows)), eta_(eta) {}

  // Hand-built chain from a dense matrix. Rows must be stochastic within
  // 1e-12; zero entries are dropped except the diagonal.
  static SparseMarkovChain from_dense(
      const std::vector<std::vector<double>>& dense) {
    const std::size_t n = dense.size();
    std::vector<std::vector<SparseEntry>> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (dense[i].size() != n) {
        throw Error(ErrorCode::kNotSquare, "transition matrix is not square");
      }
      double sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double p = dense[i][j];
        if (!(p >= 0.0 && p <= 1.0)) {
          throw Error(ErrorCode::kOutOfRangeEntry,
                      "transition probability outside [0,1]");
        }
        sum += p;
        if (p > 0.0 || i == j) rows[i].push_back({j, p});
      }
      if (std::abs(sum - 1.0) > 1e-12) {
        throw Error(ErrorCode::kInvalidParameter,
                    "row " + std::to_string(i) + " does not sum to 1");
      }
    }
    return SparseMarkovChain(std::move(rows), 0.0);
  }

  std::size_t num_states() const { return rows_.size(); }
  const std::vector<SparseEntry>& row(std::size_t i) const { return rows_[i]; }
  const std::vector<std::vector<SparseEntry>>& rows() const { return rows_; }
  // 1 / Σ_k (|S^k| − 1); 0 for hand-built chains and one-profile games.
  double eta() const { return eta_; }

  std::size_t nonzeros() const {
    std::size_t n = 0;
    for (const auto& r : rows_) n += r.size();
    return n;
  }

  double probability(std::size_t i, std::size_t j) const {
    for (const auto& e : rows_.at(i)) {
      if (e.column == j) return e.probability;
    }
    return 0.0;
  }

  // y^T = x^T C.
  std::vector<double> left_multiply(const std::vector<double>& x) const {
    std::vector<double> y(rows_.size(), 0.0);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const double xi = x[i];
      if (xi == 0.0) continue;
      for (const auto& e : rows_[i]) y[e.column] += xi * e.probability;
    }
    return y;
  }

  std::vector<std::vector<double>> to_dense() const {
    std::vector<std::vector<double>> d(rows_.size(),
                                       std::vector<double>(rows_.size(), 0.0));
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      for (const auto& e : rows_[i]) d[i][e.column] = e.probability;
    }
    return d;
  }

 private:
  std::vector<std::vector<SparseEntry>> rows_;
  double eta_ = 0.0;
};

// Off-diagonal entry i -> j (j a single-population neighbor of i, mutant in
// population k) is eta * rho^k; the diagonal is the row complement.
inline SparseMarkovChain transition_matrix(const MetaGame& game,
                                           const EvoParams& params) {
  params.validate();
  const std::size_t n = game.num_profiles();
  const std::size_t deviations = game.num_deviations();
  const double eta = deviations ? 1.0 / static_cast<double>(deviations) : 0.0;

  std::vector<std::vector<SparseEntry>> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    const StrategyProfile profile = game.index_profile(i);
    auto& row = rows[i];
    row.reserve(deviations + 1);
    double off = 0.0;
    for (const auto& nb : game.neighbors(profile)) {
      const PairwiseContest contest{nb.population, profile[nb.population],
                                    nb.profile[nb.population], profile};
      const ContestFitness f = contest_fitness(game, contest);
      const double rho =
          fixation_probability(f.mutant, f.resident, params.ranking_intensity,
                               params.population_size, params.payoff_tolerance);
      const double p = eta * rho;
      off += p;
      row.push_back({game.profile_index(nb.profile), p});
    }
    row.push_back({i, std::max(0.0, 1.0 - off)});
    std::sort(row.begin(), row.end(),
              [](const SparseEntry& a, const SparseEntry& b) {
                return a.column < b.column;
              });
  }
  return SparseMarkovChain(std::move(rows), eta);
}

// Fraction of structurally-zero entries of the transition matrix:
// 1 − |S| (1 + Σ_k(|S^k| − 1)) / |S|².
inline double sparsity(const MetaGame& game) {
  const double states = static_cast<double>(game.num_profiles());
  const double per_row = 1.0 + static_cast<double>(game.num_deviations());
  return 1.0 - states * per_row / (states * states);
}

// Dense single-population construction for symmetric two-player games:
// eta = 1/(n − 1) and rho from the explicit product of decrease/increase
// transition probabilities of the birth-death process. Independent of
// fixation_probability(); used to cross-check transition_matrix().
inline std::vector<std::vector<double>> single_population_matrix(
    const MetaGame& game, const EvoParams& params) {
  params.validate();
  if (!game.single_population()) {
    throw Error(ErrorCode::kInvalidParameter,
                "single-population construction needs a symmetric 2-player game");
  }
  const std::size_t n = game.num_strategies(0);
  const int m = params.population_size;
  const double alpha = params.ranking_intensity;
  std::vector<std::vector<double>> c(n, std::vector<double>(n, 0.0));
  if (n == 1) {
    c[0][0] = 1.0;
    return c;
  }
  const double eta = 1.0 / static_cast<double>(n - 1);
  for (std::size_t sigma = 0; sigma < n; ++sigma) {
    double off = 0.0;
    for (std::size_t tau = 0; tau < n; ++tau) {
      if (tau == sigma) continue;
      const double f_tau = game.payoff(0, {tau, sigma});
      const double f_sigma = game.payoff(0, {sigma, tau});
      double sum = 0.0, prod = 1.0;
      for (int l = 1; l <= m - 1; ++l) {
        const double pairs = static_cast<double>(l) * (m - l) /
                             (static_cast<double>(m) * (m - 1));
        const double decrease =
            pairs / (1.0 + std::exp(alpha * (f_tau - f_sigma)));
        const double increase =
            pairs / (1.0 + std::exp(-alpha * (f_tau - f_sigma)));
        prod *= decrease / increase;
        sum += prod;
      }
      const double rho =
          payoffs_equal(f_tau, f_sigma, params.payoff_tolerance)
              ? 1.0 / m
              : 1.0 / (1.0 + sum);
      c[sigma][tau] = eta * rho;
      off += c[sigma][tau];
    }
    c[sigma][sigma] = 1.0 - off;
  }
  return c;
}

// Coordinate list "row,col,prob" with a header line.
inline std::string to_coo_csv(const SparseMarkovChain& chain) {
  std::ostringstream out;
  out.precision(17);
  out << "row,col,prob\n";
  for (std::size_t i = 0; i < chain.num_states(); ++i) {
    for (const auto& e : chain.row(i)) {
      out << i << ',' << e.column << ',' << e.probability << '\n';
    }
  }
  return out.str();
}

}  // namespace alpharank
