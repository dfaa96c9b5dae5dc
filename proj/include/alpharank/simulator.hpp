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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "alpharank/error.hpp"
#include "alpharank/evodyn.hpp"
#include "alpharank/metagame.hpp"

// Individual-level stochastic copy/mutate process. Serves as an empirical
// check on fixation probabilities and on the stationary distribution.

namespace alpharank {

// xoshiro256** seeded through splitmix64. Integer draws use Lemire's
// multiply-shift with rejection, so sequences are identical on every
// platform.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed) {
    for (auto& s : state_) {
      seed += 0x9e3779b97f4a7c15ULL;
      std::uint64_t z = seed;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      s = z ^ (z >> 31);
    }
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform integer in [0, n), n >= 1.
  std::uint64_t uniform_index(std::uint64_t n) {
    unsigned __int128 prod = static_cast<unsigned __int128>(next()) * n;
    std::uint64_t low = static_cast<std::uint64_t>(prod);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        prod = static_cast<unsigned __int128>(next()) * n;
        low = static_cast<std::uint64_t>(prod);
      }
    }
    return static_cast<std::uint64_t>(prod >> 64);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t state_[4];
};

struct SimConfig {
  int population_size = 50;
  double alpha = 0.0;
  // Stands in for the mu -> 0 limit of the analytic model.
  double mutation_rate = 1e-3;
  std::uint64_t steps = 1'000'000;
  std::uint64_t seed = 1;

  void validate() const {
    if (population_size < 2) {
      throw Error(ErrorCode::kInvalidParameter, "population size must be >= 2");
    }
    if (!std::isfinite(alpha) || alpha < 0.0) {
      throw Error(ErrorCode::kInvalidParameter, "alpha must be finite and >= 0");
    }
    if (!(mutation_rate > 0.0 && mutation_rate <= 0.1)) {
      throw Error(ErrorCode::kInvalidParameter, "mutation rate must lie in (0, 0.1]");
    }
    if (steps < 1) throw Error(ErrorCode::kInvalidParameter, "steps must be >= 1");
  }
};

struct OccupancyReport {
  // Share of monomorphic time spent in each profile (sums to 1).
  std::vector<double> occupancy;
  // Arrivals at a monomorphic profile different from the previous one.
  std::uint64_t fixation_events = 0;
  // Number of distinct monomorphic visits (runs), including the start.
  std::uint64_t sojourns = 0;
  std::uint64_t monomorphic_steps = 0;
  // Share of all events that ended in a non-monomorphic state.
  double mixed_fraction = 0.0;
};

// Each event picks a population uniformly and two of its individuals without
// replacement. The first mutates to a uniformly chosen other strategy with
// probability mu, otherwise copies the second with the Fermi probability.
// All populations start monomorphic at strategy 0.
inline OccupancyReport simulate(const MetaGame& game, const SimConfig& cfg) {
  cfg.validate();
  const std::size_t pops = game.num_populations();
  const int m = cfg.population_size;
  Xoshiro256 rng(cfg.seed);

  std::vector<std::vector<int>> counts(pops);
  std::vector<int> present(pops, 1);
  for (std::size_t k = 0; k < pops; ++k) {
    counts[k].assign(game.num_strategies(k), 0);
    counts[k][0] = m;
  }

  // Expected payoff to `strategy` in population k against the current
  // composition of every other population.
  std::vector<std::size_t> game_profile(game.num_players());
  auto expected_fitness = [&](std::size_t k, std::size_t strategy) {
    StrategyProfile p;
    p.strategies.assign(pops, 0);
    double total = 0.0;
    // Odometer over strategies present in the other populations.
    std::vector<std::size_t> cursor(pops, 0);
    auto advance = [&](std::size_t c) {
      while (cursor[c] < counts[c].size() && counts[c][cursor[c]] == 0) ++cursor[c];
    };
    for (std::size_t c = 0; c < pops; ++c) {
      if (c != k) advance(c);
    }
    while (true) {
      double w = 1.0;
      for (std::size_t c = 0; c < pops; ++c) {
        if (c == k) continue;
        p[c] = cursor[c];
        w *= static_cast<double>(counts[c][cursor[c]]) / m;
      }
      p[k] = strategy;
      total += w * game.payoff(k, p.strategies);
      std::size_t c = 0;
      for (; c < pops; ++c) {
        if (c == k) continue;
        ++cursor[c];
        advance(c);
        if (cursor[c] < counts[c].size()) break;
        cursor[c] = 0;
        advance(c);
      }
      if (c == pops) break;
    }
    return total;
  };

  auto draw = [&](std::size_t k, int skip) {
    // skip >= 0 removes one individual of that strategy from the urn.
    const int total = m - (skip >= 0 ? 1 : 0);
    std::uint64_t r = rng.uniform_index(static_cast<std::uint64_t>(total));
    for (std::size_t s = 0; s < counts[k].size(); ++s) {
      const int c = counts[k][s] - (static_cast<int>(s) == skip ? 1 : 0);
      if (r < static_cast<std::uint64_t>(c)) return s;
      r -= static_cast<std::uint64_t>(c);
    }
    return counts[k].size() - 1;
  };

  auto move = [&](std::size_t k, std::size_t from, std::size_t to) {
    if (--counts[k][from] == 0) --present[k];
    if (counts[k][to]++ == 0) ++present[k];
  };

  OccupancyReport report;
  std::vector<std::uint64_t> visits(game.num_profiles(), 0);
  std::uint64_t mixed = 0;
  bool have_last = false, in_mono = true;
  std::size_t last_mono = 0;

  for (std::uint64_t step = 0; step < cfg.steps; ++step) {
    const std::size_t k = rng.uniform_index(pops);
    const std::size_t tau = draw(k, -1);
    const std::size_t sigma = draw(k, static_cast<int>(tau));
    if (rng.bernoulli(cfg.mutation_rate)) {
      const std::size_t n = counts[k].size();
      if (n > 1) {
        std::size_t next = rng.uniform_index(n - 1);
        if (next >= tau) ++next;
        move(k, tau, next);
      }
    } else if (tau != sigma) {
      double f_tau, f_sigma;
      if (game.single_population()) {
        f_tau = game.payoff(0, {tau, sigma});
        f_sigma = game.payoff(0, {sigma, tau});
      } else {
        f_tau = expected_fitness(k, tau);
        f_sigma = expected_fitness(k, sigma);
      }
      if (rng.bernoulli(fermi_copy_prob(f_tau, f_sigma, cfg.alpha))) {
        move(k, tau, sigma);
      }
    }

    bool mono = true;
    for (int c : present) mono = mono && c == 1;
    if (mono) {
      StrategyProfile p;
      p.strategies.resize(pops);
      for (std::size_t c = 0; c < pops; ++c) {
        for (std::size_t s = 0; s < counts[c].size(); ++s) {
          if (counts[c][s]) p[c] = s;
        }
      }
      const std::size_t idx = game.profile_index(p);
      ++visits[idx];
      if (!in_mono || !have_last) ++report.sojourns;
      if (have_last && idx != last_mono) ++report.fixation_events;
      last_mono = idx;
      have_last = true;
      in_mono = true;
    } else {
      ++mixed;
      in_mono = false;
    }
  }

  report.monomorphic_steps = cfg.steps - mixed;
  report.mixed_fraction = static_cast<double>(mixed) / static_cast<double>(cfg.steps);
  report.occupancy.assign(game.num_profiles(), 0.0);
  if (report.monomorphic_steps > 0) {
    for (std::size_t i = 0; i < visits.size(); ++i) {
      report.occupancy[i] = static_cast<double>(visits[i]) /
                            static_cast<double>(report.monomorphic_steps);
    }
  }
  return report;
}

struct FixationEstimate {
  double estimate = 0.0;
  // Binomial standard error sqrt(p (1 − p) / trials).
  double stderr_ = 0.0;
  std::uint64_t fixations = 0;
  std::uint64_t trials = 0;
};

inline constexpr std::uint64_t kMaxFixationSteps = 100'000'000;

// Runs `trials` independent absorptions of one tau mutant among m − 1 sigma
// residents (no mutation) and reports the fraction that fixate.
inline FixationEstimate empirical_fixation(double f_tau, double f_sigma, int m,
                                           double alpha, std::uint64_t trials,
                                           std::uint64_t seed) {
  if (m < 2) throw Error(ErrorCode::kInvalidParameter, "population size must be >= 2");
  if (trials < 1) throw Error(ErrorCode::kInvalidParameter, "trials must be >= 1");
  Xoshiro256 rng(seed);
  const double mutant_copies = fermi_copy_prob(f_tau, f_sigma, alpha);
  const double resident_copies = fermi_copy_prob(f_sigma, f_tau, alpha);
  const auto um = static_cast<std::uint64_t>(m);

  FixationEstimate out;
  out.trials = trials;
  for (std::uint64_t t = 0; t < trials; ++t) {
    std::uint64_t mutants = 1;
    std::uint64_t steps = 0;
    while (mutants > 0 && mutants < um) {
      if (++steps > kMaxFixationSteps) {
        throw Error(ErrorCode::kNoConvergence, "fixation trial exceeded step cap");
      }
      const bool first_is_mutant = rng.uniform_index(um) < mutants;
      const std::uint64_t left = first_is_mutant ? mutants - 1 : mutants;
      const bool second_is_mutant = rng.uniform_index(um - 1) < left;
      if (first_is_mutant && !second_is_mutant) {
        if (rng.bernoulli(mutant_copies)) --mutants;
      } else if (!first_is_mutant && second_is_mutant) {
        if (rng.bernoulli(resident_copies)) ++mutants;
      }
    }
    if (mutants == um) ++out.fixations;
  }
  out.estimate = static_cast<double>(out.fixations) / static_cast<double>(trials);
  out.stderr_ = std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(trials));
  return out;
}

inline FixationEstimate empirical_fixation(const MetaGame& game,
                                           const PairwiseContest& contest, int m,
                                           double alpha, std::uint64_t trials,
                                           std::uint64_t seed) {
  const ContestFitness f = contest_fitness(game, contest);
  return empirical_fixation(f.mutant, f.resident, m, alpha, trials, seed);
}

}  // namespace alpharank
