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
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "alpharank/error.hpp"

namespace alpharank {

// Two payoffs count as equal when they differ by less than this fraction of
// max(1, |a|, |b|). Shared by the evolutionary model and the response graph
// so both agree on the structure of a game.
inline constexpr double kDefaultPayoffTolerance = 1e-12;

inline bool payoffs_equal(double a, double b,
                          double tol = kDefaultPayoffTolerance) {
  return std::abs(a - b) <
         tol * std::max({1.0, std::abs(a), std::abs(b)});
}

// One pure strategy per evaluated population. For a symmetric two-player
// game evaluated as a single population this has length 1.
struct StrategyProfile {
  std::vector<std::size_t> strategies;

  StrategyProfile() = default;
  explicit StrategyProfile(std::vector<std::size_t> s)
      : strategies(std::move(s)) {}
  StrategyProfile(std::initializer_list<std::size_t> s) : strategies(s) {}

  std::size_t size() const { return strategies.size(); }
  std::size_t operator[](std::size_t k) const { return strategies[k]; }
  std::size_t& operator[](std::size_t k) { return strategies[k]; }
  friend bool operator==(const StrategyProfile&,
                         const StrategyProfile&) = default;
};

struct Neighbor {
  std::size_t population;
  StrategyProfile profile;
};

// A K-player normal-form meta-game.
//
// Payoffs are stored per player as flat row-major tensors with player 0 the
// most significant axis. A symmetric game keeps a single tensor M with
// M^k(s) = M(s with positions 0 and k swapped).
//
// Evaluation populations: a symmetric two-player game is evaluated with a
// single population whose states are strategies. Every other game uses one
// population per player. Profiles passed to profile_index(), neighbors() and
// the evolutionary modules are population profiles; payoff() takes a full
// K-player game profile.
class MetaGame {
 public:
  // Validates shapes, finiteness, and (if declared) symmetry.
  //
  // For a symmetric game `strategy_labels` and `payoffs` may hold either one
  // entry (stored form) or K entries, which are then verified and collapsed.
  static MetaGame create(std::size_t num_players,
                         std::vector<std::vector<std::string>> strategy_labels,
                         std::vector<std::vector<double>> payoffs,
                         bool symmetric) {
    if (num_players == 0) {
      throw Error(ErrorCode::kShapeMismatch, "game needs at least one player");
    }
    const std::size_t expected_tables = symmetric ? 1 : num_players;
    if (strategy_labels.size() != expected_tables &&
        strategy_labels.size() != num_players) {
      throw Error(ErrorCode::kShapeMismatch,
                  "expected " + std::to_string(expected_tables) +
                      " strategy label lists, got " +
                      std::to_string(strategy_labels.size()));
    }
    if (payoffs.size() != expected_tables && payoffs.size() != num_players) {
      throw Error(ErrorCode::kShapeMismatch,
                  "expected " + std::to_string(expected_tables) +
                      " payoff tensors, got " + std::to_string(payoffs.size()));
    }
    for (const auto& labels : strategy_labels) {
      if (labels.empty()) {
        throw Error(ErrorCode::kShapeMismatch, "empty strategy set");
      }
    }

    MetaGame g;
    g.num_players_ = num_players;
    g.symmetric_ = symmetric;

    if (symmetric) {
      for (const auto& labels : strategy_labels) {
        if (labels != strategy_labels.front()) {
          throw Error(ErrorCode::kSymmetryViolation,
                      "symmetric game needs identical strategy sets");
        }
      }
      g.game_shape_.assign(num_players, strategy_labels.front().size());
    } else {
      for (const auto& labels : strategy_labels) {
        g.game_shape_.push_back(labels.size());
      }
    }
    g.game_strides_ = strides_for(g.game_shape_);
    const std::size_t cells =
        std::accumulate(g.game_shape_.begin(), g.game_shape_.end(),
                        std::size_t{1}, std::multiplies<>());

    for (std::size_t k = 0; k < payoffs.size(); ++k) {
      if (payoffs[k].size() != cells) {
        throw Error(ErrorCode::kShapeMismatch,
                    "payoff tensor " + std::to_string(k) + " has " +
                        std::to_string(payoffs[k].size()) +
                        " entries, expected " + std::to_string(cells));
      }
      for (double v : payoffs[k]) {
        if (!std::isfinite(v)) {
          throw Error(ErrorCode::kNonFinitePayoff,
                      "payoff tensor " + std::to_string(k) +
                          " contains a non-finite entry");
        }
      }
    }

    if (symmetric) {
      g.labels_ = {std::move(strategy_labels.front())};
      g.payoffs_ = {payoffs.front()};
      g.verify_symmetry(payoffs);
    } else {
      g.labels_ = std::move(strategy_labels);
      g.payoffs_ = std::move(payoffs);
    }

    if (g.single_population()) {
      g.pop_shape_ = {g.game_shape_.front()};
    } else {
      g.pop_shape_ = g.game_shape_;
    }
    g.pop_strides_ = strides_for(g.pop_shape_);
    g.num_profiles_ = std::accumulate(g.pop_shape_.begin(), g.pop_shape_.end(),
                                      std::size_t{1}, std::multiplies<>());
    return g;
  }

  std::size_t num_players() const { return num_players_; }
  bool symmetric() const { return symmetric_; }
  // True when the game is evaluated with one population (symmetric, K = 2).
  bool single_population() const { return symmetric_ && num_players_ == 2; }

  const std::vector<std::size_t>& game_shape() const { return game_shape_; }
  std::size_t num_populations() const { return pop_shape_.size(); }
  const std::vector<std::size_t>& population_sizes() const {
    return pop_shape_;
  }
  std::size_t num_strategies(std::size_t population) const {
    return pop_shape_.at(population);
  }
  // Number of evaluated profiles (states of the evolutionary chain).
  std::size_t num_profiles() const { return num_profiles_; }

  // Σ_k (|S^k| − 1) over evaluated populations.
  std::size_t num_deviations() const {
    std::size_t total = 0;
    for (std::size_t n : pop_shape_) total += n - 1;
    return total;
  }

  // Labels of player (or population) k. Symmetric games share one list.
  const std::vector<std::string>& labels(std::size_t k) const {
    return symmetric_ ? labels_.front() : labels_.at(k);
  }
  // Stored form: one list for symmetric games, K otherwise.
  const std::vector<std::vector<std::string>>& stored_labels() const {
    return labels_;
  }
  const std::vector<std::vector<double>>& stored_payoffs() const {
    return payoffs_;
  }

  // M^k at a full K-player game profile.
  double payoff(std::size_t k, std::span<const std::size_t> game_profile) const {
    if (k >= num_players_) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "player " + std::to_string(k) + " out of range");
    }
    check_game_profile(game_profile);
    if (!symmetric_) return payoffs_[k][flat_game_index(game_profile)];
    if (k == 0) return payoffs_[0][flat_game_index(game_profile)];
    std::vector<std::size_t> swapped(game_profile.begin(), game_profile.end());
    std::swap(swapped[0], swapped[k]);
    return payoffs_[0][flat_game_index(swapped)];
  }
  double payoff(std::size_t k, std::initializer_list<std::size_t> p) const {
    return payoff(k, std::span<const std::size_t>(p.begin(), p.size()));
  }

  std::size_t profile_index(const StrategyProfile& profile) const {
    check_profile(profile);
    std::size_t idx = 0;
    for (std::size_t k = 0; k < profile.size(); ++k) {
      idx += profile[k] * pop_strides_[k];
    }
    return idx;
  }

  StrategyProfile index_profile(std::size_t index) const {
    if (index >= num_profiles_) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "profile index " + std::to_string(index) + " >= " +
                      std::to_string(num_profiles_));
    }
    StrategyProfile p;
    p.strategies.resize(pop_shape_.size());
    for (std::size_t k = 0; k < pop_shape_.size(); ++k) {
      p[k] = index / pop_strides_[k];
      index %= pop_strides_[k];
    }
    return p;
  }

  // All profiles reachable by changing exactly one population's strategy,
  // ordered by population then by strategy index.
  std::vector<Neighbor> neighbors(const StrategyProfile& profile) const {
    check_profile(profile);
    std::vector<Neighbor> out;
    out.reserve(num_deviations());
    for (std::size_t k = 0; k < profile.size(); ++k) {
      for (std::size_t s = 0; s < pop_shape_[k]; ++s) {
        if (s == profile[k]) continue;
        StrategyProfile next = profile;
        next[k] = s;
        out.push_back({k, std::move(next)});
      }
    }
    return out;
  }

  // "R" for single-population games, "(O,M)" otherwise.
  std::string profile_label(const StrategyProfile& profile) const {
    check_profile(profile);
    if (single_population()) return labels(0)[profile[0]];
    std::string out = "(";
    for (std::size_t k = 0; k < profile.size(); ++k) {
      if (k) out += ",";
      out += labels(k)[profile[k]];
    }
    return out + ")";
  }

  // Full K-player game profile for a two-strategy contest in population
  // `population`. Single-population games pit `strategy` against `opponent`.
  std::vector<std::size_t> game_profile_for(const StrategyProfile& background,
                                            std::size_t population,
                                            std::size_t strategy,
                                            std::size_t opponent) const {
    if (single_population()) return {strategy, opponent};
    std::vector<std::size_t> out = background.strategies;
    out[population] = strategy;
    return out;
  }

  // Equivalent asymmetric game with one tensor per player.
  MetaGame expanded() const {
    if (!symmetric_) return *this;
    std::vector<std::vector<std::string>> labels(num_players_, labels_.front());
    std::vector<std::vector<double>> tensors(num_players_);
    const std::size_t cells = payoffs_.front().size();
    std::vector<std::size_t> profile(num_players_);
    for (std::size_t k = 0; k < num_players_; ++k) {
      tensors[k].resize(cells);
      for (std::size_t i = 0; i < cells; ++i) {
        unflatten(i, game_strides_, profile);
        tensors[k][i] = payoff(k, profile);
      }
    }
    return create(num_players_, std::move(labels), std::move(tensors), false);
  }

  friend bool operator==(const MetaGame& a, const MetaGame& b) {
    return a.num_players_ == b.num_players_ && a.symmetric_ == b.symmetric_ &&
           a.labels_ == b.labels_ && a.payoffs_ == b.payoffs_;
  }

 private:
  MetaGame() = default;

  static std::vector<std::size_t> strides_for(
      const std::vector<std::size_t>& shape) {
    std::vector<std::size_t> strides(shape.size(), 1);
    for (std::size_t k = shape.size(); k-- > 1;) {
      strides[k - 1] = strides[k] * shape[k];
    }
    return strides;
  }

  static void unflatten(std::size_t index,
                        const std::vector<std::size_t>& strides,
                        std::vector<std::size_t>& out) {
    for (std::size_t k = 0; k < strides.size(); ++k) {
      out[k] = index / strides[k];
      index %= strides[k];
    }
  }

  std::size_t flat_game_index(std::span<const std::size_t> p) const {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < p.size(); ++k) idx += p[k] * game_strides_[k];
    return idx;
  }

  void check_game_profile(std::span<const std::size_t> p) const {
    if (p.size() != num_players_) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "game profile has " + std::to_string(p.size()) +
                      " entries, expected " + std::to_string(num_players_));
    }
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (p[k] >= game_shape_[k]) {
        throw Error(ErrorCode::kIndexOutOfRange,
                    "strategy " + std::to_string(p[k]) + " out of range for player " +
                        std::to_string(k));
      }
    }
  }

  void check_profile(const StrategyProfile& p) const {
    if (p.size() != pop_shape_.size()) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "profile has " + std::to_string(p.size()) +
                      " entries, expected " + std::to_string(pop_shape_.size()));
    }
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (p[k] >= pop_shape_[k]) {
        throw Error(ErrorCode::kIndexOutOfRange,
                    "strategy " + std::to_string(p[k]) +
                        " out of range for population " + std::to_string(k));
      }
    }
  }

  // Exhaustive check: M^0 must be invariant under permutations of the
  // opponents, and any explicitly supplied M^k must equal M^0 with positions
  // 0 and k swapped.
  void verify_symmetry(const std::vector<std::vector<double>>& supplied) const {
    const auto& base = payoffs_.front();
    std::vector<std::size_t> profile(num_players_), perm(num_players_);
    for (std::size_t i = 0; i < base.size(); ++i) {
      unflatten(i, game_strides_, profile);
      if (num_players_ > 2) {
        perm = profile;
        std::sort(perm.begin() + 1, perm.end());
        do {
          if (!payoffs_equal(base[i], base[flat_game_index(perm)])) {
            throw Error(ErrorCode::kSymmetryViolation,
                        "payoff depends on opponent order");
          }
        } while (std::next_permutation(perm.begin() + 1, perm.end()));
      }
      for (std::size_t k = 1; k < supplied.size(); ++k) {
        perm = profile;
        std::swap(perm[0], perm[k]);
        if (!payoffs_equal(supplied[k][i], base[flat_game_index(perm)])) {
          throw Error(ErrorCode::kSymmetryViolation,
                      "payoff of player " + std::to_string(k) +
                          " is not the mirrored payoff of player 0");
        }
      }
    }
  }

  std::size_t num_players_ = 0;
  bool symmetric_ = false;
  std::vector<std::vector<std::string>> labels_;
  std::vector<std::vector<double>> payoffs_;
  std::vector<std::size_t> game_shape_, game_strides_;
  std::vector<std::size_t> pop_shape_, pop_strides_;
  std::size_t num_profiles_ = 0;
};

// Symmetric two-player meta-game from an N×N win-rate table. Payoffs are the
// raw win rates; no rescaling is applied.
inline MetaGame from_winrate_matrix(
    std::vector<std::string> labels,
    const std::vector<std::vector<double>>& matrix) {
  const std::size_t n = matrix.size();
  if (n == 0) throw Error(ErrorCode::kNotSquare, "empty win-rate matrix");
  for (const auto& row : matrix) {
    if (row.size() != n) {
      throw Error(ErrorCode::kNotSquare, "win-rate matrix is not square");
    }
  }
  if (labels.size() != n) {
    throw Error(ErrorCode::kShapeMismatch,
                "expected " + std::to_string(n) + " labels, got " +
                    std::to_string(labels.size()));
  }
  std::vector<double> flat;
  flat.reserve(n * n);
  for (const auto& row : matrix) {
    for (double v : row) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw Error(ErrorCode::kOutOfRangeEntry,
                    "win rate " + std::to_string(v) + " outside [0,1]");
      }
      flat.push_back(v);
    }
  }
  return MetaGame::create(2, {std::move(labels)}, {std::move(flat)}, true);
}

}  // namespace alpharank
