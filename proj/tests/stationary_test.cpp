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

#include "alpharank/stationary.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "alpharank/evodyn.hpp"
#include "alpharank/games.hpp"
#include "oracles.hpp"

namespace alpharank {
namespace {

SparseMarkovChain chain_for(const MetaGame& g, double alpha, int m = 50) {
  EvoParams p;
  p.population_size = m;
  p.ranking_intensity = alpha;
  return transition_matrix(g, p);
}

TEST(StationaryTest, RockPaperScissorsIsUniform) {
  for (double a : {0.0, 0.1, 1.0, 10.0, 100.0}) {
    const auto pi = stationary_distribution(chain_for(games::rock_paper_scissors(), a));
    for (double v : pi.probabilities) EXPECT_NEAR(v, 1.0 / 3.0, 1e-6);
    EXPECT_LE(pi.residual, 1e-10);
  }
}

TEST(StationaryTest, BattleOfTheSexesConcentratesOnCoordination) {
  const auto pi = stationary_distribution(chain_for(games::battle_of_the_sexes(), 0.1));
  // Profiles (O,O), (O,M), (M,O), (M,M).
  EXPECT_NEAR(pi.probabilities[0], 0.5, 1e-3);
  EXPECT_NEAR(pi.probabilities[3], 0.5, 1e-3);
  EXPECT_LT(pi.probabilities[1], 1e-3);
  EXPECT_LT(pi.probabilities[2], 1e-3);
}

TEST(StationaryTest, DoublyStochasticTwoState) {
  const auto pi = stationary_distribution(SparseMarkovChain::from_dense({{0.5, 0.5}, {0.5, 0.5}}));
  EXPECT_NEAR(pi.probabilities[0], 0.5, 1e-15);
  EXPECT_NEAR(pi.probabilities[1], 0.5, 1e-15);
}

TEST(StationaryTest, Irreducibility) {
  EXPECT_FALSE(is_irreducible(SparseMarkovChain::from_dense({{1, 0}, {0, 1}})));
  EXPECT_TRUE(is_irreducible(SparseMarkovChain::from_dense({{0, 1}, {1, 0}})));
  EXPECT_TRUE(is_irreducible(chain_for(games::battle_of_the_sexes(), 1.0)));
  EXPECT_TRUE(is_irreducible(chain_for(games::rock_paper_scissors(), 0.0)));
}

TEST(StationaryTest, ReducibleChainRejected) {
  try {
    stationary_distribution(SparseMarkovChain::from_dense({{1, 0}, {0, 1}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kReducibleChain);
  }
}

TEST(StationaryTest, TransientStatesGetNoMass) {
  // State 0 leaks into the closed class {1, 2}.
  const auto c = SparseMarkovChain::from_dense({{0.5, 0.5, 0.0}, {0.0, 0.3, 0.7}, {0.0, 0.6, 0.4}});
  EXPECT_FALSE(is_irreducible(c));
  const auto pi = stationary_distribution(c);
  EXPECT_DOUBLE_EQ(pi.probabilities[0], 0.0);
  EXPECT_NEAR(pi.probabilities[1], 0.6 / 1.3, 1e-14);
  EXPECT_NEAR(pi.probabilities[2], 0.7 / 1.3, 1e-14);
}

TEST(StationaryTest, PeriodicChainConvergesWithDamping) {
  SolverOptions opts;
  opts.method = SolveMethod::kPowerIteration;
  const auto pi = stationary_distribution(SparseMarkovChain::from_dense({{0, 1}, {1, 0}}), opts);
  EXPECT_EQ(pi.method, SolveMethod::kPowerIteration);
  EXPECT_NEAR(pi.probabilities[0], 0.5, 1e-12);
  EXPECT_LE(pi.residual, 1e-10);
}

TEST(StationaryTest, NoConvergenceReported) {
  SolverOptions opts;
  opts.method = SolveMethod::kPowerIteration;
  opts.max_iters = 3;
  try {
    stationary_distribution(
        SparseMarkovChain::from_dense({{0.99, 0.01}, {0.02, 0.98}}), opts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoConvergence);
  }
}

TEST(StationaryTest, MatchesDenseOracleOnRandomGames) {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 20; ++trial) {
    const MetaGame g = oracle::random_game(rng, oracle::random_shape(rng, 3, 4));
    // m = 10 keeps every fixation probability above the double underflow
    // threshold at alpha = 10, so the chain stays irreducible.
    for (double a : {0.1, 1.0, 10.0}) {
      const SparseMarkovChain c = chain_for(g, a, 10);
      ASSERT_TRUE(is_irreducible(c));
      const auto pi = stationary_distribution(c);
      const auto want = oracle::dense_stationary(c.to_dense());
      EXPECT_LE(pi.residual, 1e-10);
      double sum = 0.0;
      for (std::size_t i = 0; i < want.size(); ++i) {
        EXPECT_NEAR(pi.probabilities[i], want[i], 1e-8);
        EXPECT_GE(pi.probabilities[i], 0.0);
        sum += pi.probabilities[i];
      }
      EXPECT_NEAR(sum, 1.0, 1e-12);
    }
  }
}

TEST(StationaryTest, PowerIterationAgreesWithDirectSolve) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 5; ++trial) {
    const MetaGame g = oracle::random_game(rng, {3, 3});
    // Small m keeps the chain fast-mixing; at m = 50 moves between rival
    // sinks can be ~1e-21 and power iteration cannot settle.
    const SparseMarkovChain c = chain_for(g, 0.5, 5);
    SolverOptions power;
    power.method = SolveMethod::kPowerIteration;
    power.tol = 1e-11;
    SolverOptions direct;
    direct.method = SolveMethod::kDirect;
    const auto a = stationary_distribution(c, power);
    const auto b = stationary_distribution(c, direct);
    for (std::size_t i = 0; i < a.probabilities.size(); ++i) {
      EXPECT_NEAR(a.probabilities[i], b.probabilities[i], 1e-8);
    }
  }
}

TEST(StationaryTest, IndependentOfRowConstructionOrder) {
  std::mt19937_64 rng(8);
  const MetaGame g = oracle::random_game(rng, {3, 4});
  const auto dense = chain_for(g, 2.0).to_dense();
  // Relabel states by a permutation, solve, and map back.
  std::vector<std::size_t> perm(dense.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::vector<double>> permuted(dense.size(), std::vector<double>(dense.size()));
  for (std::size_t i = 0; i < dense.size(); ++i) {
    for (std::size_t j = 0; j < dense.size(); ++j) permuted[perm[i]][perm[j]] = dense[i][j];
  }
  const auto a = stationary_distribution(SparseMarkovChain::from_dense(dense));
  const auto b = stationary_distribution(SparseMarkovChain::from_dense(permuted));
  for (std::size_t i = 0; i < dense.size(); ++i) {
    EXPECT_NEAR(a.probabilities[i], b.probabilities[perm[i]], 1e-13);
  }
  const auto again = stationary_distribution(SparseMarkovChain::from_dense(dense));
  EXPECT_EQ(a.probabilities, again.probabilities);
}

TEST(StationaryTest, SolveMethodNames) {
  EXPECT_EQ(solve_method_name(SolveMethod::kDirect), "direct-solve");
  EXPECT_EQ(solve_method_name(SolveMethod::kPowerIteration), "power-iteration");
}

}  // namespace
}  // namespace alpharank
