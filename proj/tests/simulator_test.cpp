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

#include "alpharank/simulator.hpp"

#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "alpharank/games.hpp"
#include "alpharank/stationary.hpp"

namespace alpharank {
namespace {

TEST(Xoshiro256Test, MatchesReferenceSequence) {
  // Reference values from an independent implementation of splitmix64
  // seeding followed by xoshiro256**.
  Xoshiro256 rng(1);
  EXPECT_EQ(rng.next(), 0xb3f2af6d0fc710c5ULL);
  EXPECT_EQ(rng.next(), 0x853b559647364ceaULL);
  EXPECT_EQ(rng.next(), 0x92f89756082a4514ULL);
}

TEST(Xoshiro256Test, UniformIndexInRangeAndUnbiased) {
  Xoshiro256 rng(42);
  std::vector<int> counts(7, 0);
  const int draws = 700000;
  for (int i = 0; i < draws; ++i) {
    const auto v = rng.uniform_index(7);
    ASSERT_LT(v, 7u);
    ++counts[v];
  }
  for (int c : counts) EXPECT_NEAR(c, draws / 7.0, 5 * std::sqrt(draws / 7.0));
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(SimConfigTest, Validation) {
  SimConfig c;
  EXPECT_NO_THROW(c.validate());
  c.mutation_rate = 0.0;
  EXPECT_THROW(c.validate(), Error);
  c.mutation_rate = 0.2;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.population_size = 1;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.steps = 0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(SimulateTest, DeterministicForFixedSeed) {
  SimConfig c;
  c.population_size = 10;
  c.alpha = 1.0;
  c.steps = 200000;
  c.seed = 5;
  const auto a = simulate(games::rock_paper_scissors(), c);
  const auto b = simulate(games::rock_paper_scissors(), c);
  EXPECT_EQ(a.occupancy, b.occupancy);
  EXPECT_EQ(a.fixation_events, b.fixation_events);
  EXPECT_GT(a.fixation_events, 0u);
  c.seed = 6;
  EXPECT_NE(simulate(games::rock_paper_scissors(), c).occupancy, a.occupancy);
}

TEST(SimulateTest, NeutralRockPaperScissorsIsUniform) {
  SimConfig c;
  c.population_size = 20;
  c.alpha = 0.0;
  c.mutation_rate = 1e-3;
  c.steps = 1'000'000;
  c.seed = 1;
  const auto r = simulate(games::rock_paper_scissors(), c);
  EXPECT_NEAR(std::accumulate(r.occupancy.begin(), r.occupancy.end(), 0.0), 1.0, 1e-12);
  // Returns to the same profile after a lost mutant are correlated with the
  // run before them; the independent units are the fixation epochs.
  const double p = 1.0 / 3.0;
  const double epochs = static_cast<double>(r.fixation_events + 1);
  const double sigma = std::sqrt(p * (1 - p) / epochs);
  for (double v : r.occupancy) EXPECT_NEAR(v, p, 3 * sigma) << "epochs=" << epochs;
  EXPECT_GT(r.fixation_events, 10u);
  EXPECT_GT(r.mixed_fraction, 0.0);
  EXPECT_LT(r.mixed_fraction, 1.0);
}

TEST(SimulateTest, DegenerateGameOccupiesItsOnlyState) {
  SimConfig c;
  c.steps = 1000;
  const auto r = simulate(from_winrate_matrix({"solo"}, {{0.5}}), c);
  ASSERT_EQ(r.occupancy.size(), 1u);
  EXPECT_DOUBLE_EQ(r.occupancy[0], 1.0);
  EXPECT_EQ(r.fixation_events, 0u);
}

TEST(SimulateTest, MultiPopulationFavoursCoordination) {
  SimConfig c;
  c.population_size = 10;
  c.alpha = 2.0;
  c.steps = 2'000'000;
  const auto r = simulate(games::battle_of_the_sexes(), c);
  EXPECT_GT(r.occupancy[0] + r.occupancy[3], 0.95);
  EXPECT_NEAR(std::accumulate(r.occupancy.begin(), r.occupancy.end(), 0.0), 1.0, 1e-12);
}

TEST(EmpiricalFixationTest, Neutral) {
  const auto e = empirical_fixation(0.0, 0.0, 10, 1.0, 100000, 3);
  EXPECT_NEAR(e.estimate, 0.1, 3 * std::sqrt(0.1 * 0.9 / 100000));
  EXPECT_EQ(e.trials, 100000u);
}

TEST(EmpiricalFixationTest, MatchesClosedForm) {
  const double want = fixation_probability(1.0, 0.0, 1.0, 4);
  const auto e = empirical_fixation(1.0, 0.0, 4, 1.0, 100000, 4);
  EXPECT_NEAR(e.estimate, want, 3 * std::sqrt(want * (1 - want) / 100000));
  EXPECT_NEAR(e.stderr_, std::sqrt(e.estimate * (1 - e.estimate) / 100000), 1e-15);
}

TEST(EmpiricalFixationTest, StrongSelectionAgainstMutant) {
  const auto e = empirical_fixation(0.0, 1.0, 10, 50.0, 10000, 5);
  EXPECT_EQ(e.fixations, 0u);
}

TEST(EmpiricalFixationTest, GameContestOverload) {
  // RPS: Paper invading Rock wins every encounter.
  const MetaGame rps = games::rock_paper_scissors();
  const auto e = empirical_fixation(rps, {0, 0, 1, {{0}}}, 10, 1.0, 20000, 6);
  const double want = fixation_probability(1.0, -1.0, 1.0, 10);
  EXPECT_NEAR(e.estimate, want, 4 * std::sqrt(want * (1 - want) / 20000));
}

TEST(EmpiricalFixationTest, InvalidInput) {
  EXPECT_THROW(empirical_fixation(0, 0, 1, 1.0, 10, 1), Error);
  EXPECT_THROW(empirical_fixation(0, 0, 5, 1.0, 0, 1), Error);
}

}  // namespace
}  // namespace alpharank
