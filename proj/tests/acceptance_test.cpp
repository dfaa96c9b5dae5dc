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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. The AlphaGo win-rate check runs only when the path to a
// user-supplied 7x7 CSV is given in ALPHARANK_ALPHAGO_CSV.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "alpharank/all.hpp"
#include "oracles.hpp"

namespace {

using namespace alpharank;

struct Outcome {
  bool passed = true;
  std::string detail;
};

// Records the first failing condition and keeps going.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && out_.passed) {
      out_.passed = false;
      out_.detail = what;
    }
  }
  void note(const std::string& s) {
    if (out_.passed) out_.detail = s;
  }
  Outcome result() const { return out_; }

 private:
  Outcome out_;
};

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), f, a, b);
  return buf;
}

int failures = 0;

void run_criterion(int id, const char* title, double budget_s,
                   const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0 && secs > budget_s) {
    o.passed = false;
    o.detail = fmt("took %.3f s, budget %.0f s", secs, budget_s);
  }
  if (!o.passed) ++failures;
  std::printf("[%s] %2d  %-34s %8.3f s  %s\n", o.passed ? "PASS" : "FAIL", id, title, secs,
              o.detail.c_str());
  std::fflush(stdout);
}

std::vector<std::size_t> support_of(const std::vector<double>& pi, double threshold) {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < pi.size(); ++i) {
    if (pi[i] > threshold) s.push_back(i);
  }
  return s;
}

Outcome rps_invariance() {
  Checker c;
  const MetaGame g = games::rock_paper_scissors();
  const SweepResult s = alpha_sweep(g, 50);
  double worst = 0.0;
  for (const auto& pt : s.points) {
    c.expect(pt.ok(), "sweep point failed: " + pt.error);
    if (!pt.ok()) continue;
    for (double v : pt.distribution->probabilities) worst = std::max(worst, std::abs(v - 1.0 / 3));
  }
  c.expect(worst <= 1e-6, fmt("max |pi - 1/3| = %.3g", worst));
  const RankingResult r = rank_profiles(g, s.points.back().distribution->probabilities,
                                        s.points.back().alpha, kDefaultTieTolerance);
  for (const auto& e : r.entries) {
    c.expect(e.rank == 1, "rank of " + e.label + " is not 1");
    c.expect(fmt("%.2f", e.score) == "0.33", "score of " + e.label + " is not 0.33");
  }
  c.note(fmt("30 grid points, max |pi - 1/3| = %.2g", worst));
  return c.result();
}

Outcome biased_rps() {
  Checker c;
  const SweepResult s = alpha_sweep(games::biased_rock_paper_scissors(), 50);
  double first_dev = 0.0, late_dev = 0.0, paper_alpha = -1.0;
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    const auto& pt = s.points[i];
    c.expect(pt.ok(), "sweep point failed");
    if (!pt.ok()) continue;
    const auto& pi = pt.distribution->probabilities;
    if (i == 0) {
      for (double v : pi) first_dev = std::max(first_dev, std::abs(v - 1.0 / 3));
    }
    if (pt.alpha >= 1e2) {
      for (double v : pi) late_dev = std::max(late_dev, std::abs(v - 1.0 / 3));
    } else if (i > 0 && pi[1] > pi[0] && pi[1] > pi[2] && paper_alpha < 0) {
      paper_alpha = pt.alpha;
    }
  }
  c.expect(first_dev <= 0.01, fmt("pi at alpha=1e-4 deviates %.3g from uniform", first_dev));
  c.expect(paper_alpha > 0, "Paper never has the largest mass at an intermediate alpha");
  c.expect(late_dev <= 1e-3, fmt("pi at alpha>=1e2 deviates %.3g from uniform", late_dev));
  c.note(fmt("Paper leads from alpha=%.4g; late deviation %.2g", paper_alpha, late_dev));
  return c.result();
}

Outcome battle_of_the_sexes() {
  Checker c;
  const MetaGame g = games::battle_of_the_sexes();
  const SweepResult s = alpha_sweep(g, 50);
  const auto last = s.last_valid_index();
  c.expect(last.has_value(), "no sweep point solved");
  if (!last) return c.result();
  const auto& pi = s.points[*last].distribution->probabilities;
  // (O,O)=0, (O,M)=1, (M,O)=2, (M,M)=3.
  c.expect(std::abs(pi[0] - 0.5) <= 1e-3 && std::abs(pi[3] - 0.5) <= 1e-3,
           fmt("diagonal masses %.6f / %.6f", pi[0], pi[3]));
  c.expect(pi[1] < 1e-3 && pi[2] < 1e-3, "off-diagonal mass not below 1e-3");
  const RankingResult r = rank_profiles(g, pi, s.points[*last].alpha, kDefaultTieTolerance);
  for (const auto& e : r.entries) {
    const bool diag = e.index == 0 || e.index == 3;
    c.expect(e.rank == (diag ? 1 : 2), "unexpected rank for " + e.label);
  }
  auto first_below = [&](std::size_t idx) {
    for (std::size_t i = 0; i <= *last; ++i) {
      if (s.points[i].distribution->probabilities[idx] < 1e-3) return s.points[i].alpha;
    }
    return -1.0;
  };
  const double mo = first_below(2), om = first_below(1);
  c.expect(mo > 0 && om > 0 && mo < om,
           fmt("(M,O) drops below 1e-3 at alpha=%.4g, (O,M) at %.4g", mo, om));
  c.note(fmt("largest solved alpha %.4g; (M,O) decays at %.4g", s.points[*last].alpha, mo) +
         fmt(", (O,M) at %.4g", om));
  return c.result();
}

Outcome fixation_closed_form() {
  Checker c;
  double worst = 0.0;
  int points = 0;
  for (double a : {0.0, 0.01, 0.1, 1.0, 10.0}) {
    for (int m : {2, 5, 50}) {
      for (int step = -100; step <= 100; ++step) {
        if (step == 0) continue;
        const double d = step * 0.05;
        const double got = fixation_probability(d, 0.0, a, m);
        const double want = oracle::fixation_sum(a, d, m);
        ++points;
        const double rel = std::abs(got - want) / std::max(std::abs(want), 2.2250738585072014e-308);
        worst = std::max(worst, rel);
        c.expect(oracle::close_relative(got, want, 1e-10),
                 fmt("alpha=%g d=%g", a, d) + " m=" + std::to_string(m));
      }
    }
  }
  c.note(std::to_string(points) + fmt(" grid points, max relative error %.2g", worst));
  return c.result();
}

Outcome sparsity_formula() {
  Checker c;
  std::vector<std::vector<std::string>> labels(6, {"a", "b", "c", "d"});
  const MetaGame six =
      MetaGame::create(6, labels, std::vector<std::vector<double>>(6, std::vector<double>(4096)),
                       false);
  const double sp = sparsity(six);
  c.expect(std::abs(sp - 0.9953) <= 5e-5, fmt("sparsity %.6f", sp));
  std::mt19937_64 rng(2026);
  for (int i = 0; i < 10; ++i) {
    const MetaGame g = oracle::random_game(rng, oracle::random_shape(rng, 3, 4));
    EvoParams p;
    p.ranking_intensity = 1.0;
    const SparseMarkovChain chain = transition_matrix(g, p);
    for (std::size_t s = 0; s < g.num_profiles(); ++s) {
      std::set<std::size_t> cols, want = {s};
      for (const auto& e : chain.row(s)) cols.insert(e.column);
      for (const auto& nb : g.neighbors(g.index_profile(s))) want.insert(g.profile_index(nb.profile));
      c.expect(cols == want, "nonzero pattern differs from neighbour structure");
    }
    const double n = static_cast<double>(g.num_profiles());
    c.expect(std::abs(1.0 - chain.nonzeros() / (n * n) - sparsity(g)) < 1e-15,
             "built matrix sparsity differs from formula");
  }
  c.note(fmt("K=6, |S^k|=4: %.6f; 10 random games match", sp));
  return c.result();
}

Outcome unique_stationary() {
  Checker c;
  std::mt19937_64 rng(17);
  double worst_res = 0.0, worst_diff = 0.0;
  for (int i = 0; i < 25; ++i) {
    const MetaGame g = oracle::random_game(rng, oracle::random_shape(rng, 3, 4));
    for (double a : {0.1, 1.0, 10.0}) {
      EvoParams p;
      p.ranking_intensity = a;
      const SparseMarkovChain chain = transition_matrix(g, p);
      c.expect(is_irreducible(chain), "chain not irreducible");
      const auto pi = stationary_distribution(chain);
      const auto want = oracle::dense_stationary(chain.to_dense());
      worst_res = std::max(worst_res, pi.residual);
      for (std::size_t s = 0; s < want.size(); ++s) {
        worst_diff = std::max(worst_diff, std::abs(pi.probabilities[s] - want[s]));
      }
    }
  }
  c.expect(worst_res <= 1e-10, fmt("residual %.3g", worst_res));
  c.expect(worst_diff <= 1e-8, fmt("oracle difference %.3g", worst_diff));
  c.note(fmt("max residual %.2g, max oracle difference %.2g", worst_res, worst_diff));
  return c.result();
}

Outcome edge_dynamics() {
  Checker c;
  double worst = 0.0;
  int points = 0;
  for (int xi = 0; xi < 10; ++xi) {
    for (int ai = 0; ai < 10; ++ai) {
      for (int di = 0; di < 10; ++di) {
        const double x = xi / 9.0;
        const double a = std::pow(10.0, -3.0 + ai * 5.0 / 9.0);
        const double d = -5.0 + di * (10.0 / 9.0);
        const double lhs = edge_mean_dynamics(d, 0.0, a, x);
        const double rhs = x * (1 - x) * (fermi_copy_prob(0.0, d, a) - fermi_copy_prob(d, 0.0, a));
        worst = std::max(worst, std::abs(lhs - rhs));
        ++points;
      }
    }
  }
  c.expect(points == 1000, "grid size");
  c.expect(worst <= 1e-12, fmt("max difference %.3g", worst));
  c.note(std::to_string(points) + fmt(" points, max difference %.2g", worst));
  return c.result();
}

Outcome mcc_limit() {
  Checker c;
  const std::pair<const char*, MetaGame> corpus[] = {
      {"RPS", games::rock_paper_scissors()},
      {"biased RPS", games::biased_rock_paper_scissors()},
      {"BoS", games::battle_of_the_sexes()},
      {"coordination", games::coordination()}};
  std::string summary;
  for (const auto& [name, g] : corpus) {
    const SweepResult s = alpha_sweep(g, 50);
    const auto last = s.last_valid_index();
    c.expect(last.has_value(), std::string(name) + ": no sweep point solved");
    if (!last) continue;
    const auto support = support_of(s.points[*last].distribution->probabilities, 1e-3);
    const MccSet mcc = mcc_chains(g, 1.0 / 50);
    c.expect(support == mcc.union_of_states(), std::string(name) + ": support != MCC union");
    const auto rep = check_limit_correspondence(g, 50, {10.0, 100.0, 1000.0});
    c.expect(rep.deviation_non_increasing(), std::string(name) + ": deviation increases");
    summary += std::string(summary.empty() ? "" : "; ") + name + " " +
               std::to_string(support.size()) + "/" + std::to_string(mcc.union_of_states().size());
  }
  c.note("support/MCC states: " + summary);
  return c.result();
}

Outcome simulator() {
  Checker c;
  const auto neutral = empirical_fixation(0.0, 0.0, 10, 1.0, 100000, 1);
  const double sn = std::sqrt(0.1 * 0.9 / 100000);
  c.expect(std::abs(neutral.estimate - 0.1) <= 3 * sn, fmt("neutral estimate %.5f", neutral.estimate));
  const double rho = fixation_probability(1.0, 0.0, 1.0, 4);
  const auto sel = empirical_fixation(1.0, 0.0, 4, 1.0, 100000, 2);
  const double ss = std::sqrt(rho * (1 - rho) / 100000);
  c.expect(std::abs(sel.estimate - rho) <= 3 * ss, fmt("selected estimate %.5f vs %.5f", sel.estimate, rho));

  const MetaGame rps = games::rock_paper_scissors();
  EvoParams p;
  p.population_size = 20;
  p.ranking_intensity = 1.0;
  const auto pi = stationary_distribution(transition_matrix(rps, p)).probabilities;
  SimConfig cfg;
  cfg.population_size = 20;
  cfg.alpha = 1.0;
  cfg.mutation_rate = 1e-3;
  cfg.steps = 10'000'000;
  cfg.seed = 1;
  const auto occ = simulate(rps, cfg);
  double worst = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i) worst = std::max(worst, std::abs(occ.occupancy[i] - pi[i]));
  c.expect(worst <= 0.02, fmt("occupancy deviates %.4f from pi", worst));
  c.note(fmt("neutral %.4f, m=4 %.4f", neutral.estimate, sel.estimate) +
         fmt(", RPS occupancy max deviation %.4f over %.0f fixations", worst,
             static_cast<double>(occ.fixation_events)));
  return c.result();
}

Outcome scale_smoke() {
  Checker c;
  std::mt19937_64 rng(4);
  const MetaGame g = oracle::random_game(rng, {4, 4, 4, 4});
  c.expect(g.num_profiles() == 256, "profile count");
  const SweepResult s = alpha_sweep(g, 50);
  RankParams p;
  p.evo.ranking_intensity = s.converged_at.value_or(s.points[s.last_valid_index().value()].alpha);
  const RankingResult r = alpha_rank(g, p);
  const SparseMarkovChain chain = transition_matrix(g, p.evo);
  for (std::size_t i = 0; i < chain.num_states(); ++i) {
    c.expect(chain.row(i).size() == 13, "row " + std::to_string(i) + " nonzeros != 13");
  }
  double total = 0.0;
  for (const auto& e : r.entries) total += e.score;
  c.expect(std::abs(total - 1.0) < 1e-9, "scores do not sum to 1");
  c.note(fmt("256 profiles ranked at alpha=%.4g, top score %.3f", r.alpha_used, r.entries[0].score));
  return c.result();
}

Outcome alphago(const std::string& path) {
  Checker c;
  const MetaGame g = io::load_winrates(path);
  c.expect(g.num_profiles() == 7, "expected 7 agents");
  const SweepResult s = alpha_sweep(g, 50);
  const auto last = s.last_valid_index();
  c.expect(last.has_value(), "no sweep point solved");
  if (!last) return c.result();
  const double alpha = s.converged_at.value_or(s.points[*last].alpha);
  RankParams p;
  p.evo.ranking_intensity = alpha;
  const RankingResult r = alpha_rank(g, p);
  c.expect(r.entries[0].label == "AG(rvp)", "top agent is " + r.entries[0].label);
  c.expect(fmt("%.2f", r.entries[0].score) == "1.00", fmt("top score %.4f", r.entries[0].score));
  for (std::size_t i = 1; i < r.entries.size(); ++i) {
    c.expect(r.entries[i].rank == 2, r.entries[i].label + " is not rank 2");
  }
  c.note(fmt("alpha=%.4g, top score %.4f", alpha, r.entries[0].score));
  return c.result();
}

}  // namespace

int main() {
  run_criterion(1, "RPS invariance", 1, rps_invariance);
  run_criterion(2, "biased RPS sweep", 1, biased_rps);
  run_criterion(3, "Battle of the Sexes", 1, battle_of_the_sexes);
  run_criterion(4, "fixation closed form vs sum", 1, fixation_closed_form);
  run_criterion(5, "sparsity formula", 0, sparsity_formula);
  run_criterion(6, "unique stationary distribution", 30, unique_stationary);
  run_criterion(7, "edge dynamics correspondence", 1, edge_dynamics);
  run_criterion(8, "MCC limit correspondence", 5, mcc_limit);
  run_criterion(9, "simulator consistency", 60, simulator);
  run_criterion(10, "scale smoke test (256 profiles)", 2, scale_smoke);

  if (const char* path = std::getenv("ALPHARANK_ALPHAGO_CSV"); path && *path) {
    run_criterion(11, "AlphaGo win rates (optional)", 0, [&] { return alphago(path); });
  } else {
    std::printf("[SKIP] 11  %-34s set ALPHARANK_ALPHAGO_CSV to a 7x7 win-rate CSV\n",
                "AlphaGo win rates (optional)");
  }
  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
