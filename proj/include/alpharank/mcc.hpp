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
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "alpharank/error.hpp"
#include "alpharank/evodyn.hpp"
#include "alpharank/graph.hpp"
#include "alpharank/metagame.hpp"
#include "alpharank/stationary.hpp"

// Markov-Conley chains: irreducible chains over the sink strongly connected
// components of a game's weakly-better-response graph.

namespace alpharank {

enum class EdgeKind { kStrict, kEqual };

struct ResponseEdge {
  std::size_t target;
  std::size_t population;
  EdgeKind kind;
};

struct ResponseGraph {
  // Nodes are flat profile indices of the game.
  std::vector<std::vector<ResponseEdge>> out;

  std::size_t num_nodes() const { return out.size(); }

  std::size_t num_edges() const {
    std::size_t n = 0;
    for (const auto& e : out) n += e.size();
    return n;
  }

  graph::Adjacency adjacency() const {
    graph::Adjacency adj(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (const auto& e : out[i]) adj[i].push_back(e.target);
    }
    return adj;
  }
};

// Edge s_i -> s_j for every unilateral deviation that does not lower the
// deviator's payoff: strict if it rises, equal if it ties (same equality
// threshold as the evolutionary model). In single-population games the
// comparison is the mutant's payoff against the resident versus the
// resident's payoff against the mutant.
inline ResponseGraph response_graph(const MetaGame& game,
                                    double tol = kDefaultPayoffTolerance) {
  ResponseGraph g;
  g.out.resize(game.num_profiles());
  for (std::size_t i = 0; i < game.num_profiles(); ++i) {
    const StrategyProfile profile = game.index_profile(i);
    for (const auto& nb : game.neighbors(profile)) {
      const PairwiseContest c{nb.population, profile[nb.population],
                              nb.profile[nb.population], profile};
      const ContestFitness f = contest_fitness(game, c);
      if (payoffs_equal(f.mutant, f.resident, tol)) {
        g.out[i].push_back({game.profile_index(nb.profile), nb.population,
                            EdgeKind::kEqual});
      } else if (f.mutant > f.resident) {
        g.out[i].push_back({game.profile_index(nb.profile), nb.population,
                            EdgeKind::kStrict});
      }
    }
  }
  return g;
}

// Sink SCCs ordered by smallest member; members ascending.
inline std::vector<std::vector<std::size_t>> sink_sccs(const ResponseGraph& g) {
  return graph::sink_components(graph::strongly_connected_components(g.adjacency()));
}

// No player can strictly raise its own payoff by a unilateral deviation.
inline bool is_pure_nash(const MetaGame& game,
                         std::span<const std::size_t> game_profile,
                         double tol = kDefaultPayoffTolerance) {
  std::vector<std::size_t> dev(game_profile.begin(), game_profile.end());
  for (std::size_t k = 0; k < game.num_players(); ++k) {
    const double base = game.payoff(k, game_profile);
    for (std::size_t s = 0; s < game.game_shape()[k]; ++s) {
      if (s == game_profile[k]) continue;
      dev[k] = s;
      const double alt = game.payoff(k, dev);
      if (alt > base && !payoffs_equal(alt, base, tol)) return false;
    }
    dev[k] = game_profile[k];
  }
  return true;
}

struct MccSet {
  std::vector<std::vector<std::size_t>> components;
  // chains[c][a][b]: probability of moving from components[c][a] to
  // components[c][b].
  std::vector<std::vector<std::vector<double>>> chains;
  double epsilon = 0.0;

  std::vector<std::size_t> union_of_states() const {
    std::vector<std::size_t> all;
    for (const auto& c : components) all.insert(all.end(), c.begin(), c.end());
    std::sort(all.begin(), all.end());
    return all;
  }
};

// Canonical MCC transition probabilities out of s_i: each strictly improving
// deviation gets eta, each equal-payoff deviation gets epsilon * eta, and the
// self-transition takes 1 − eta (A + epsilon B), where A and B count the
// strict and equal deviations and eta = 1 / Σ_k (|S^k| − 1).
inline MccSet mcc_chains(const MetaGame& game, double epsilon,
                         double tol = kDefaultPayoffTolerance) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error(ErrorCode::kEpsilonOutOfRange, "epsilon must lie in (0,1)");
  }
  const ResponseGraph g = response_graph(game, tol);
  const std::size_t deviations = game.num_deviations();
  const double eta = deviations ? 1.0 / static_cast<double>(deviations) : 0.0;

  MccSet out;
  out.epsilon = epsilon;
  out.components = sink_sccs(g);
  std::vector<std::size_t> local(game.num_profiles(), 0);
  for (const auto& comp : out.components) {
    for (std::size_t a = 0; a < comp.size(); ++a) local[comp[a]] = a;
    std::vector<std::vector<double>> chain(comp.size(),
                                           std::vector<double>(comp.size(), 0.0));
    for (std::size_t a = 0; a < comp.size(); ++a) {
      double off = 0.0;
      for (const auto& e : g.out[comp[a]]) {
        // Sinks have no outgoing edges, so every target is in `comp`.
        const double p = e.kind == EdgeKind::kStrict ? eta : epsilon * eta;
        chain[a][local[e.target]] += p;
        off += p;
      }
      chain[a][a] = 1.0 - off;
    }
    out.chains.push_back(std::move(chain));
  }
  return out;
}

struct LimitCorrespondenceRow {
  double alpha = 0.0;
  // Max entrywise |C_ij − MCC_ij| over pairs within each MCC.
  double max_deviation = 0.0;
  // Stationary mass outside every MCC. When the chain has several closed
  // classes but all lie inside MCCs, every stationary distribution puts
  // zero mass outside, so 0 is reported with unique_stationary = false.
  double off_mcc_mass = 0.0;
  bool unique_stationary = true;
};

struct LimitCorrespondenceReport {
  std::vector<std::size_t> mcc_states;
  std::vector<LimitCorrespondenceRow> rows;

  bool deviation_non_increasing(std::size_t from = 0) const {
    for (std::size_t i = from + 1; i < rows.size(); ++i) {
      if (rows[i].max_deviation > rows[i - 1].max_deviation) return false;
    }
    return true;
  }
  bool mass_non_increasing(std::size_t from = 0) const {
    for (std::size_t i = from + 1; i < rows.size(); ++i) {
      if (!(rows[i].off_mcc_mass <= rows[i - 1].off_mcc_mass)) return false;
    }
    return true;
  }
};

// Compares the evolutionary chain at each alpha with the MCC chains built
// with epsilon = 1/m.
inline LimitCorrespondenceReport check_limit_correspondence(
    const MetaGame& game, int m, const std::vector<double>& alpha_grid,
    const SolverOptions& solver = {}, double tol = kDefaultPayoffTolerance) {
  const MccSet mcc = mcc_chains(game, 1.0 / static_cast<double>(m), tol);
  LimitCorrespondenceReport report;
  report.mcc_states = mcc.union_of_states();
  std::vector<bool> in_mcc(game.num_profiles(), false);
  for (std::size_t s : report.mcc_states) in_mcc[s] = true;

  for (double alpha : alpha_grid) {
    EvoParams p;
    p.population_size = m;
    p.ranking_intensity = alpha;
    p.payoff_tolerance = tol;
    const SparseMarkovChain chain = transition_matrix(game, p);

    LimitCorrespondenceRow row;
    row.alpha = alpha;
    for (std::size_t c = 0; c < mcc.components.size(); ++c) {
      const auto& comp = mcc.components[c];
      for (std::size_t a = 0; a < comp.size(); ++a) {
        for (std::size_t b = 0; b < comp.size(); ++b) {
          const double d =
              std::abs(chain.probability(comp[a], comp[b]) - mcc.chains[c][a][b]);
          row.max_deviation = std::max(row.max_deviation, d);
        }
      }
    }

    try {
      const StationaryDistribution pi = stationary_distribution(chain, solver);
      double off = 0.0;
      for (std::size_t s = 0; s < pi.probabilities.size(); ++s) {
        if (!in_mcc[s]) off += pi.probabilities[s];
      }
      row.off_mcc_mass = off;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kReducibleChain) throw;
      row.unique_stationary = false;
      bool inside = true;
      for (const auto& cls : closed_classes(chain)) {
        for (std::size_t s : cls) inside = inside && in_mcc[s];
      }
      row.off_mcc_mass =
          inside ? 0.0 : std::numeric_limits<double>::quiet_NaN();
    }
    report.rows.push_back(row);
  }
  return report;
}

// Response graph as DOT: strict edges solid, equal edges dashed, each sink
// SCC drawn as a filled cluster.
inline std::string response_graph_dot(const MetaGame& game,
                                      const ResponseGraph& g,
                                      const std::vector<std::vector<std::size_t>>& sinks) {
  static constexpr const char* kColors[] = {"lightblue", "palegreen", "khaki",
                                            "lightpink", "plum", "lightsalmon"};
  std::ostringstream out;
  out << "digraph response_graph {\n";
  out << "  node [shape=box];\n";
  std::vector<bool> clustered(g.num_nodes(), false);
  for (std::size_t c = 0; c < sinks.size(); ++c) {
    out << "  subgraph cluster_sink_" << c << " {\n";
    out << "    style=filled;\n    color=" << kColors[c % 6] << ";\n";
    out << "    label=\"MCC " << c << "\";\n";
    for (std::size_t s : sinks[c]) {
      out << "    n" << s << " [label=\"" << game.profile_label(game.index_profile(s))
          << "\"];\n";
      clustered[s] = true;
    }
    out << "  }\n";
  }
  for (std::size_t s = 0; s < g.num_nodes(); ++s) {
    if (clustered[s]) continue;
    out << "  n" << s << " [label=\"" << game.profile_label(game.index_profile(s))
        << "\"];\n";
  }
  for (std::size_t s = 0; s < g.num_nodes(); ++s) {
    for (const auto& e : g.out[s]) {
      out << "  n" << s << " -> n" << e.target << " [style="
          << (e.kind == EdgeKind::kStrict ? "solid" : "dashed") << "];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace alpharank
