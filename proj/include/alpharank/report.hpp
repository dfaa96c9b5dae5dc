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
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "alpharank/alpharank.hpp"
#include "alpharank/evodyn.hpp"
#include "alpharank/metagame.hpp"
#include "alpharank/simulator.hpp"
#include "json.hpp"

namespace alpharank::report {

namespace detail {

inline std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

inline std::string full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace detail

// Human-readable (Agent, Rank, Score) table; scores rounded to 2 decimals.
inline std::string ranking_text(const RankingResult& r) {
  std::size_t width = 5;
  for (const auto& e : r.entries) width = std::max(width, e.label.size());
  std::ostringstream out;
  out << "alpha = " << detail::full(r.alpha_used) << "\n";
  auto pad = [&](const std::string& s) { return s + std::string(width - s.size() + 2, ' '); };
  out << pad("Agent") << "Rank  Score\n";
  for (const auto& e : r.entries) {
    std::string rank = std::to_string(e.rank);
    rank.resize(6, ' ');
    out << pad(e.label) << rank << detail::fixed2(e.score) << "\n";
  }
  return out.str();
}

inline std::string ranking_csv(const RankingResult& r) {
  std::ostringstream out;
  out << "agent,rank,score\n";
  for (const auto& e : r.entries) {
    out << e.label << ',' << e.rank << ',' << detail::full(e.score) << '\n';
  }
  return out.str();
}

inline nlohmann::json ranking_json(const RankingResult& r) {
  nlohmann::json j;
  j["alpha"] = r.alpha_used;
  j["residual"] = r.residual;
  j["rankings"] = nlohmann::json::array();
  for (const auto& e : r.entries) {
    j["rankings"].push_back({{"agent", e.label},
                             {"profile", e.profile.strategies},
                             {"index", e.index},
                             {"rank", e.rank},
                             {"score", e.score}});
  }
  return j;
}

// "profile_label,probability" by descending probability, ties by index.
inline std::string distribution_csv(const MetaGame& game,
                                    const std::vector<double>& pi) {
  std::vector<std::size_t> order(pi.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pi[a] > pi[b]; });
  std::ostringstream out;
  out << "profile_label,probability\n";
  for (std::size_t i : order) {
    out << game.profile_label(game.index_profile(i)) << ',' << detail::full(pi[i]) << '\n';
  }
  return out.str();
}

// Rows = alpha, columns = profiles in flat order. Failed points leave their
// cells empty.
inline std::string sweep_csv(const MetaGame& game, const SweepResult& sweep) {
  std::ostringstream out;
  out << "alpha";
  for (std::size_t i = 0; i < game.num_profiles(); ++i) {
    out << ',' << game.profile_label(game.index_profile(i));
  }
  out << '\n';
  for (const auto& pt : sweep.points) {
    out << detail::full(pt.alpha);
    for (std::size_t i = 0; i < game.num_profiles(); ++i) {
      out << ',';
      if (pt.ok()) out << detail::full(pt.distribution->probabilities[i]);
    }
    out << '\n';
  }
  return out.str();
}

inline nlohmann::json sweep_json(const MetaGame& game, const SweepResult& sweep) {
  nlohmann::json j;
  j["profiles"] = nlohmann::json::array();
  for (std::size_t i = 0; i < game.num_profiles(); ++i) {
    j["profiles"].push_back(game.profile_label(game.index_profile(i)));
  }
  j["points"] = nlohmann::json::array();
  for (const auto& pt : sweep.points) {
    nlohmann::json p{{"alpha", pt.alpha}};
    if (pt.ok()) {
      p["pi"] = pt.distribution->probabilities;
      p["residual"] = pt.distribution->residual;
    } else {
      p["error"] = pt.error;
    }
    j["points"].push_back(std::move(p));
  }
  j["converged_alpha"] = sweep.converged_at ? nlohmann::json(*sweep.converged_at)
                                            : nlohmann::json(nullptr);
  return j;
}

// Dynamics graph of the evolutionary chain. Node label = profile and score,
// fill saturation scales with mass. Self-loops are omitted, as are edges
// whose fixation probability is below edge_threshold / m. Edge labels give
// rho as a multiple of the neutral baseline 1/m.
inline std::string export_dot(const MetaGame& game, const SparseMarkovChain& chain,
                              const std::vector<double>& pi, int m,
                              double edge_threshold) {
  if (pi.size() != chain.num_states() || chain.num_states() != game.num_profiles()) {
    throw Error(ErrorCode::kSizeMismatch, "distribution does not match chain");
  }
  double max_mass = 0.0;
  for (double v : pi) max_mass = std::max(max_mass, v);
  std::ostringstream out;
  out << "digraph dynamics {\n";
  out << "  node [shape=circle, style=filled];\n";
  for (std::size_t i = 0; i < pi.size(); ++i) {
    const double sat = max_mass > 0.0 ? pi[i] / max_mass : 0.0;
    char color[48];
    std::snprintf(color, sizeof(color), "0.6 %.3f 1.0", sat);
    out << "  n" << i << " [label=\""
        << detail::dot_escape(game.profile_label(game.index_profile(i))) << "\\n"
        << detail::fixed2(pi[i]) << "\", fillcolor=\"" << color << "\"];\n";
  }
  const double eta = chain.eta();
  const double neutral = 1.0 / static_cast<double>(m);
  for (std::size_t i = 0; i < chain.num_states(); ++i) {
    for (const auto& e : chain.row(i)) {
      if (e.column == i || eta <= 0.0) continue;
      const double rho = e.probability / eta;
      if (!(rho >= edge_threshold * neutral)) continue;
      char label[32];
      std::snprintf(label, sizeof(label), "%.2f", rho / neutral);
      out << "  n" << i << " -> n" << e.column << " [label=\"" << label << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

inline nlohmann::json occupancy_json(const MetaGame& game, const OccupancyReport& r,
                                     const SimConfig& cfg) {
  nlohmann::json j;
  j["population_size"] = cfg.population_size;
  j["alpha"] = cfg.alpha;
  j["mutation_rate"] = cfg.mutation_rate;
  j["steps"] = cfg.steps;
  j["seed"] = cfg.seed;
  j["fixation_events"] = r.fixation_events;
  j["sojourns"] = r.sojourns;
  j["mixed_fraction"] = r.mixed_fraction;
  j["occupancy"] = nlohmann::json::object();
  for (std::size_t i = 0; i < r.occupancy.size(); ++i) {
    j["occupancy"][game.profile_label(game.index_profile(i))] = r.occupancy[i];
  }
  return j;
}

}  // namespace alpharank::report
