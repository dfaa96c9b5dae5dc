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
#include <cstddef>
#include <limits>
#include <vector>

namespace alpharank::graph {

using Adjacency = std::vector<std::vector<std::size_t>>;

struct Condensation {
  // component[v] is the SCC id of node v.
  std::vector<std::size_t> component;
  // members[c] lists the nodes of SCC c in ascending order.
  std::vector<std::vector<std::size_t>> members;
  // dag[c] lists the distinct SCCs reachable from c by a single edge.
  Adjacency dag;
};

// Iterative Tarjan. SCC ids are renumbered so that components are ordered by
// their smallest member, which makes every downstream output deterministic.
inline Condensation strongly_connected_components(const Adjacency& adj) {
  constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();
  const std::size_t n = adj.size();
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0), raw(n, kUnvisited);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::size_t next_index = 0, next_component = 0;

  struct Frame {
    std::size_t node;
    std::size_t edge;
  };
  std::vector<Frame> call;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call.push_back({root, 0});
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      const std::size_t v = f.node;
      if (f.edge < adj[v].size()) {
        const std::size_t w = adj[v][f.edge++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          raw[w] = next_component;
        } while (w != v);
        ++next_component;
      }
      call.pop_back();
      if (!call.empty()) {
        const std::size_t parent = call.back().node;
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }

  // Renumber by smallest member: scanning nodes in order visits each
  // component first at its minimum.
  std::vector<std::size_t> remap(next_component, kUnvisited);
  std::size_t count = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (remap[raw[v]] == kUnvisited) remap[raw[v]] = count++;
  }

  Condensation out;
  out.component.resize(n);
  out.members.resize(count);
  out.dag.resize(count);
  for (std::size_t v = 0; v < n; ++v) {
    out.component[v] = remap[raw[v]];
    out.members[out.component[v]].push_back(v);
  }
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t cv = out.component[v];
    for (std::size_t w : adj[v]) {
      const std::size_t cw = out.component[w];
      if (cw != cv) out.dag[cv].push_back(cw);
    }
  }
  for (auto& targets : out.dag) {
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  }
  return out;
}

// Components with no edge leaving them, ordered by smallest member.
inline std::vector<std::vector<std::size_t>> sink_components(
    const Condensation& cond) {
  std::vector<std::vector<std::size_t>> sinks;
  for (std::size_t c = 0; c < cond.members.size(); ++c) {
    if (cond.dag[c].empty()) sinks.push_back(cond.members[c]);
  }
  return sinks;
}

inline bool is_strongly_connected(const Adjacency& adj) {
  if (adj.empty()) return false;
  return strongly_connected_components(adj).members.size() == 1;
}

}  // namespace alpharank::graph
