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
#include <string>
#include <string_view>
#include <vector>

#include "alpharank/error.hpp"
#include "alpharank/evodyn.hpp"
#include "alpharank/graph.hpp"

namespace alpharank {

enum class SolveMethod {
  kAuto,            // direct for small closed classes, power iteration above
  kPowerIteration,  // damped power iteration on (C + I) / 2
  kDirect,          // Grassmann-Taksar-Heyman elimination, O(n^3)
};

inline std::string_view solve_method_name(SolveMethod m) {
  switch (m) {
    case SolveMethod::kAuto: return "auto";
    case SolveMethod::kPowerIteration: return "power-iteration";
    case SolveMethod::kDirect: return "direct-solve";
  }
  return "unknown";
}

struct SolverOptions {
  double tol = 1e-10;
  std::size_t max_iters = 1'000'000;
  SolveMethod method = SolveMethod::kAuto;
  // kAuto uses the direct solver up to this many states.
  std::size_t direct_limit = 2000;
};

struct StationaryDistribution {
  std::vector<double> probabilities;
  // ||pi^T C - pi^T||_inf at termination.
  double residual = 0.0;
  SolveMethod method = SolveMethod::kDirect;
  std::size_t iterations = 0;
};

// Directed graph of strictly positive off-diagonal transitions.
inline graph::Adjacency positive_transition_graph(
    const SparseMarkovChain& chain) {
  graph::Adjacency adj(chain.num_states());
  for (std::size_t i = 0; i < chain.num_states(); ++i) {
    for (const auto& e : chain.row(i)) {
      if (e.column != i && e.probability > 0.0) adj[i].push_back(e.column);
    }
  }
  return adj;
}

inline bool is_irreducible(const SparseMarkovChain& chain) {
  return graph::is_strongly_connected(positive_transition_graph(chain));
}

// Closed communicating classes, ordered by smallest member.
inline std::vector<std::vector<std::size_t>> closed_classes(
    const SparseMarkovChain& chain) {
  return graph::sink_components(
      graph::strongly_connected_components(positive_transition_graph(chain)));
}

inline double stationary_residual(const SparseMarkovChain& chain,
                                  const std::vector<double>& pi) {
  const std::vector<double> y = chain.left_multiply(pi);
  double r = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) r = std::max(r, std::abs(y[i] - pi[i]));
  return r;
}

namespace detail {

inline void normalize(std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  for (double& x : v) x /= s;
}

// GTH elimination on the sub-chain `states`, which must be closed and
// irreducible. Uses only additions of non-negative terms, so small
// transition probabilities keep full relative accuracy.
inline std::vector<double> gth_solve(const SparseMarkovChain& chain,
                                     const std::vector<std::size_t>& states) {
  const std::size_t n = states.size();
  std::vector<std::size_t> local(chain.num_states(), n);
  for (std::size_t i = 0; i < n; ++i) local[states[i]] = i;
  std::vector<double> p(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& e : chain.row(states[i])) {
      const std::size_t j = local[e.column];
      if (j < n && j != i) p[i * n + j] = e.probability;
    }
  }
  for (std::size_t k = n; k-- > 1;) {
    double s = 0.0;
    for (std::size_t j = 0; j < k; ++j) s += p[k * n + j];
    if (!(s > 0.0)) {
      throw Error(ErrorCode::kReducibleChain,
                  "state has no outflow during elimination");
    }
    for (std::size_t i = 0; i < k; ++i) p[i * n + k] /= s;
    for (std::size_t i = 0; i < k; ++i) {
      const double pik = p[i * n + k];
      if (pik == 0.0) continue;
      for (std::size_t j = 0; j < k; ++j) p[i * n + j] += pik * p[k * n + j];
    }
  }
  std::vector<double> pi(n, 0.0);
  pi[0] = 1.0;
  for (std::size_t k = 1; k < n; ++k) {
    double v = 0.0;
    for (std::size_t i = 0; i < k; ++i) v += pi[i] * p[i * n + k];
    pi[k] = v;
    if (v > 1e250) {
      for (std::size_t i = 0; i <= k; ++i) pi[i] *= 1e-250;
    }
  }
  normalize(pi);
  return pi;
}

inline std::size_t power_iterate(const SparseMarkovChain& chain,
                                 std::vector<double>& pi, double tol,
                                 std::size_t max_iters) {
  for (std::size_t it = 0; it < max_iters; ++it) {
    const std::vector<double> y = chain.left_multiply(pi);
    double r = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) r = std::max(r, std::abs(y[i] - pi[i]));
    if (r <= tol) return it;
    for (std::size_t i = 0; i < y.size(); ++i) pi[i] = 0.5 * (pi[i] + y[i]);
    if (it % 64 == 63) normalize(pi);
  }
  throw Error(ErrorCode::kNoConvergence,
              "power iteration did not converge in " +
                  std::to_string(max_iters) + " iterations");
}

}  // namespace detail

// Unique stationary distribution of a chain with exactly one closed class.
// Transient states get mass 0. Throws ReducibleChain when several closed
// classes exist (the stationary distribution is then not unique).
inline StationaryDistribution stationary_distribution(
    const SparseMarkovChain& chain, const SolverOptions& opts = {}) {
  const std::size_t n = chain.num_states();
  if (n == 0) throw Error(ErrorCode::kInvalidParameter, "empty chain");
  const auto classes = closed_classes(chain);
  if (classes.size() > 1) {
    throw Error(ErrorCode::kReducibleChain,
                std::to_string(classes.size()) +
                    " closed communicating classes; stationary distribution "
                    "is not unique (reduce alpha)");
  }
  const auto& support = classes.front();

  StationaryDistribution out;
  const bool direct =
      opts.method == SolveMethod::kDirect ||
      (opts.method == SolveMethod::kAuto && support.size() <= opts.direct_limit);
  if (direct) {
    out.method = SolveMethod::kDirect;
    const std::vector<double> local = detail::gth_solve(chain, support);
    out.probabilities.assign(n, 0.0);
    for (std::size_t i = 0; i < support.size(); ++i) {
      out.probabilities[support[i]] = local[i];
    }
    out.residual = stationary_residual(chain, out.probabilities);
    if (out.residual > opts.tol) {
      out.iterations =
          detail::power_iterate(chain, out.probabilities, opts.tol, opts.max_iters);
      detail::normalize(out.probabilities);
      out.residual = stationary_residual(chain, out.probabilities);
    }
    return out;
  }
  out.method = SolveMethod::kPowerIteration;
  out.probabilities.assign(n, 1.0 / static_cast<double>(n));
  out.iterations =
      detail::power_iterate(chain, out.probabilities, opts.tol, opts.max_iters);
  detail::normalize(out.probabilities);
  out.residual = stationary_residual(chain, out.probabilities);
  return out;
}

inline StationaryDistribution stationary_distribution(
    const SparseMarkovChain& chain, double tol, std::size_t max_iters) {
  SolverOptions opts;
  opts.tol = tol;
  opts.max_iters = max_iters;
  return stationary_distribution(chain, opts);
}

}  // namespace alpharank
