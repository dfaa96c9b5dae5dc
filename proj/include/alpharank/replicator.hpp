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

// Continuous-time replicator dynamics over the evaluated populations.

namespace alpharank {

// Strategy shares per population; each vector lies on the simplex.
struct PopulationState {
  std::vector<std::vector<double>> shares;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<PopulationState> states;
  double step_size = 0.0;
  // Largest L1 correction applied by the per-step renormalization.
  double max_renormalization_drift = 0.0;
};

class ReplicatorDynamics {
 public:
  explicit ReplicatorDynamics(const MetaGame& game)
      : single_(game.single_population()), sizes_(game.population_sizes()) {
    const std::size_t n = game.num_profiles();
    const std::size_t k_count = sizes_.size();
    profiles_.reserve(n);
    payoffs_.assign(k_count, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      profiles_.push_back(game.index_profile(i).strategies);
    }
    if (single_) {
      const std::size_t s = sizes_[0];
      matrix_.assign(s * s, 0.0);
      for (std::size_t a = 0; a < s; ++a) {
        for (std::size_t b = 0; b < s; ++b) matrix_[a * s + b] = game.payoff(0, {a, b});
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < k_count; ++k) {
          payoffs_[k][i] = game.payoff(k, profiles_[i]);
        }
      }
    }
  }

  // Expected payoff f^k_i of each pure strategy against the other
  // populations (single population: against the population itself).
  std::vector<std::vector<double>> fitness(const PopulationState& x) const {
    check(x);
    std::vector<std::vector<double>> f(sizes_.size());
    for (std::size_t k = 0; k < sizes_.size(); ++k) f[k].assign(sizes_[k], 0.0);
    if (single_) {
      const std::size_t s = sizes_[0];
      for (std::size_t a = 0; a < s; ++a) {
        for (std::size_t b = 0; b < s; ++b) f[0][a] += matrix_[a * s + b] * x.shares[0][b];
      }
      return f;
    }
    for (std::size_t i = 0; i < profiles_.size(); ++i) {
      const auto& p = profiles_[i];
      for (std::size_t k = 0; k < sizes_.size(); ++k) {
        double w = 1.0;
        for (std::size_t c = 0; c < sizes_.size() && w != 0.0; ++c) {
          if (c != k) w *= x.shares[c][p[c]];
        }
        if (w != 0.0) f[k][p[k]] += payoffs_[k][i] * w;
      }
    }
    return f;
  }

  // dx^k_i/dt = x^k_i (f^k_i − f̄^k).
  PopulationState derivative(const PopulationState& x) const {
    const auto f = fitness(x);
    PopulationState v;
    v.shares.resize(sizes_.size());
    for (std::size_t k = 0; k < sizes_.size(); ++k) {
      double mean = 0.0;
      for (std::size_t i = 0; i < sizes_[k]; ++i) mean += x.shares[k][i] * f[k][i];
      v.shares[k].resize(sizes_[k]);
      for (std::size_t i = 0; i < sizes_[k]; ++i) {
        v.shares[k][i] = x.shares[k][i] * (f[k][i] - mean);
      }
    }
    return v;
  }

  const std::vector<std::size_t>& sizes() const { return sizes_; }

  void check(const PopulationState& x) const {
    if (x.shares.size() != sizes_.size()) {
      throw Error(ErrorCode::kSizeMismatch, "state has wrong number of populations");
    }
    for (std::size_t k = 0; k < sizes_.size(); ++k) {
      if (x.shares[k].size() != sizes_[k]) {
        throw Error(ErrorCode::kSizeMismatch,
                    "population " + std::to_string(k) + " has wrong dimension");
      }
    }
  }

 private:
  bool single_;
  std::vector<std::size_t> sizes_;
  std::vector<std::vector<std::size_t>> profiles_;
  std::vector<std::vector<double>> payoffs_;
  std::vector<double> matrix_;
};

inline PopulationState replicator_derivative(const MetaGame& game,
                                             const PopulationState& state) {
  return ReplicatorDynamics(game).derivative(state);
}

namespace detail {

inline PopulationState axpy(const PopulationState& x, double h,
                            const PopulationState& v) {
  PopulationState out = x;
  for (std::size_t k = 0; k < out.shares.size(); ++k) {
    for (std::size_t i = 0; i < out.shares[k].size(); ++i) {
      out.shares[k][i] += h * v.shares[k][i];
    }
  }
  return out;
}

}  // namespace detail

// Fixed-step RK4. After each step every coordinate must lie in
// [-0.01, 1.01]; negatives are then clipped and each population rescaled.
inline Trajectory integrate(const MetaGame& game, const PopulationState& x0,
                            double step, std::size_t num_steps) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw Error(ErrorCode::kInvalidParameter, "step must be positive");
  }
  const ReplicatorDynamics rd(game);
  rd.check(x0);
  for (const auto& pop : x0.shares) {
    double s = 0.0;
    for (double v : pop) {
      if (!(v >= 0.0)) {
        throw Error(ErrorCode::kInvalidParameter, "initial shares must be >= 0");
      }
      s += v;
    }
    if (std::abs(s - 1.0) > 1e-9) {
      throw Error(ErrorCode::kInvalidParameter, "initial shares must sum to 1");
    }
  }

  Trajectory traj;
  traj.step_size = step;
  traj.times.reserve(num_steps + 1);
  traj.states.reserve(num_steps + 1);
  PopulationState x = x0;
  for (auto& pop : x.shares) {
    double s = 0.0;
    for (double v : pop) s += v;
    for (double& v : pop) v /= s;
  }
  traj.times.push_back(0.0);
  traj.states.push_back(x);

  for (std::size_t n = 1; n <= num_steps; ++n) {
    const PopulationState k1 = rd.derivative(x);
    const PopulationState k2 = rd.derivative(detail::axpy(x, 0.5 * step, k1));
    const PopulationState k3 = rd.derivative(detail::axpy(x, 0.5 * step, k2));
    const PopulationState k4 = rd.derivative(detail::axpy(x, step, k3));
    for (std::size_t k = 0; k < x.shares.size(); ++k) {
      double drift = 0.0, sum = 0.0;
      auto& pop = x.shares[k];
      for (std::size_t i = 0; i < pop.size(); ++i) {
        pop[i] += step / 6.0 *
                  (k1.shares[k][i] + 2.0 * k2.shares[k][i] + 2.0 * k3.shares[k][i] +
                   k4.shares[k][i]);
        if (!(pop[i] >= -0.01 && pop[i] <= 1.01)) {
          throw Error(ErrorCode::kStepUnstable,
                      "share left [-0.01, 1.01] at t=" +
                          std::to_string(static_cast<double>(n) * step));
        }
        if (pop[i] < 0.0) {
          drift += -pop[i];
          pop[i] = 0.0;
        }
        sum += pop[i];
      }
      for (double& v : pop) {
        const double r = v / sum;
        drift += std::abs(r - v);
        v = r;
      }
      traj.max_renormalization_drift = std::max(traj.max_renormalization_drift, drift);
    }
    traj.times.push_back(static_cast<double>(n) * step);
    traj.states.push_back(x);
  }
  return traj;
}

// Large-population mean dynamics of the Fermi copy process on the edge
// between two monomorphic states: x (1 − x) tanh(alpha (f_tau − f_sigma) / 2).
inline double edge_mean_dynamics(double f_tau, double f_sigma, double alpha,
                                 double x_tau) {
  if (!(x_tau >= 0.0 && x_tau <= 1.0)) {
    throw Error(ErrorCode::kInvalidParameter, "x_tau must lie in [0,1]");
  }
  return x_tau * (1.0 - x_tau) * std::tanh(alpha * (f_tau - f_sigma) / 2.0);
}

// "t,x0_<label>,...,x1_<label>,..." with one block per population.
inline std::string trajectory_csv(const MetaGame& game, const Trajectory& traj) {
  std::ostringstream out;
  out.precision(12);
  out << "t";
  for (std::size_t k = 0; k < game.num_populations(); ++k) {
    for (const auto& l : game.labels(k)) out << ",x" << k << '_' << l;
  }
  out << '\n';
  for (std::size_t n = 0; n < traj.times.size(); ++n) {
    out << traj.times[n];
    for (const auto& pop : traj.states[n].shares) {
      for (double v : pop) out << ',' << v;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace alpharank
