// Copyright 2026 The ratebound Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ratebound/mdp.hpp"

namespace ratebound {

/**
 * Conjugate belief over (R, T) with known S, A, H and initial distribution.
 *
 * Transitions: one Dirichlet per (s, a) with concentration row
 * `transition_counts().row(s * A + a)`. Rewards: a categorical belief over a
 * grid of G equally spaced levels in [0, 1]; a reward is deterministic, so
 * the first observation at (s, a) collapses its belief to a point mass.
 */
class Posterior {
 public:
  Posterior(int num_states, int num_actions, int horizon, Matrix transition_counts,
            Matrix reward_weights, Vector initial_distribution, double prior_floor);

  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  int horizon() const { return horizon_; }
  int grid_levels() const { return static_cast<int>(reward_weights_.cols()); }
  double prior_floor() const { return prior_floor_; }

  const Matrix& transition_counts() const { return counts_; }
  /// (|S||A|) x G categorical weights, rows sum to one.
  const Matrix& reward_weights() const { return reward_weights_; }
  const Vector& initial_distribution() const { return initial_; }

  double grid_level(int g) const { return static_cast<double>(g) / (grid_levels() - 1); }
  int nearest_level(double r) const;

  /// The point-mass reward at (s, a), if one has been observed.
  std::optional<double> known_reward(int s, int a) const;

  /// counts / row-sum.
  Vector mean_transition(int s, int a) const;

  /// Observed rewards that fell more than half a grid cell from every level.
  int grid_mismatches() const { return grid_mismatches_; }

  friend bool operator==(const Posterior& a, const Posterior& b);

 private:
  friend Posterior update(const Posterior& post, const Trajectory& traj);

  int num_states_;
  int num_actions_;
  int horizon_;
  Matrix counts_;
  Matrix reward_weights_;
  Vector initial_;
  double prior_floor_;
  int grid_mismatches_ = 0;
};

inline constexpr double kDefaultConcentration = 1.0;

/// Symmetric Dirichlet(concentration) rows, uniform reward beliefs. The
/// initial distribution defaults to uniform when omitted.
Posterior init_prior(int num_states, int num_actions, int horizon, int grid_levels,
                     double concentration,
                     const std::optional<Vector>& initial_distribution = std::nullopt);

/// A posterior concentrated on `truth`: rewards known (snapped to the grid)
/// and `strength` pseudo-counts added along each true transition row.
Posterior collapsed_posterior(const TabularMDP& truth, int grid_levels, double strength = 1e12,
                              double concentration = kDefaultConcentration);

/// Adds one count per observed transition and collapses observed rewards.
Posterior update(const Posterior& post, const Trajectory& traj);

/// m i.i.d. MDPs drawn from the posterior.
std::vector<TabularMDP> sample_atoms(const Posterior& post, int m, std::uint64_t rng_seed);

/// Entropy (nats) of the empirical law of `atoms` after merging atoms whose
/// d_qstar distance is at most `equality_tol` (first-fit into clusters).
double plug_in_entropy(std::span<const TabularMDP> atoms, double equality_tol);

}  // namespace ratebound
