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
#include <vector>

#include <Eigen/Dense>

namespace ratebound {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Tolerance used when validating that probability vectors sum to one.
inline constexpr double kSimplexTol = 1e-9;

/**
 * A finite episodic MDP with deterministic rewards.
 *
 * Rewards are stored as an |S| x |A| matrix. Transitions are stored as an
 * (|S||A|) x |S| row-stochastic matrix whose row `s * |A| + a` is the
 * next-state distribution of the pair (s, a). Steps are 0-based: an episode
 * visits steps 0..H-1 and the value at step H is identically zero.
 *
 * Values are immutable after construction; the constructor validates every
 * invariant and throws InvalidInput on violation.
 */
class TabularMDP {
 public:
  TabularMDP(int num_states, int num_actions, int horizon, Matrix rewards,
             Matrix transitions, Vector initial_distribution);

  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  int horizon() const { return horizon_; }

  const Matrix& rewards() const { return rewards_; }
  const Matrix& transitions() const { return transitions_; }
  const Vector& initial_distribution() const { return initial_; }

  double reward(int s, int a) const { return rewards_(s, a); }
  auto transition_row(int s, int a) const {
    return transitions_.row(static_cast<Eigen::Index>(s) * num_actions_ + a);
  }

  /// FNV-1a over shape and contents; keys the planning cache.
  std::uint64_t content_hash() const;

  bool same_shape(const TabularMDP& other) const {
    return num_states_ == other.num_states_ && num_actions_ == other.num_actions_ &&
           horizon_ == other.horizon_;
  }

  friend bool operator==(const TabularMDP& a, const TabularMDP& b);

 private:
  int num_states_;
  int num_actions_;
  int horizon_;
  Matrix rewards_;
  Matrix transitions_;
  Vector initial_;
};

/// H decision rules, each an |S| x |A| row-stochastic matrix.
class NonstationaryPolicy {
 public:
  explicit NonstationaryPolicy(std::vector<Matrix> steps);

  /// One-hot rows from `actions[h][s]`.
  static NonstationaryPolicy deterministic(const std::vector<std::vector<int>>& actions,
                                           int num_actions);
  static NonstationaryPolicy uniform(int num_states, int num_actions, int horizon);
  /// Repeats one stationary decision rule for every step.
  static NonstationaryPolicy stationary(const Matrix& rule, int horizon);

  int horizon() const { return static_cast<int>(steps_.size()); }
  int num_states() const { return static_cast<int>(steps_.front().rows()); }
  int num_actions() const { return static_cast<int>(steps_.front().cols()); }
  const Matrix& step(int h) const { return steps_.at(static_cast<std::size_t>(h)); }
  const std::vector<Matrix>& steps() const { return steps_; }

  /// The action with probability one at (h, s); -1 when the row is not one-hot.
  int deterministic_action(int h, int s) const;

 private:
  std::vector<Matrix> steps_;
};

/// Action values q[h] (|S| x |A|) for h < H and state values v[h] for h <= H,
/// with v[H] == 0. `initial_value` integrates v[0] against the initial
/// distribution of the MDP that produced the table.
struct ValueTable {
  std::vector<Matrix> q;
  std::vector<Vector> v;
  double initial_value = 0.0;

  int horizon() const { return static_cast<int>(q.size()); }
};

/// Optimal values and the greedy policy (ties to the lowest action index).
struct PlanResult {
  ValueTable values;
  NonstationaryPolicy policy;
};

struct Trajectory {
  std::vector<int> states;      // length H + 1
  std::vector<int> actions;     // length H
  std::vector<double> rewards;  // length H

  int horizon() const { return static_cast<int>(actions.size()); }
};

/// (B^pi V)(s) = sum_a pi(a|s) [R(s,a) + sum_s' T(s'|s,a) V(s')], summed in
/// ascending state then action order.
Vector bellman_apply(const TabularMDP& mdp, const Matrix& step_policy, const Vector& v_next);

/// Q(s,a) = R(s,a) + T(s,a) . V for every pair.
Matrix q_backup(const TabularMDP& mdp, const Vector& v_next);

PlanResult plan_backward_induction(const TabularMDP& mdp);

ValueTable evaluate_policy(const TabularMDP& mdp, const NonstationaryPolicy& policy);

Trajectory sample_trajectory(const TabularMDP& mdp, const NonstationaryPolicy& policy,
                             std::uint64_t rng_seed);

/// Exact state distribution at every step 0..H under `policy`.
std::vector<Vector> state_occupancy(const TabularMDP& mdp, const NonstationaryPolicy& policy);

}  // namespace ratebound
