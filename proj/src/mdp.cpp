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

#include "ratebound/mdp.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "ratebound/errors.hpp"
#include "ratebound/rng.hpp"

namespace ratebound {

namespace {

void check_distribution(const Eigen::Ref<const Eigen::RowVectorXd>& row, const std::string& what) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < row.size(); ++i) {
    if (!(row(i) >= 0.0) || !std::isfinite(row(i))) {
      throw InvalidInput(what + ": negative or non-finite probability");
    }
    total += row(i);
  }
  if (std::abs(total - 1.0) > kSimplexTol) {
    throw InvalidInput(what + ": sums to " + std::to_string(total));
  }
}

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

TabularMDP::TabularMDP(int num_states, int num_actions, int horizon, Matrix rewards,
                       Matrix transitions, Vector initial_distribution)
    : num_states_(num_states),
      num_actions_(num_actions),
      horizon_(horizon),
      rewards_(std::move(rewards)),
      transitions_(std::move(transitions)),
      initial_(std::move(initial_distribution)) {
  if (num_states < 1 || num_actions < 1 || horizon < 1) {
    throw InvalidInput("TabularMDP: sizes must be positive");
  }
  if (rewards_.rows() != num_states || rewards_.cols() != num_actions) {
    throw InvalidInput("TabularMDP: reward matrix must be |S| x |A|");
  }
  if (transitions_.rows() != static_cast<Eigen::Index>(num_states) * num_actions ||
      transitions_.cols() != num_states) {
    throw InvalidInput("TabularMDP: transition matrix must be (|S||A|) x |S|");
  }
  if (initial_.size() != num_states) {
    throw InvalidInput("TabularMDP: initial distribution must have |S| entries");
  }
  for (int s = 0; s < num_states; ++s) {
    for (int a = 0; a < num_actions; ++a) {
      const double r = rewards_(s, a);
      if (!(r >= 0.0 && r <= 1.0)) {
        throw InvalidInput("TabularMDP: reward outside [0,1] at (" + std::to_string(s) + "," +
                           std::to_string(a) + ")");
      }
      check_distribution(transition_row(s, a), "TabularMDP: transition row (" +
                                                   std::to_string(s) + "," +
                                                   std::to_string(a) + ")");
    }
  }
  check_distribution(initial_.transpose(), "TabularMDP: initial distribution");
}

std::uint64_t TabularMDP::content_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const int dims[3] = {num_states_, num_actions_, horizon_};
  h = fnv1a(h, dims, sizeof(dims));
  h = fnv1a(h, rewards_.data(), sizeof(double) * static_cast<std::size_t>(rewards_.size()));
  h = fnv1a(h, transitions_.data(),
            sizeof(double) * static_cast<std::size_t>(transitions_.size()));
  h = fnv1a(h, initial_.data(), sizeof(double) * static_cast<std::size_t>(initial_.size()));
  return h;
}

bool operator==(const TabularMDP& a, const TabularMDP& b) {
  return a.same_shape(b) && a.rewards_ == b.rewards_ && a.transitions_ == b.transitions_ &&
         a.initial_ == b.initial_;
}

NonstationaryPolicy::NonstationaryPolicy(std::vector<Matrix> steps) : steps_(std::move(steps)) {
  if (steps_.empty()) throw InvalidInput("NonstationaryPolicy: needs at least one step");
  const auto rows = steps_.front().rows();
  const auto cols = steps_.front().cols();
  if (rows < 1 || cols < 1) throw InvalidInput("NonstationaryPolicy: empty decision rule");
  for (std::size_t h = 0; h < steps_.size(); ++h) {
    if (steps_[h].rows() != rows || steps_[h].cols() != cols) {
      throw InvalidInput("NonstationaryPolicy: inconsistent step shapes");
    }
    for (Eigen::Index s = 0; s < rows; ++s) {
      check_distribution(steps_[h].row(s), "NonstationaryPolicy: step " + std::to_string(h) +
                                               " state " + std::to_string(s));
    }
  }
}

NonstationaryPolicy NonstationaryPolicy::deterministic(
    const std::vector<std::vector<int>>& actions, int num_actions) {
  std::vector<Matrix> steps;
  steps.reserve(actions.size());
  for (const auto& rule : actions) {
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(rule.size()), num_actions);
    for (std::size_t s = 0; s < rule.size(); ++s) {
      if (rule[s] < 0 || rule[s] >= num_actions) {
        throw InvalidInput("NonstationaryPolicy: action index out of range");
      }
      m(static_cast<Eigen::Index>(s), rule[s]) = 1.0;
    }
    steps.push_back(std::move(m));
  }
  return NonstationaryPolicy(std::move(steps));
}

NonstationaryPolicy NonstationaryPolicy::uniform(int num_states, int num_actions, int horizon) {
  return stationary(Matrix::Constant(num_states, num_actions, 1.0 / num_actions), horizon);
}

NonstationaryPolicy NonstationaryPolicy::stationary(const Matrix& rule, int horizon) {
  return NonstationaryPolicy(std::vector<Matrix>(static_cast<std::size_t>(horizon), rule));
}

int NonstationaryPolicy::deterministic_action(int h, int s) const {
  const Matrix& rule = step(h);
  for (Eigen::Index a = 0; a < rule.cols(); ++a) {
    if (rule(s, a) == 1.0) return static_cast<int>(a);
  }
  return -1;
}

Vector bellman_apply(const TabularMDP& mdp, const Matrix& step_policy, const Vector& v_next) {
  const int S = mdp.num_states();
  const int A = mdp.num_actions();
  if (step_policy.rows() != S || step_policy.cols() != A || v_next.size() != S) {
    throw InvalidInput("bellman_apply: dimension mismatch");
  }
  const Matrix& T = mdp.transitions();
  Vector out(S);
  for (int s = 0; s < S; ++s) {
    double acc = 0.0;
    for (int a = 0; a < A; ++a) {
      const double w = step_policy(s, a);
      if (w == 0.0) continue;
      const Eigen::Index row = static_cast<Eigen::Index>(s) * A + a;
      double cont = 0.0;
      for (int sp = 0; sp < S; ++sp) cont += T(row, sp) * v_next(sp);
      acc += w * (mdp.reward(s, a) + cont);
    }
    out(s) = acc;
  }
  return out;
}

Matrix q_backup(const TabularMDP& mdp, const Vector& v_next) {
  const int S = mdp.num_states();
  const int A = mdp.num_actions();
  if (v_next.size() != S) throw InvalidInput("q_backup: dimension mismatch");
  const Matrix& T = mdp.transitions();
  Matrix q(S, A);
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) {
      const Eigen::Index row = static_cast<Eigen::Index>(s) * A + a;
      double cont = 0.0;
      for (int sp = 0; sp < S; ++sp) cont += T(row, sp) * v_next(sp);
      q(s, a) = mdp.reward(s, a) + cont;
    }
  }
  return q;
}

PlanResult plan_backward_induction(const TabularMDP& mdp) {
  const int S = mdp.num_states();
  const int A = mdp.num_actions();
  const int H = mdp.horizon();
  ValueTable values;
  values.q.resize(static_cast<std::size_t>(H));
  values.v.assign(static_cast<std::size_t>(H) + 1, Vector::Zero(S));
  std::vector<std::vector<int>> greedy(static_cast<std::size_t>(H), std::vector<int>(S, 0));
  for (int h = H - 1; h >= 0; --h) {
    const auto hu = static_cast<std::size_t>(h);
    values.q[hu] = q_backup(mdp, values.v[hu + 1]);
    for (int s = 0; s < S; ++s) {
      int best = 0;
      for (int a = 1; a < A; ++a) {
        if (values.q[hu](s, a) > values.q[hu](s, best)) best = a;
      }
      greedy[hu][static_cast<std::size_t>(s)] = best;
      values.v[hu](s) = values.q[hu](s, best);
    }
  }
  values.initial_value = mdp.initial_distribution().dot(values.v[0]);
  return {std::move(values), NonstationaryPolicy::deterministic(greedy, A)};
}

ValueTable evaluate_policy(const TabularMDP& mdp, const NonstationaryPolicy& policy) {
  const int H = mdp.horizon();
  if (policy.horizon() != H) throw InvalidInput("evaluate_policy: horizon mismatch");
  if (policy.num_states() != mdp.num_states() || policy.num_actions() != mdp.num_actions()) {
    throw InvalidInput("evaluate_policy: policy shape does not match the MDP");
  }
  ValueTable values;
  values.q.resize(static_cast<std::size_t>(H));
  values.v.assign(static_cast<std::size_t>(H) + 1, Vector::Zero(mdp.num_states()));
  for (int h = H - 1; h >= 0; --h) {
    const auto hu = static_cast<std::size_t>(h);
    values.q[hu] = q_backup(mdp, values.v[hu + 1]);
    values.v[hu] = bellman_apply(mdp, policy.step(h), values.v[hu + 1]);
  }
  values.initial_value = mdp.initial_distribution().dot(values.v[0]);
  return values;
}

Trajectory sample_trajectory(const TabularMDP& mdp, const NonstationaryPolicy& policy,
                             std::uint64_t rng_seed) {
  const int H = mdp.horizon();
  if (policy.horizon() != H) throw InvalidInput("sample_trajectory: horizon mismatch");
  Rng rng(rng_seed);
  Trajectory traj;
  traj.states.reserve(static_cast<std::size_t>(H) + 1);
  traj.actions.reserve(static_cast<std::size_t>(H));
  traj.rewards.reserve(static_cast<std::size_t>(H));
  int s = sample_categorical(mdp.initial_distribution(), rng);
  traj.states.push_back(s);
  for (int h = 0; h < H; ++h) {
    const int a = sample_categorical(policy.step(h).row(s), rng);
    traj.actions.push_back(a);
    traj.rewards.push_back(mdp.reward(s, a));
    s = sample_categorical(mdp.transition_row(s, a), rng);
    traj.states.push_back(s);
  }
  return traj;
}

std::vector<Vector> state_occupancy(const TabularMDP& mdp, const NonstationaryPolicy& policy) {
  const int S = mdp.num_states();
  const int A = mdp.num_actions();
  const int H = mdp.horizon();
  if (policy.horizon() != H) throw InvalidInput("state_occupancy: horizon mismatch");
  std::vector<Vector> occ;
  occ.reserve(static_cast<std::size_t>(H) + 1);
  occ.push_back(mdp.initial_distribution());
  for (int h = 0; h < H; ++h) {
    Vector next = Vector::Zero(S);
    const Vector& cur = occ.back();
    for (int s = 0; s < S; ++s) {
      if (cur(s) == 0.0) continue;
      for (int a = 0; a < A; ++a) {
        const double w = cur(s) * policy.step(h)(s, a);
        if (w == 0.0) continue;
        next += w * mdp.transition_row(s, a).transpose();
      }
    }
    occ.push_back(std::move(next));
  }
  return occ;
}

}  // namespace ratebound
