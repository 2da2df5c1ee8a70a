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

#include "ratebound/bayes.hpp"

#include <cmath>

#include "ratebound/distortion.hpp"
#include "ratebound/errors.hpp"
#include "ratebound/rng.hpp"

namespace ratebound {

Posterior::Posterior(int num_states, int num_actions, int horizon, Matrix transition_counts,
                     Matrix reward_weights, Vector initial_distribution, double prior_floor)
    : num_states_(num_states),
      num_actions_(num_actions),
      horizon_(horizon),
      counts_(std::move(transition_counts)),
      reward_weights_(std::move(reward_weights)),
      initial_(std::move(initial_distribution)),
      prior_floor_(prior_floor) {
  if (num_states < 1 || num_actions < 1 || horizon < 1) {
    throw InvalidInput("Posterior: sizes must be positive");
  }
  const auto pairs = static_cast<Eigen::Index>(num_states) * num_actions;
  if (counts_.rows() != pairs || counts_.cols() != num_states) {
    throw InvalidInput("Posterior: counts must be (|S||A|) x |S|");
  }
  if (reward_weights_.rows() != pairs || reward_weights_.cols() < 2) {
    throw InvalidInput("Posterior: reward grid needs at least two levels per pair");
  }
  if (!(prior_floor > 0.0)) throw InvalidInput("Posterior: concentration must be positive");
  if ((counts_.array() < prior_floor).any()) {
    throw InvalidInput("Posterior: concentration below the prior floor");
  }
  if (initial_.size() != num_states || std::abs(initial_.sum() - 1.0) > kSimplexTol ||
      (initial_.array() < 0.0).any()) {
    throw InvalidInput("Posterior: initial distribution is not a distribution");
  }
}

int Posterior::nearest_level(double r) const {
  const int G = grid_levels();
  const double scaled = std::clamp(r, 0.0, 1.0) * (G - 1);
  return static_cast<int>(std::lround(scaled));
}

std::optional<double> Posterior::known_reward(int s, int a) const {
  const auto row = reward_weights_.row(static_cast<Eigen::Index>(s) * num_actions_ + a);
  for (Eigen::Index g = 0; g < row.size(); ++g) {
    if (row(g) == 1.0) return grid_level(static_cast<int>(g));
  }
  return std::nullopt;
}

Vector Posterior::mean_transition(int s, int a) const {
  const auto row = counts_.row(static_cast<Eigen::Index>(s) * num_actions_ + a);
  return row.transpose() / row.sum();
}

bool operator==(const Posterior& a, const Posterior& b) {
  return a.num_states_ == b.num_states_ && a.num_actions_ == b.num_actions_ &&
         a.horizon_ == b.horizon_ && a.counts_ == b.counts_ &&
         a.reward_weights_ == b.reward_weights_ && a.initial_ == b.initial_ &&
         a.prior_floor_ == b.prior_floor_ && a.grid_mismatches_ == b.grid_mismatches_;
}

Posterior init_prior(int num_states, int num_actions, int horizon, int grid_levels,
                     double concentration, const std::optional<Vector>& initial_distribution) {
  if (grid_levels < 2) throw InvalidInput("init_prior: grid needs at least two levels");
  if (!(concentration > 0.0)) throw InvalidInput("init_prior: concentration must be positive");
  if (num_states < 1 || num_actions < 1) throw InvalidInput("init_prior: sizes must be positive");
  const auto pairs = static_cast<Eigen::Index>(num_states) * num_actions;
  Vector initial = initial_distribution.value_or(Vector::Constant(num_states, 1.0 / num_states));
  return Posterior(num_states, num_actions, horizon,
                   Matrix::Constant(pairs, num_states, concentration),
                   Matrix::Constant(pairs, grid_levels, 1.0 / grid_levels), std::move(initial),
                   concentration);
}

Posterior collapsed_posterior(const TabularMDP& truth, int grid_levels, double strength,
                              double concentration) {
  Posterior prior = init_prior(truth.num_states(), truth.num_actions(), truth.horizon(),
                               grid_levels, concentration, truth.initial_distribution());
  Matrix counts = prior.transition_counts() + strength * truth.transitions();
  Matrix weights = Matrix::Zero(prior.reward_weights().rows(), grid_levels);
  for (int s = 0; s < truth.num_states(); ++s) {
    for (int a = 0; a < truth.num_actions(); ++a) {
      weights(static_cast<Eigen::Index>(s) * truth.num_actions() + a,
              prior.nearest_level(truth.reward(s, a))) = 1.0;
    }
  }
  return Posterior(truth.num_states(), truth.num_actions(), truth.horizon(), std::move(counts),
                   std::move(weights), truth.initial_distribution(), concentration);
}

Posterior update(const Posterior& post, const Trajectory& traj) {
  const int H = traj.horizon();
  if (H == 0) throw InvalidInput("update: empty trajectory");
  if (static_cast<int>(traj.states.size()) != H + 1 || static_cast<int>(traj.rewards.size()) != H) {
    throw InvalidInput("update: trajectory lengths are inconsistent");
  }
  Posterior next = post;
  const int S = post.num_states();
  const int A = post.num_actions();
  const double half_cell = 0.5 / (post.grid_levels() - 1);
  for (int h = 0; h < H; ++h) {
    const int s = traj.states[static_cast<std::size_t>(h)];
    const int a = traj.actions[static_cast<std::size_t>(h)];
    const int sp = traj.states[static_cast<std::size_t>(h) + 1];
    if (s < 0 || s >= S || sp < 0 || sp >= S || a < 0 || a >= A) {
      throw InvalidInput("update: trajectory index out of range");
    }
    const Eigen::Index row = static_cast<Eigen::Index>(s) * A + a;
    next.counts_(row, sp) += 1.0;
    const double r = traj.rewards[static_cast<std::size_t>(h)];
    const int g = post.nearest_level(r);
    if (std::abs(r - post.grid_level(g)) > half_cell + 1e-12) ++next.grid_mismatches_;
    next.reward_weights_.row(row).setZero();
    next.reward_weights_(row, g) = 1.0;
  }
  return next;
}

std::vector<TabularMDP> sample_atoms(const Posterior& post, int m, std::uint64_t rng_seed) {
  if (m < 1) throw InvalidInput("sample_atoms: need at least one atom");
  const int S = post.num_states();
  const int A = post.num_actions();
  Rng rng(rng_seed);
  std::vector<TabularMDP> atoms;
  atoms.reserve(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    Matrix rewards(S, A);
    Matrix transitions(static_cast<Eigen::Index>(S) * A, S);
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        const Eigen::Index row = static_cast<Eigen::Index>(s) * A + a;
        rewards(s, a) = post.grid_level(sample_categorical(post.reward_weights().row(row), rng));
        transitions.row(row) = sample_dirichlet(post.transition_counts().row(row), rng).transpose();
      }
    }
    atoms.emplace_back(S, A, post.horizon(), std::move(rewards), std::move(transitions),
                       post.initial_distribution());
  }
  return atoms;
}

double plug_in_entropy(std::span<const TabularMDP> atoms, double equality_tol) {
  if (atoms.empty()) throw InvalidInput("plug_in_entropy: no atoms");
  std::vector<std::shared_ptr<const PlanResult>> plans;
  PlanningCache cache;
  for (const auto& m : atoms) plans.push_back(cache.get(m));
  std::vector<std::size_t> representatives;
  std::vector<double> sizes;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    bool merged = false;
    for (std::size_t c = 0; c < representatives.size(); ++c) {
      if (d_qstar(plans[i]->values, plans[representatives[c]]->values) <= equality_tol) {
        sizes[c] += 1.0;
        merged = true;
        break;
      }
    }
    if (!merged) {
      representatives.push_back(i);
      sizes.push_back(1.0);
    }
  }
  const double total = static_cast<double>(atoms.size());
  double entropy = 0.0;
  for (double n : sizes) entropy -= (n / total) * std::log(n / total);
  return std::max(entropy, 0.0);
}

}  // namespace ratebound
