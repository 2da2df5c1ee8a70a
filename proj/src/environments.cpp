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

#include "ratebound/environments.hpp"

#include <algorithm>
#include <string>

#include "ratebound/errors.hpp"
#include "ratebound/rng.hpp"

namespace ratebound {

namespace {

Matrix random_transitions(int num_states, int num_actions, Rng& rng) {
  Matrix T(static_cast<Eigen::Index>(num_states) * num_actions, num_states);
  const Vector ones = Vector::Ones(num_states);
  for (Eigen::Index row = 0; row < T.rows(); ++row) {
    T.row(row) = sample_dirichlet(ones, rng).transpose();
  }
  return T;
}

double harmonic(int n) {
  double total = 0.0;
  for (int k = 1; k <= n; ++k) total += 1.0 / k;
  return total;
}

}  // namespace

std::vector<TabularMDP> multi_resolution_components(const MultiResSpec& spec) {
  if (spec.component_states.empty()) {
    throw InvalidInput("multi-resolution: need at least one component");
  }
  if (spec.num_actions < 1 || spec.horizon < 1) {
    throw InvalidInput("multi-resolution: sizes must be positive");
  }
  std::vector<TabularMDP> components;
  components.reserve(spec.component_states.size());
  for (std::size_t idx = 0; idx < spec.component_states.size(); ++idx) {
    const int S = spec.component_states[idx];
    if (S < 1) throw InvalidInput("multi-resolution: component state counts must be positive");
    const double scale = 1.0 / static_cast<double>(idx + 1);
    Rng rng(mix_seed(spec.rng_seed, idx));
    Matrix rewards(S, spec.num_actions);
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < spec.num_actions; ++a) rewards(s, a) = scale * uniform01(rng);
    }
    Matrix transitions = random_transitions(S, spec.num_actions, rng);
    components.emplace_back(S, spec.num_actions, spec.horizon, std::move(rewards),
                            std::move(transitions), Vector::Constant(S, 1.0 / S));
  }
  return components;
}

TabularMDP build_multi_resolution(const MultiResSpec& spec) {
  std::size_t product = 1;
  for (int s : spec.component_states) {
    product *= static_cast<std::size_t>(std::max(s, 1));
    if (product > static_cast<std::size_t>(spec.max_product_states)) break;
  }
  if (product > static_cast<std::size_t>(spec.max_product_states)) {
    std::size_t full = 1;
    for (int s : spec.component_states) full *= static_cast<std::size_t>(std::max(s, 1));
    throw CapacityError("multi-resolution: product has " + std::to_string(full) +
                            " states, cap is " + std::to_string(spec.max_product_states),
                        full);
  }
  const auto components = multi_resolution_components(spec);
  const int N = static_cast<int>(components.size());
  const int A = spec.num_actions;
  const int S = static_cast<int>(product);
  const int active = spec.active_components > 0 ? std::min(spec.active_components, N) : N;
  const double normalizer = harmonic(N);

  // digits[s][n] is the state of component n inside product state s.
  std::vector<std::vector<int>> digits(static_cast<std::size_t>(S), std::vector<int>(N));
  for (int s = 0; s < S; ++s) {
    int rest = s;
    for (int n = 0; n < N; ++n) {
      digits[s][n] = rest % components[n].num_states();
      rest /= components[n].num_states();
    }
  }

  Matrix rewards = Matrix::Zero(S, A);
  Matrix transitions(static_cast<Eigen::Index>(S) * A, S);
  Vector initial(S);
  for (int s = 0; s < S; ++s) {
    double p0 = 1.0;
    for (int n = 0; n < N; ++n) p0 *= components[n].initial_distribution()(digits[s][n]);
    initial(s) = p0;
    for (int a = 0; a < A; ++a) {
      double r = 0.0;
      for (int n = 0; n < active; ++n) r += components[n].reward(digits[s][n], a);
      rewards(s, a) = std::min(1.0, r / normalizer);
      const Eigen::Index row = static_cast<Eigen::Index>(s) * A + a;
      for (int sp = 0; sp < S; ++sp) {
        double p = 1.0;
        for (int n = 0; n < N; ++n) {
          p *= components[n].transition_row(digits[s][n], a)(digits[sp][n]);
        }
        transitions(row, sp) = p;
      }
    }
  }
  // Products of normalized rows drift by a few ulps; renormalize exactly.
  for (Eigen::Index row = 0; row < transitions.rows(); ++row) {
    transitions.row(row) /= transitions.row(row).sum();
  }
  initial /= initial.sum();
  return TabularMDP(S, A, spec.horizon, std::move(rewards), std::move(transitions),
                    std::move(initial));
}

TabularMDP build_random_mdp(int num_states, int num_actions, int horizon, std::uint64_t rng_seed,
                            int grid_levels) {
  if (num_states < 1 || num_actions < 1 || horizon < 1) {
    throw InvalidInput("build_random_mdp: sizes must be positive");
  }
  if (grid_levels < 2) throw InvalidInput("build_random_mdp: grid needs at least 2 levels");
  Rng rng(rng_seed);
  Matrix rewards(num_states, num_actions);
  std::uniform_int_distribution<int> level(0, grid_levels - 1);
  for (int s = 0; s < num_states; ++s) {
    for (int a = 0; a < num_actions; ++a) {
      rewards(s, a) = static_cast<double>(level(rng)) / (grid_levels - 1);
    }
  }
  Matrix transitions = random_transitions(num_states, num_actions, rng);
  return TabularMDP(num_states, num_actions, horizon, std::move(rewards), std::move(transitions),
                    Vector::Constant(num_states, 1.0 / num_states));
}

TabularMDP build_chain(int num_states, int horizon, int num_actions) {
  if (num_states < 1 || horizon < 1 || num_actions < 2) {
    throw InvalidInput("build_chain: need positive sizes and at least two actions");
  }
  const int S = num_states;
  const int A = num_actions;
  Matrix rewards = Matrix::Zero(S, A);
  Matrix transitions = Matrix::Zero(static_cast<Eigen::Index>(S) * A, S);
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) {
      int next = s;
      if (a == 0) next = std::max(s - 1, 0);
      if (a == 1) next = std::min(s + 1, S - 1);
      transitions(static_cast<Eigen::Index>(s) * A + a, next) = 1.0;
      if (next == S - 1) rewards(s, a) = 1.0;
    }
  }
  Vector initial = Vector::Zero(S);
  initial(0) = 1.0;
  return TabularMDP(S, A, horizon, std::move(rewards), std::move(transitions), std::move(initial));
}

}  // namespace ratebound
