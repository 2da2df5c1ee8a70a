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

#include <random>
#include <vector>

#include "ratebound/bayes.hpp"
#include "ratebound/environments.hpp"
#include "ratebound/mdp.hpp"
#include "ratebound/rng.hpp"

namespace ratebound::testing {

/// A random stochastic nonstationary policy with Dirichlet(1) rows.
inline NonstationaryPolicy random_policy(int S, int A, int H, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Matrix> steps;
  for (int h = 0; h < H; ++h) {
    Matrix step(S, A);
    for (int s = 0; s < S; ++s) step.row(s) = sample_dirichlet(Vector::Ones(A), rng).transpose();
    steps.push_back(step);
  }
  return NonstationaryPolicy(std::move(steps));
}

/// Forward state distributions computed with plain loops.
inline std::vector<std::vector<double>> occupancy_oracle(const TabularMDP& m,
                                                         const NonstationaryPolicy& pi) {
  const int S = m.num_states();
  const int A = m.num_actions();
  std::vector<std::vector<double>> out(static_cast<std::size_t>(m.horizon()) + 1,
                                       std::vector<double>(static_cast<std::size_t>(S), 0.0));
  for (int s = 0; s < S; ++s) out[0][static_cast<std::size_t>(s)] = m.initial_distribution()(s);
  for (int h = 0; h < m.horizon(); ++h) {
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        const double w = out[static_cast<std::size_t>(h)][static_cast<std::size_t>(s)] * pi.step(h)(s, a);
        for (int sp = 0; sp < S; ++sp) {
          out[static_cast<std::size_t>(h) + 1][static_cast<std::size_t>(sp)] +=
              w * m.transitions()(static_cast<Eigen::Index>(s) * A + a, sp);
        }
      }
    }
  }
  return out;
}

/// Prior sharpened by `trajectories` uniform-policy episodes on a random truth.
inline Posterior observed_posterior(int S, int A, int H, std::uint64_t seed, int trajectories) {
  const TabularMDP truth = build_random_mdp(S, A, H, seed);
  Posterior post = init_prior(S, A, H, kDefaultGridLevels, 1.0, truth.initial_distribution());
  const auto uniform = NonstationaryPolicy::uniform(S, A, H);
  for (int t = 0; t < trajectories; ++t) {
    post = update(post, sample_trajectory(truth, uniform, mix_seed(seed, static_cast<std::uint64_t>(t))));
  }
  return post;
}

}  // namespace ratebound::testing
