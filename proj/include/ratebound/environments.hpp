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

#include "ratebound/mdp.hpp"

namespace ratebound {

inline constexpr int kDefaultGridLevels = 11;
inline constexpr int kDefaultMaxProductStates = 4096;

/**
 * A product of N independent component MDPs sharing one action set.
 *
 * Component n (1-based) has rewards in [0, 1/n], seeded random dynamics and a
 * uniform initial distribution. Product states are encoded in mixed radix with
 * component 1 as the least significant digit. `active_components`, when
 * positive, zeroes the rewards of every component past that index while
 * keeping the normalizer unchanged.
 */
struct MultiResSpec {
  std::vector<int> component_states;
  int num_actions = 2;
  int horizon = 5;
  std::uint64_t rng_seed = 0;
  int max_product_states = kDefaultMaxProductStates;
  int active_components = 0;
};

/// The component MDPs of `spec`, rewards unscaled beyond the 1/n bound.
std::vector<TabularMDP> multi_resolution_components(const MultiResSpec& spec);

/// The product MDP. Summed component rewards are divided by sum_n 1/n so the
/// result stays in [0, 1]. Throws CapacityError when the product is too large.
TabularMDP build_multi_resolution(const MultiResSpec& spec);

/// Dirichlet(1) transition rows, rewards uniform on a `grid_levels` grid over
/// [0, 1], uniform initial distribution.
TabularMDP build_random_mdp(int num_states, int num_actions, int horizon, std::uint64_t rng_seed,
                            int grid_levels = kDefaultGridLevels);

/**
 * Deterministic chain over states 0..N-1 starting in state 0.
 *
 * Action 0 moves left (clamped at 0), action 1 moves right (clamped at N-1);
 * any further actions stay put. A transition that lands in state N-1 pays 1,
 * everything else pays 0, so the first reward is reachable at step N-1.
 */
TabularMDP build_chain(int num_states, int horizon, int num_actions = 2);

}  // namespace ratebound
