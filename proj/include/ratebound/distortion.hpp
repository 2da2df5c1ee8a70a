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
#include <memory>
#include <mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "ratebound/mdp.hpp"

namespace ratebound {

enum class DistortionKind { QStar, PiV, Phi };

/// Deterministic stationary decision rule: action per state.
using StationaryPolicy = std::vector<int>;

/// State abstraction S -> [Z].
using Abstraction = std::vector<int>;

/// An abstract MDP is an ordinary TabularMDP over Z abstract states.
using AbstractMDP = TabularMDP;

struct DistortionSpec {
  DistortionKind kind = DistortionKind::QStar;

  // PiV: the finite policy class. When `add_greedy_policies` is set, the
  // per-step greedy rules of both compared MDPs are appended per pair.
  std::vector<StationaryPolicy> policy_class;
  bool add_greedy_policies = false;

  // Phi: the abstraction class and the abstract state count Z.
  std::vector<Abstraction> abstractions;
  int num_abstract_states = 0;
};

inline constexpr int kMaxEnumeratedPolicies = 256;

/// Every map S -> A, in lexicographic order with state 0 most significant.
std::vector<StationaryPolicy> all_deterministic_policies(int num_states, int num_actions);

/// All deterministic stationary policies when |A|^|S| <= cap, else `cap`
/// seeded random ones (and the spec asks for greedy rules to be appended).
DistortionSpec default_piv_spec(int num_states, int num_actions, std::uint64_t seed,
                                int cap = kMaxEnumeratedPolicies);

/// sup_h ||Q*_{m1,h} - Q*_{m2,h}||_inf^2.
double d_qstar(const TabularMDP& m1, const TabularMDP& m2);
double d_qstar(const ValueTable& q1, const ValueTable& q2);

/// sup over pi in Pi and V in the induced value class of
/// ||B^pi_{m1} V - B^pi_{m2} V||_inf^2. The value class holds V^pi_{m,h} of
/// both MDPs for every pi in the class and h in 0..H, plus both optimal value
/// functions.
double d_pi_v(const TabularMDP& m1, const TabularMDP& m2, const DistortionSpec& spec);

/// sup over phi in Phi, h, (s,a) of (Q*_{m,h}(s,a) - Q*_{abs,h}(phi(s),a))^2.
double d_phi(const TabularMDP& m, const AbstractMDP& m_abs, const DistortionSpec& spec);

/// The phi-specific inner term of d_phi.
double abstraction_gap(const ValueTable& ground, const ValueTable& abstract_values,
                       const Abstraction& phi);

/// Aggregates `m` through `phi` with uniform weights over each block: block
/// rewards and block-to-block transition masses are averaged over member
/// states. Empty blocks become absorbing with zero reward.
AbstractMDP abstract_mdp(const TabularMDP& m, const Abstraction& phi, int num_abstract_states);

/// Composes an abstract policy with phi to act on ground states.
NonstationaryPolicy compose_policy(const NonstationaryPolicy& abstract_policy,
                                   const Abstraction& phi);

/// Mod-Z map followed by `extra` seeded random surjections S -> [Z].
std::vector<Abstraction> default_abstractions(int num_states, int num_abstract_states, int count,
                                              std::uint64_t seed);

/**
 * Optimal-planning results keyed by MDP content hash. Inserts are idempotent,
 * so concurrent writers may race without changing what readers observe.
 */
class PlanningCache {
 public:
  std::shared_ptr<const PlanResult> get(const TabularMDP& mdp);
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::unordered_map<std::uint64_t, std::shared_ptr<const PlanResult>> entries_;
};

/// values(i, j) = d(source_i, output_j). Each distinct atom is planned once.
Matrix distortion_matrix(std::span<const TabularMDP> source_atoms,
                         std::span<const TabularMDP> output_atoms, const DistortionSpec& spec,
                         PlanningCache* cache = nullptr);

}  // namespace ratebound
