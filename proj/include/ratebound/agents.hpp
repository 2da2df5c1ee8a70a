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
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "ratebound/bayes.hpp"
#include "ratebound/distortion.hpp"
#include "ratebound/mdp.hpp"
#include "ratebound/rate_distortion.hpp"

namespace ratebound {

enum class AgentKind { PSRL, VSRL, CVSRL };

/// Sub-stream tag, mixed into an episode seed, that drives atom sampling.
inline constexpr std::uint64_t kAtomSubstream = 1;

struct AgentConfig {
  AgentKind kind = AgentKind::PSRL;
  double distortion_threshold = 0.0;
  /// Capacity mode: when set and `distortion_threshold` has not been resolved
  /// yet, the threshold becomes D(R) of the episode's atoms.
  std::optional<double> rate_budget;
  int num_atoms = 32;
  DistortionSpec distortion;
  SolverOptions solver;
};

/// Throws InvalidInput when the config cannot drive its agent kind.
void validate(const AgentConfig& cfg);

/**
 * Everything an agent decided for one episode.
 *
 * For PSRL the target is the posterior sample itself. For VSRL the source
 * atom is the uniformly drawn atom standing in for the M* sample and the
 * target is its channel output. For CVSRL the target is an abstract MDP and
 * `target_ground` is the ground atom it was aggregated from.
 */
struct EpisodePlan {
  NonstationaryPolicy policy;
  TabularMDP sampled_true_atom;
  TabularMDP target_atom;
  TabularMDP target_ground;
  std::optional<ChannelSolution> channel_solution;
  double realized_distortion = 0.0;
  std::optional<Abstraction> chosen_abstraction;
  int source_index = 0;
  int output_index = 0;
  /// The threshold the channel was solved at (differs from the config in
  /// capacity mode).
  double distortion_threshold = 0.0;
  /// Plug-in entropy of the atom set; NaN for PSRL.
  double atom_entropy = std::numeric_limits<double>::quiet_NaN();
};

EpisodePlan psrl_begin_episode(const Posterior& post, std::uint64_t rng_seed);

EpisodePlan vsrl_begin_episode(const Posterior& post, const AgentConfig& cfg,
                               std::uint64_t rng_seed);

/// The VSRL steps after atom sampling: solve the channel on a uniform source
/// over `atoms` with distortion matrix `dmat`, draw the source and output
/// indices, and plan on the output.
EpisodePlan vsrl_plan_from_atoms(std::vector<TabularMDP> atoms, const Matrix& dmat,
                                 const AgentConfig& cfg, std::uint64_t rng_seed);

/// CVSRL reproduction alphabet: output o = atom * |Phi| + phi index.
std::vector<AbstractMDP> abstract_alphabet(std::span<const TabularMDP> atoms,
                                           const DistortionSpec& spec);

EpisodePlan cvsrl_begin_episode(const Posterior& post, const AgentConfig& cfg,
                                std::uint64_t rng_seed);

/// Index of the abstraction minimizing sup_h ||Q*_{ground,h} - Q*_{abs,h} o phi||^2,
/// lowest index on ties.
int select_abstraction(const ValueTable& ground, const ValueTable& abstract_values,
                       const std::vector<Abstraction>& abstractions);

/// Dispatches on `cfg.kind`.
EpisodePlan begin_episode(const Posterior& post, const AgentConfig& cfg, std::uint64_t rng_seed);

Posterior agent_end_episode(const Posterior& post, const Trajectory& traj);

}  // namespace ratebound
