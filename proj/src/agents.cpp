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

#include "ratebound/agents.hpp"

#include <string>

#include "ratebound/errors.hpp"
#include "ratebound/rng.hpp"

namespace ratebound {

namespace {

// Sub-stream tags under one episode seed.
constexpr std::uint64_t kAtomStream = kAtomSubstream;
constexpr std::uint64_t kSourceStream = 2;
constexpr std::uint64_t kChannelStream = 3;

struct SolvedChannel {
  ChannelSolution solution;
  double threshold;
};

SolvedChannel solve_channel(const Vector& p, const Matrix& dmat, const AgentConfig& cfg) {
  if (cfg.rate_budget) {
    ChannelSolution sol = solve_distortion_rate(p, dmat, *cfg.rate_budget, cfg.solver);
    const double threshold = sol.expected_distortion;
    return {std::move(sol), threshold};
  }
  return {solve_rate_distortion(p, dmat, cfg.distortion_threshold, cfg.solver),
          cfg.distortion_threshold};
}

int draw_source(std::size_t m, std::uint64_t seed) {
  Rng rng(mix_seed(seed, kSourceStream));
  return sample_categorical(Vector::Constant(static_cast<Eigen::Index>(m), 1.0), rng);
}

}  // namespace

void validate(const AgentConfig& cfg) {
  if (!(cfg.distortion_threshold >= 0.0)) throw InvalidInput("agent: distortion threshold must be >= 0");
  if (cfg.rate_budget && !(*cfg.rate_budget >= 0.0)) throw InvalidInput("agent: rate budget must be >= 0");
  if (cfg.kind == AgentKind::PSRL) return;
  if (cfg.num_atoms < 2) throw InvalidInput("agent: VSRL and CVSRL need at least two atoms");
  if (cfg.kind == AgentKind::VSRL) {
    if (cfg.distortion.kind == DistortionKind::Phi) {
      throw InvalidInput("agent: VSRL takes a QStar or PiV distortion");
    }
    if (cfg.distortion.kind == DistortionKind::PiV && cfg.distortion.policy_class.empty()) {
      throw InvalidInput("agent: PiV distortion needs a nonempty policy class");
    }
    return;
  }
  if (cfg.distortion.kind != DistortionKind::Phi || cfg.distortion.abstractions.empty() ||
      cfg.distortion.num_abstract_states < 1) {
    throw InvalidInput("agent: CVSRL needs a Phi distortion with a nonempty abstraction class");
  }
}

EpisodePlan psrl_begin_episode(const Posterior& post, std::uint64_t rng_seed) {
  auto atoms = sample_atoms(post, 1, mix_seed(rng_seed, kAtomStream));
  TabularMDP atom = std::move(atoms.front());
  PlanResult plan = plan_backward_induction(atom);
  return EpisodePlan{.policy = std::move(plan.policy),
                     .sampled_true_atom = atom,
                     .target_atom = atom,
                     .target_ground = atom};
}

EpisodePlan vsrl_plan_from_atoms(std::vector<TabularMDP> atoms, const Matrix& dmat,
                                 const AgentConfig& cfg, std::uint64_t rng_seed) {
  const auto m = atoms.size();
  if (m == 0 || dmat.rows() != static_cast<Eigen::Index>(m) ||
      dmat.cols() != static_cast<Eigen::Index>(m)) {
    throw InvalidInput("vsrl: distortion matrix must be square over the atom set");
  }
  const Vector p = Vector::Constant(static_cast<Eigen::Index>(m), 1.0 / static_cast<double>(m));
  SolvedChannel solved;
  try {
    solved = solve_channel(p, dmat, cfg);
  } catch (const InfeasibleDistortion& e) {
    throw InfeasibleDistortion(std::string("vsrl episode: ") + e.what());
  }
  const int source = draw_source(m, rng_seed);
  const int output = sample_through_channel(solved.solution, source,
                                            mix_seed(rng_seed, kChannelStream));
  PlanResult plan = plan_backward_induction(atoms[static_cast<std::size_t>(output)]);
  const double entropy = plug_in_entropy(atoms, cfg.solver.zero_tol);
  return EpisodePlan{.policy = std::move(plan.policy),
                     .sampled_true_atom = atoms[static_cast<std::size_t>(source)],
                     .target_atom = atoms[static_cast<std::size_t>(output)],
                     .target_ground = atoms[static_cast<std::size_t>(output)],
                     .channel_solution = std::move(solved.solution),
                     .realized_distortion = dmat(source, output),
                     .source_index = source,
                     .output_index = output,
                     .distortion_threshold = solved.threshold,
                     .atom_entropy = entropy};
}

EpisodePlan vsrl_begin_episode(const Posterior& post, const AgentConfig& cfg,
                               std::uint64_t rng_seed) {
  if (cfg.kind != AgentKind::VSRL) throw InvalidInput("vsrl_begin_episode: config kind is not VSRL");
  validate(cfg);
  auto atoms = sample_atoms(post, cfg.num_atoms, mix_seed(rng_seed, kAtomStream));
  PlanningCache cache;
  const Matrix dmat = distortion_matrix(atoms, atoms, cfg.distortion, &cache);
  return vsrl_plan_from_atoms(std::move(atoms), dmat, cfg, rng_seed);
}

int select_abstraction(const ValueTable& ground, const ValueTable& abstract_values,
                       const std::vector<Abstraction>& abstractions) {
  if (abstractions.empty()) throw InvalidInput("select_abstraction: empty abstraction class");
  int best = 0;
  double best_gap = abstraction_gap(ground, abstract_values, abstractions.front());
  for (std::size_t k = 1; k < abstractions.size(); ++k) {
    const double gap = abstraction_gap(ground, abstract_values, abstractions[k]);
    if (gap < best_gap) {
      best_gap = gap;
      best = static_cast<int>(k);
    }
  }
  return best;
}

std::vector<AbstractMDP> abstract_alphabet(std::span<const TabularMDP> atoms,
                                           const DistortionSpec& spec) {
  std::vector<AbstractMDP> outputs;
  outputs.reserve(atoms.size() * spec.abstractions.size());
  for (const auto& atom : atoms) {
    for (const auto& phi : spec.abstractions) {
      outputs.push_back(abstract_mdp(atom, phi, spec.num_abstract_states));
    }
  }
  return outputs;
}

EpisodePlan cvsrl_begin_episode(const Posterior& post, const AgentConfig& cfg,
                                std::uint64_t rng_seed) {
  if (cfg.kind != AgentKind::CVSRL) throw InvalidInput("cvsrl_begin_episode: config kind is not CVSRL");
  validate(cfg);
  const auto& phis = cfg.distortion.abstractions;
  auto atoms = sample_atoms(post, cfg.num_atoms, mix_seed(rng_seed, kAtomStream));

  const std::vector<AbstractMDP> outputs = abstract_alphabet(atoms, cfg.distortion);
  if (outputs.empty()) throw InfeasibleAbstraction("cvsrl: empty abstract reproduction alphabet");

  PlanningCache cache;
  const Matrix dmat = distortion_matrix(atoms, outputs, cfg.distortion, &cache);
  const auto m = atoms.size();
  const Vector p = Vector::Constant(static_cast<Eigen::Index>(m), 1.0 / static_cast<double>(m));
  SolvedChannel solved;
  try {
    solved = solve_channel(p, dmat, cfg);
  } catch (const InfeasibleDistortion& e) {
    throw InfeasibleAbstraction(std::string("cvsrl episode: no abstract MDP within the threshold: ") +
                                e.what());
  }
  const int source = draw_source(m, rng_seed);
  const int output =
      sample_through_channel(solved.solution, source, mix_seed(rng_seed, kChannelStream));
  const AbstractMDP& target = outputs[static_cast<std::size_t>(output)];
  const auto ground_plan = cache.get(atoms[static_cast<std::size_t>(source)]);
  const auto abstract_plan = cache.get(target);
  const int chosen = select_abstraction(ground_plan->values, abstract_plan->values, phis);
  const Abstraction& phi = phis[static_cast<std::size_t>(chosen)];
  const double entropy = plug_in_entropy(atoms, cfg.solver.zero_tol);
  return EpisodePlan{.policy = compose_policy(abstract_plan->policy, phi),
                     .sampled_true_atom = atoms[static_cast<std::size_t>(source)],
                     .target_atom = target,
                     .target_ground = atoms[static_cast<std::size_t>(output) / phis.size()],
                     .channel_solution = std::move(solved.solution),
                     .realized_distortion = dmat(source, output),
                     .chosen_abstraction = phi,
                     .source_index = source,
                     .output_index = output,
                     .distortion_threshold = solved.threshold,
                     .atom_entropy = entropy};
}

EpisodePlan begin_episode(const Posterior& post, const AgentConfig& cfg, std::uint64_t rng_seed) {
  switch (cfg.kind) {
    case AgentKind::PSRL:
      return psrl_begin_episode(post, rng_seed);
    case AgentKind::VSRL:
      return vsrl_begin_episode(post, cfg, rng_seed);
    case AgentKind::CVSRL:
      return cvsrl_begin_episode(post, cfg, rng_seed);
  }
  throw InvalidInput("begin_episode: unknown agent kind");
}

Posterior agent_end_episode(const Posterior& post, const Trajectory& traj) {
  return update(post, traj);
}

}  // namespace ratebound
