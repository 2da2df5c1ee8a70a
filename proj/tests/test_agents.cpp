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


#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ratebound/agents.hpp"
#include "ratebound/bayes.hpp"
#include "ratebound/distortion.hpp"
#include "ratebound/environments.hpp"
#include "ratebound/errors.hpp"
#include "test_support.hpp"

namespace ratebound {
namespace {

AgentConfig vsrl_config(double D, int m = 8) {
  AgentConfig cfg;
  cfg.kind = AgentKind::VSRL;
  cfg.distortion_threshold = D;
  cfg.num_atoms = m;
  return cfg;
}

AgentConfig cvsrl_config(double D, std::vector<Abstraction> phis, int Z, int m = 6) {
  AgentConfig cfg;
  cfg.kind = AgentKind::CVSRL;
  cfg.distortion_threshold = D;
  cfg.num_atoms = m;
  cfg.distortion.kind = DistortionKind::Phi;
  cfg.distortion.abstractions = std::move(phis);
  cfg.distortion.num_abstract_states = Z;
  return cfg;
}

TEST(AgentConfigTest, ValidateRejectsUnusableConfigs) {
  EXPECT_NO_THROW(validate(AgentConfig{}));
  EXPECT_THROW(validate(vsrl_config(0.1, 1)), InvalidInput);
  EXPECT_THROW(validate(vsrl_config(-0.1)), InvalidInput);
  AgentConfig piv = vsrl_config(0.1);
  piv.distortion.kind = DistortionKind::PiV;
  EXPECT_THROW(validate(piv), InvalidInput);
  EXPECT_THROW(validate(cvsrl_config(0.1, {}, 2)), InvalidInput);
}

TEST(PsrlTest, CollapsedPosteriorPlansTheTruth) {
  const TabularMDP truth = build_random_mdp(3, 2, 4, 3);
  const auto plan = psrl_begin_episode(collapsed_posterior(truth, kDefaultGridLevels), 9);
  const auto optimal = plan_backward_induction(truth).policy;
  for (int h = 0; h < 4; ++h) {
    for (int s = 0; s < 3; ++s) EXPECT_EQ(plan.policy.deterministic_action(h, s), optimal.deterministic_action(h, s));
  }
  EXPECT_FALSE(plan.channel_solution.has_value());
}

TEST(PsrlTest, SameSeedSamePlan) {
  const Posterior post = testing::observed_posterior(3, 2, 3, 4, 3);
  const auto a = psrl_begin_episode(post, 17);
  const auto b = psrl_begin_episode(post, 17);
  EXPECT_TRUE(a.target_atom == b.target_atom);
  EXPECT_EQ(a.policy.steps(), b.policy.steps());
}

TEST(VsrlTest, LooseThresholdCollapsesToOneAtom) {
  const Posterior post = testing::observed_posterior(3, 2, 3, 5, 0);
  int first_output = -1;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto plan = vsrl_begin_episode(post, vsrl_config(1e6), seed);
    EXPECT_EQ(plan.channel_solution->rate_nats, 0.0);
    if (seed == 0) first_output = plan.output_index;
    // Atoms differ per seed, but the channel must be a single column.
    const Matrix& q = plan.channel_solution->channel;
    EXPECT_EQ(q.col(plan.output_index).sum(), static_cast<double>(q.rows()));
  }
  EXPECT_GE(first_output, 0);
}

TEST(VsrlTest, ZeroThresholdUsesTheIdentityChannel) {
  const Posterior post = testing::observed_posterior(3, 2, 3, 6, 0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto plan = vsrl_begin_episode(post, vsrl_config(0.0), seed);
    EXPECT_TRUE(plan.channel_solution->channel.isApprox(Matrix::Identity(8, 8)));
    EXPECT_EQ(plan.source_index, plan.output_index);
    EXPECT_EQ(plan.realized_distortion, 0.0);
  }
}

TEST(VsrlTest, RealizedDistortionIsRecomputable) {
  const Posterior post = testing::observed_posterior(3, 2, 3, 7, 2);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto plan = vsrl_begin_episode(post, vsrl_config(0.05), seed);
    EXPECT_EQ(plan.realized_distortion, d_qstar(plan.sampled_true_atom, plan.target_atom));
  }
}

TEST(VsrlTest, ChannelAndRateContracts) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Posterior post = testing::observed_posterior(3, 2, 3, seed, 3);
    const auto plan = vsrl_begin_episode(post, vsrl_config(0.05), seed);
    EXPECT_LE(plan.channel_solution->expected_distortion, 0.05 + 1e-6 * 1.05);
    EXPECT_LE(plan.channel_solution->rate_nats, plan.atom_entropy + 1e-6);
  }
}

TEST(VsrlTest, RateIsMonotoneInThresholdOnFrozenAtoms) {
  const Posterior post = testing::observed_posterior(3, 2, 3, 8, 1);
  const auto atoms = sample_atoms(post, 8, 3);
  const Matrix d = distortion_matrix(atoms, atoms, DistortionSpec{});
  double prev = INFINITY;
  for (double D : {0.0, 0.01, 0.05, 0.1, 0.5, 2.0}) {
    const auto plan = vsrl_plan_from_atoms(atoms, d, vsrl_config(D), 1);
    EXPECT_LE(plan.channel_solution->rate_nats, prev + 1e-6);
    prev = plan.channel_solution->rate_nats;
  }
}

TEST(VsrlTest, OutputFrequenciesFollowSourceTimesChannel) {
  // Three hand-built atoms with a hand-set distortion matrix.
  std::vector<TabularMDP> atoms;
  for (std::uint64_t i = 0; i < 3; ++i) atoms.push_back(build_random_mdp(2, 2, 2, i));
  const Matrix d = (Matrix(3, 3) << 0, 0.2, 1.0, 0.2, 0, 0.6, 1.0, 0.6, 0).finished();
  const AgentConfig cfg = vsrl_config(0.15, 3);
  const Matrix q = vsrl_plan_from_atoms(atoms, d, cfg, 0).channel_solution->channel;
  const Vector expected = q.colwise().sum().transpose() / 3.0;

  constexpr int kSeeds = 10000;
  Vector counts = Vector::Zero(3);
  for (int seed = 0; seed < kSeeds; ++seed) {
    counts(vsrl_plan_from_atoms(atoms, d, cfg, static_cast<std::uint64_t>(seed)).output_index) += 1;
  }
  for (int j = 0; j < 3; ++j) {
    const double pj = expected(j);
    EXPECT_NEAR(counts(j) / kSeeds, pj, 3 * std::sqrt(pj * (1 - pj) / kSeeds) + 1e-12) << "output " << j;
  }
}

TEST(VsrlTest, InfeasibleThresholdCarriesEpisodeContext) {
  std::vector<TabularMDP> atoms;
  for (std::uint64_t i = 0; i < 2; ++i) atoms.push_back(build_random_mdp(2, 2, 2, i));
  const Matrix d = (Matrix(2, 2) << 0.5, 1, 1, 0.5).finished();
  try {
    vsrl_plan_from_atoms(atoms, d, vsrl_config(0.1, 2), 0);
    FAIL() << "expected InfeasibleDistortion";
  } catch (const InfeasibleDistortion& e) {
    EXPECT_NE(std::string(e.what()).find("vsrl episode"), std::string::npos);
  }
}

TEST(VsrlTest, RateBudgetSetsTheThreshold) {
  const Posterior post = testing::observed_posterior(3, 2, 3, 9, 1);
  AgentConfig cfg = vsrl_config(0.0);
  cfg.rate_budget = 0.5;
  const auto plan = vsrl_begin_episode(post, cfg, 4);
  EXPECT_LE(plan.channel_solution->rate_nats, 0.5 + 1e-6);
  EXPECT_EQ(plan.distortion_threshold, plan.channel_solution->expected_distortion);
}

TEST(CvsrlTest, LosslessAbstractionReducesToVsrl) {
  const Posterior post = testing::observed_posterior(3, 2, 3, 10, 2);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto c = cvsrl_begin_episode(post, cvsrl_config(0.05, {{0, 1, 2}}, 3), seed);
    const auto v = vsrl_begin_episode(post, vsrl_config(0.05, 6), seed);
    EXPECT_NEAR(c.channel_solution->rate_nats, v.channel_solution->rate_nats, 1e-6);
    EXPECT_TRUE(c.sampled_true_atom == v.sampled_true_atom);
  }
}

TEST(CvsrlTest, SingleAbstractStateGivesStateIndependentPolicy) {
  const Posterior post = testing::observed_posterior(4, 2, 3, 11, 2);
  const auto plan = cvsrl_begin_episode(post, cvsrl_config(10.0, {{0, 0, 0, 0}}, 1), 3);
  for (int h = 0; h < 3; ++h) {
    const int a0 = plan.policy.deterministic_action(h, 0);
    for (int s = 1; s < 4; ++s) EXPECT_EQ(plan.policy.deterministic_action(h, s), a0);
  }
}

TEST(CvsrlTest, ChosenAbstractionMinimizesTheGap) {
  const std::vector<Abstraction> phis = {{0, 1, 0, 1}, {0, 0, 1, 1}};
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Posterior post = testing::observed_posterior(4, 2, 3, seed + 20, 2);
    const auto plan = cvsrl_begin_episode(post, cvsrl_config(10.0, phis, 2), seed);
    const auto ground = plan_backward_induction(plan.sampled_true_atom).values;
    const auto abs = plan_backward_induction(plan.target_atom).values;
    const double g0 = abstraction_gap(ground, abs, phis[0]);
    const double g1 = abstraction_gap(ground, abs, phis[1]);
    EXPECT_EQ(*plan.chosen_abstraction, g1 < g0 ? phis[1] : phis[0]);
    EXPECT_EQ(select_abstraction(ground, abs, phis), g1 < g0 ? 1 : 0);
  }
}

TEST(CvsrlTest, TargetGroundIsTheAggregatedAtom) {
  const std::vector<Abstraction> phis = {{0, 1, 0, 1}, {0, 0, 1, 1}};
  const Posterior post = testing::observed_posterior(4, 2, 3, 30, 1);
  const auto cfg = cvsrl_config(0.5, phis, 2);
  const auto plan = cvsrl_begin_episode(post, cfg, 2);
  const auto& phi = phis[static_cast<std::size_t>(plan.output_index) % phis.size()];
  EXPECT_TRUE(abstract_mdp(plan.target_ground, phi, 2) == plan.target_atom);
}

TEST(CvsrlTest, ZeroThresholdWithoutLosslessCandidateIsInfeasible) {
  const Posterior post = testing::observed_posterior(4, 2, 3, 12, 0);
  EXPECT_THROW(cvsrl_begin_episode(post, cvsrl_config(0.0, {{0, 0, 0, 0}}, 1), 1), InfeasibleAbstraction);
}

TEST(AbstractAlphabetTest, OrderIsAtomMajor) {
  std::vector<TabularMDP> atoms;
  for (std::uint64_t i = 0; i < 2; ++i) atoms.push_back(build_random_mdp(4, 2, 2, i));
  const auto cfg = cvsrl_config(0.1, {{0, 1, 0, 1}, {0, 0, 1, 1}}, 2);
  const auto out = abstract_alphabet(atoms, cfg.distortion);
  ASSERT_EQ(out.size(), 4u);
  EXPECT_TRUE(out[3] == abstract_mdp(atoms[1], {0, 0, 1, 1}, 2));
  EXPECT_TRUE(out[2] == abstract_mdp(atoms[1], {0, 1, 0, 1}, 2));
}

TEST(BeginEpisodeTest, DispatchesOnKind) {
  const Posterior post = testing::observed_posterior(3, 2, 3, 13, 1);
  EXPECT_FALSE(begin_episode(post, AgentConfig{}, 1).channel_solution.has_value());
  EXPECT_TRUE(begin_episode(post, vsrl_config(0.1), 1).channel_solution.has_value());
  EXPECT_THROW(vsrl_begin_episode(post, AgentConfig{}, 1), InvalidInput);
}

TEST(AgentEndEpisodeTest, DelegatesToUpdate) {
  const Posterior post = init_prior(2, 1, 1, kDefaultGridLevels, 1.0);
  const Trajectory traj{{0, 1}, {0}, {0.4}};
  EXPECT_TRUE(agent_end_episode(post, traj) == update(post, traj));
}

}  // namespace
}  // namespace ratebound
