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

#include <algorithm>
#include <cmath>

#include "ratebound/bayes.hpp"
#include "ratebound/distortion.hpp"
#include "ratebound/environments.hpp"
#include "ratebound/errors.hpp"
#include "test_support.hpp"

namespace ratebound {
namespace {

Trajectory one_step(int s, int a, int next, double reward) {
  return Trajectory{{s, next}, {a}, {reward}};
}

TEST(InitPriorTest, PredictiveTransitionIsUniform) {
  const Posterior post = init_prior(4, 3, 2, 11, 1.0);
  for (int s = 0; s < 4; ++s) {
    for (int a = 0; a < 3; ++a) EXPECT_TRUE(post.mean_transition(s, a).isApprox(Vector::Constant(4, 0.25)));
  }
}

TEST(InitPriorTest, RewardBeliefIsUniformOverGrid) {
  const Posterior post = init_prior(2, 2, 2, 11, 1.0);
  EXPECT_TRUE(post.reward_weights().isApprox(Matrix::Constant(4, 11, 1.0 / 11.0)));
  EXPECT_FALSE(post.known_reward(0, 0).has_value());
}

TEST(InitPriorTest, TwoLevelGridIsZeroAndOne) {
  const Posterior post = init_prior(1, 1, 1, 2, 1.0);
  EXPECT_EQ(post.grid_level(0), 0.0);
  EXPECT_EQ(post.grid_level(1), 1.0);
}

TEST(InitPriorTest, RejectsBadHyperparameters) {
  EXPECT_THROW(init_prior(2, 2, 2, 1, 1.0), InvalidInput);
  EXPECT_THROW(init_prior(2, 2, 2, 11, 0.0), InvalidInput);
}

TEST(UpdateTest, CountArithmeticIsConjugate) {
  Posterior post = init_prior(2, 1, 1, 11, 1.0);
  for (int i = 0; i < 1000; ++i) post = update(post, one_step(0, 0, 1, 0.3));
  const Vector mean = post.mean_transition(0, 0);
  EXPECT_DOUBLE_EQ(mean(0), 1.0 / 1002.0);
  EXPECT_DOUBLE_EQ(mean(1), 1001.0 / 1002.0);
}

TEST(UpdateTest, ObservedRewardCollapsesEveryAtom) {
  Posterior post = init_prior(3, 2, 1, 11, 1.0);
  post = update(post, one_step(1, 1, 2, 0.7));
  ASSERT_TRUE(post.known_reward(1, 1).has_value());
  EXPECT_DOUBLE_EQ(*post.known_reward(1, 1), 0.7);
  for (const auto& atom : sample_atoms(post, 50, 3)) EXPECT_DOUBLE_EQ(atom.reward(1, 1), 0.7);
}

TEST(UpdateTest, SnapsToNearestLevelAndCountsMismatches) {
  Posterior post = init_prior(2, 1, 1, 11, 1.0);
  post = update(post, one_step(0, 0, 0, 0.33));
  EXPECT_DOUBLE_EQ(*post.known_reward(0, 0), 0.3);
  EXPECT_EQ(post.grid_mismatches(), 0);
  post = update(post, one_step(1, 0, 0, 1.2));
  EXPECT_EQ(post.grid_mismatches(), 1);
  EXPECT_DOUBLE_EQ(*post.known_reward(1, 0), 1.0);
}

TEST(UpdateTest, EmptyTrajectoryIsRejected) {
  const Posterior post = init_prior(2, 1, 1, 11, 1.0);
  EXPECT_THROW(update(post, Trajectory{{0}, {}, {}}), InvalidInput);
  EXPECT_THROW(update(post, one_step(0, 0, 5, 0.0)), InvalidInput);
}

TEST(UpdateTest, OrderOfTrajectoriesDoesNotMatter) {
  const TabularMDP truth = build_random_mdp(3, 2, 4, 8);
  std::vector<Trajectory> trajs;
  for (int i = 0; i < 12; ++i) {
    trajs.push_back(sample_trajectory(truth, NonstationaryPolicy::uniform(3, 2, 4), static_cast<std::uint64_t>(i)));
  }
  Posterior forward = init_prior(3, 2, 4, 11, 1.0);
  for (const auto& t : trajs) forward = update(forward, t);
  Posterior backward = init_prior(3, 2, 4, 11, 1.0);
  for (auto it = trajs.rbegin(); it != trajs.rend(); ++it) backward = update(backward, *it);
  EXPECT_TRUE(forward == backward);
}

TEST(SampleAtomsTest, SingleAtomIsValid) {
  const auto atoms = sample_atoms(init_prior(3, 2, 2, 11, 1.0), 1, 4);
  ASSERT_EQ(atoms.size(), 1u);
  EXPECT_EQ(atoms.front().num_states(), 3);
}

TEST(SampleAtomsTest, SameSeedSameAtoms) {
  const Posterior post = testing::observed_posterior(3, 2, 3, 6, 5);
  const auto a = sample_atoms(post, 8, 77);
  const auto b = sample_atoms(post, 8, 77);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_TRUE(a[i] == b[i]);
}

TEST(SampleAtomsTest, ConcentratedPosteriorGivesNearIdenticalAtoms) {
  const TabularMDP truth = build_random_mdp(3, 2, 4, 19);
  const Posterior post = collapsed_posterior(truth, 11, 1e6);
  const auto atoms = sample_atoms(post, 16, 5);
  double worst = 0.0;
  for (const auto& a : atoms) {
    for (const auto& b : atoms) worst = std::max(worst, d_qstar(a, b));
  }
  EXPECT_LT(worst, 1e-3);
}

TEST(SampleAtomsTest, RowsConvergeToEmpiricalFrequencies) {
  // 10^4 observations of one (s, a); the sampled row should sit within 0.05
  // of the empirical frequencies for at least 99% of seeds.
  Posterior post = init_prior(3, 1, 1, 11, 1.0);
  const Vector truth_row = (Vector(3) << 0.2, 0.5, 0.3).finished();
  Rng rng(123);
  Vector counts = Vector::Zero(3);
  for (int i = 0; i < 10000; ++i) {
    const int next = sample_categorical(truth_row, rng);
    counts(next) += 1.0;
    post = update(post, one_step(0, 0, next, 0.0));
  }
  const Vector empirical = counts / counts.sum();
  int close = 0;
  constexpr int kSeeds = 200;
  for (int seed = 0; seed < kSeeds; ++seed) {
    const auto atom = sample_atoms(post, 1, static_cast<std::uint64_t>(seed)).front();
    const double dev = (atom.transition_row(0, 0).transpose() - empirical).cwiseAbs().maxCoeff();
    if (dev < 0.05) ++close;
  }
  EXPECT_GE(close, 198);
}

TEST(PlugInEntropyTest, IdenticalAtomsHaveZeroEntropy) {
  const TabularMDP m = build_random_mdp(3, 2, 2, 1);
  const std::vector<TabularMDP> atoms(5, m);
  EXPECT_EQ(plug_in_entropy(atoms, 1e-9), 0.0);
}

TEST(PlugInEntropyTest, DistinctAtomsGiveLogCount) {
  std::vector<TabularMDP> atoms;
  for (int i = 0; i < 6; ++i) atoms.push_back(build_random_mdp(3, 2, 2, static_cast<std::uint64_t>(i)));
  EXPECT_NEAR(plug_in_entropy(atoms, 1e-9), std::log(6.0), 1e-12);
}

TEST(PlugInEntropyTest, TwoCoincidentPairsGiveLogTwo) {
  const TabularMDP a = build_random_mdp(3, 2, 2, 10);
  const TabularMDP b = build_random_mdp(3, 2, 2, 11);
  const std::vector<TabularMDP> atoms = {a, b, a, b};
  EXPECT_NEAR(plug_in_entropy(atoms, 1e-9), std::log(2.0), 1e-12);
}

TEST(PlugInEntropyTest, EmptyInputThrows) {
  EXPECT_THROW(plug_in_entropy(std::vector<TabularMDP>{}, 1e-9), InvalidInput);
}

}  // namespace
}  // namespace ratebound
