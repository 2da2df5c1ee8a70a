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
#include <span>
#include <string>
#include <vector>

#include "ratebound/agents.hpp"
#include "ratebound/distortion.hpp"
#include "ratebound/mdp.hpp"
#include "ratebound/rate_distortion.hpp"

namespace ratebound {

/// One CSV row. Rates and distortions are NaN for agents without a channel.
struct EpisodeRecord {
  std::uint64_t seed = 0;
  int episode = 0;  // 1-based
  double true_regret = 0.0;
  double satisficing_regret = 0.0;
  double rate_nats = std::numeric_limits<double>::quiet_NaN();
  double expected_distortion = std::numeric_limits<double>::quiet_NaN();
  double realized_distortion = std::numeric_limits<double>::quiet_NaN();
  double posterior_entropy_est = std::numeric_limits<double>::quiet_NaN();
  double wall_ms = 0.0;
};

/// Statistical checks need at least this many seeds to issue a verdict.
inline constexpr int kMinSeedsForVerdict = 30;
inline constexpr double kStdErrSlack = 3.0;

/// V*_{truth,1} - V^{pi}_{truth,1}; values in [-1e-9, 0) clamp to 0.
double episodic_regret(const TabularMDP& true_mdp, const EpisodePlan& plan);

/// Regret of the plan's policy measured on its target. For PSRL and VSRL the
/// target is the planned-on MDP (so the value is zero up to rounding); for
/// CVSRL it is the ground atom the abstract target was aggregated from.
double satisficing_regret(const EpisodePlan& plan);

struct MeanStdErr {
  double mean = 0.0;
  double stderr_ = 0.0;
  int count = 0;
};

MeanStdErr mean_stderr(std::span<const double> values);

/// Mean over seeds of cumulative true regret through the last episode.
MeanStdErr bayes_regret(std::span<const EpisodeRecord> records);

struct EpisodeVerdict {
  int episode = 0;
  double mean_true_regret = 0.0;
  double mean_satisficing_regret = 0.0;
  double stderr_ = 0.0;
  double allowance = 0.0;
  bool holds = true;
};

struct DecompositionReport {
  bool low_power = false;
  bool passed = false;
  double bound = 0.0;  // the sqrt(D) error term added to satisficing regret
  std::vector<EpisodeVerdict> per_episode;
};

/// Checks mean true regret <= mean satisficing regret + err + 3 SE at every
/// episode, with err = 2H sqrt(D) for PiV and 2(H+1) sqrt(D) otherwise.
DecompositionReport regret_decomposition_check(std::span<const EpisodeRecord> records, double D,
                                               int horizon, DistortionKind kind);

/// 1 - (R + ln 2) / ln(1/delta), delta = max_j P(d(., j) <= D); clamped to
/// [0, 1] and 0 when vacuous.
double fano_lower_bound(const Vector& p, const Matrix& dmat, double D,
                        const ChannelSolution& channel);

struct TrendReport {
  bool low_power = false;
  bool passed = false;
  std::vector<double> mean_rate;
  std::vector<double> stderr_rate;
  std::vector<int> violations;  // episodes k whose rate exceeds k-1's by more than the slack
};

/// Seed-averaged rate must be non-increasing in k up to 3 combined standard
/// errors per step.
TrendReport rate_trend_check(std::span<const EpisodeRecord> records);

}  // namespace ratebound
