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

#include "ratebound/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "ratebound/errors.hpp"

namespace ratebound {

namespace {

constexpr double kClampFloor = -1e-9;

double regret_on(const TabularMDP& mdp, const NonstationaryPolicy& policy) {
  const double optimal = plan_backward_induction(mdp).values.initial_value;
  const double achieved = evaluate_policy(mdp, policy).initial_value;
  const double gap = optimal - achieved;
  if (gap < kClampFloor) {
    throw std::logic_error("regret below the clamp floor: " + std::to_string(gap));
  }
  return std::max(gap, 0.0);
}

/// Records grouped by episode, each group ordered by seed.
std::map<int, std::vector<const EpisodeRecord*>> by_episode(std::span<const EpisodeRecord> records) {
  std::map<int, std::vector<const EpisodeRecord*>> groups;
  for (const auto& r : records) groups[r.episode].push_back(&r);
  for (auto& [k, rows] : groups) {
    std::sort(rows.begin(), rows.end(),
              [](const EpisodeRecord* a, const EpisodeRecord* b) { return a->seed < b->seed; });
  }
  return groups;
}

std::size_t distinct_seeds(std::span<const EpisodeRecord> records) {
  std::set<std::uint64_t> seeds;
  for (const auto& r : records) seeds.insert(r.seed);
  return seeds.size();
}

}  // namespace

double episodic_regret(const TabularMDP& true_mdp, const EpisodePlan& plan) {
  if (plan.policy.num_states() != true_mdp.num_states() ||
      plan.policy.num_actions() != true_mdp.num_actions()) {
    throw InvalidInput("episodic_regret: policy shape does not match the MDP");
  }
  return regret_on(true_mdp, plan.policy);
}

double satisficing_regret(const EpisodePlan& plan) {
  return regret_on(plan.target_ground, plan.policy);
}

MeanStdErr mean_stderr(std::span<const double> values) {
  MeanStdErr out;
  out.count = static_cast<int>(values.size());
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / out.count;
  if (out.count > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.stderr_ = std::sqrt(ss / (out.count - 1) / out.count);
  }
  return out;
}

MeanStdErr bayes_regret(std::span<const EpisodeRecord> records) {
  std::map<std::uint64_t, double> cumulative;
  for (const auto& r : records) cumulative[r.seed] += r.true_regret;
  std::vector<double> totals;
  for (const auto& [seed, total] : cumulative) totals.push_back(total);
  return mean_stderr(totals);
}

DecompositionReport regret_decomposition_check(std::span<const EpisodeRecord> records, double D,
                                               int horizon, DistortionKind kind) {
  if (!(D >= 0.0) || horizon < 1) throw InvalidInput("regret_decomposition_check: bad D or H");
  DecompositionReport report;
  const double scale = kind == DistortionKind::PiV ? horizon : horizon + 1.0;
  report.bound = 2.0 * scale * std::sqrt(D);
  report.low_power = distinct_seeds(records) < static_cast<std::size_t>(kMinSeedsForVerdict);
  bool all_hold = true;
  for (const auto& [k, rows] : by_episode(records)) {
    std::vector<double> truth, sat, diff;
    for (const auto* r : rows) {
      truth.push_back(r->true_regret);
      sat.push_back(r->satisficing_regret);
      diff.push_back(r->true_regret - r->satisficing_regret);
    }
    EpisodeVerdict v;
    v.episode = k;
    v.mean_true_regret = mean_stderr(truth).mean;
    v.mean_satisficing_regret = mean_stderr(sat).mean;
    v.stderr_ = mean_stderr(diff).stderr_;
    v.allowance = report.bound + kStdErrSlack * v.stderr_;
    v.holds = v.mean_true_regret <= v.mean_satisficing_regret + v.allowance;
    all_hold = all_hold && v.holds;
    report.per_episode.push_back(v);
  }
  report.passed = !report.low_power && all_hold;
  return report;
}

double fano_lower_bound(const Vector& p, const Matrix& dmat, double D,
                        const ChannelSolution& channel) {
  if (dmat.rows() != p.size()) throw InvalidInput("fano_lower_bound: shape mismatch");
  double delta = 0.0;
  for (Eigen::Index j = 0; j < dmat.cols(); ++j) {
    double mass = 0.0;
    for (Eigen::Index i = 0; i < dmat.rows(); ++i) {
      if (dmat(i, j) <= D) mass += p(i);
    }
    delta = std::max(delta, mass);
  }
  if (delta >= 1.0 - 1e-15) return 0.0;
  const double numerator = channel.rate_nats + std::log(2.0);
  if (delta <= 0.0) return 1.0;
  const double denominator = std::log(1.0 / delta);
  if (denominator <= numerator) return 0.0;
  return std::clamp(1.0 - numerator / denominator, 0.0, 1.0);
}

TrendReport rate_trend_check(std::span<const EpisodeRecord> records) {
  TrendReport report;
  const auto groups = by_episode(records);
  report.low_power = distinct_seeds(records) < static_cast<std::size_t>(kMinSeedsForVerdict) ||
                     groups.size() < 10;
  for (const auto& [k, rows] : groups) {
    std::vector<double> rates;
    for (const auto* r : rows) {
      if (!std::isnan(r->rate_nats)) rates.push_back(r->rate_nats);
    }
    const auto stats = mean_stderr(rates);
    report.mean_rate.push_back(stats.mean);
    report.stderr_rate.push_back(stats.stderr_);
  }
  int k = 0;
  for (const auto& entry : groups) {
    if (k > 0) {
      const double slack =
          kStdErrSlack * std::hypot(report.stderr_rate[static_cast<std::size_t>(k)],
                                    report.stderr_rate[static_cast<std::size_t>(k) - 1]);
      if (report.mean_rate[static_cast<std::size_t>(k)] >
          report.mean_rate[static_cast<std::size_t>(k) - 1] + slack) {
        report.violations.push_back(entry.first);
      }
    }
    ++k;
  }
  report.passed = !report.low_power && report.violations.empty();
  return report;
}

}  // namespace ratebound
