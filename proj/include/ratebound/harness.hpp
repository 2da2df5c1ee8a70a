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

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ratebound/agents.hpp"
#include "ratebound/environments.hpp"
#include "ratebound/metrics.hpp"
#include "ratebound/rate_distortion.hpp"

namespace ratebound {

enum class EnvironmentKind { Random, Chain, MultiResolution };

struct EnvironmentConfig {
  EnvironmentKind kind = EnvironmentKind::Random;
  int num_states = 3;
  int num_actions = 2;
  int horizon = 5;
  std::vector<int> components;  // multi-resolution component sizes
  std::uint64_t seed = 0;
  /// When set, every replica draws its own true MDP from a seed derived from
  /// the replica seed; otherwise all replicas share the MDP built from `seed`.
  bool per_seed = false;
  int max_product_states = kDefaultMaxProductStates;
};

/**
 * A parsed experiment file.
 *
 * `agent.distortion` holds only the kind and Z here; the policy class and the
 * abstraction class depend on the true MDP's size and are filled in per
 * replica by `resolve_agent`.
 */
struct ExperimentConfig {
  EnvironmentConfig env;
  AgentConfig agent;
  int num_abstractions = 4;
  int pi_subset = kMaxEnumeratedPolicies;

  int episodes = 10;
  /// Explicit replica seeds; when empty, `num_seeds` seeds are derived from
  /// `base_seed`.
  std::vector<std::uint64_t> seed_list;
  int num_seeds = 1;
  std::uint64_t base_seed = 0;

  std::filesystem::path output_path = "results.csv";
  bool wall_time = false;

  int curve_points = 25;

  int grid_levels = kDefaultGridLevels;
  double concentration = 1.0;
  bool collapsed_prior = false;

  /// Every key = value pair as written, for the run manifest.
  std::map<std::string, std::string> entries;
};

/// Parses the flat `key = value` format. Blank lines and `#` comments are
/// ignored. Throws ConfigError naming the key (or line) on any problem.
ExperimentConfig parse_config(std::string_view text);

ExperimentConfig load_config(const std::filesystem::path& path);

/// Applies one `key = value` assignment on top of an existing config.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Checks cross-field constraints; throws ConfigError.
void validate(const ExperimentConfig& cfg);

/// Replica seeds in run order: the explicit list, or mix_seed(base_seed, i).
std::vector<std::uint64_t> replica_seeds(const ExperimentConfig& cfg);

/// The ground-truth MDP for one replica.
TabularMDP build_environment(const EnvironmentConfig& env, std::uint64_t replica_seed);

/// Copy of `cfg.agent` with its distortion classes sized for `truth`.
AgentConfig resolve_agent(const ExperimentConfig& cfg, const TabularMDP& truth,
                          std::uint64_t replica_seed);

/// Posterior before the first episode.
Posterior initial_posterior(const ExperimentConfig& cfg, const TabularMDP& truth);

/// Seed of episode `k` (1-based) within a replica.
std::uint64_t episode_seed(std::uint64_t replica_seed, int k);

struct SeedOutcome {
  std::uint64_t seed = 0;
  int rows = 0;
  std::optional<std::string> error;
};

struct ExperimentResult {
  std::vector<EpisodeRecord> records;  // sorted by (seed, episode)
  std::vector<SeedOutcome> seeds;      // in config order
  double wall_seconds = 0.0;

  bool ok() const;
};

/// Runs one replica: K episodes of begin, act, record, update. A failure
/// stops the replica and is reported in the outcome with the rows so far.
SeedOutcome run_replica(const ExperimentConfig& cfg, std::uint64_t replica_seed,
                        std::vector<EpisodeRecord>& rows);

/// Runs all replicas on up to `workers` threads. No files are written.
ExperimentResult simulate(const ExperimentConfig& cfg, int workers);

inline constexpr std::string_view kCsvHeader =
    "seed,episode,true_regret,satisficing_regret,rate_nats,expected_distortion,"
    "realized_distortion,posterior_entropy_est,wall_ms";

std::string records_to_csv(std::span<const EpisodeRecord> records);

std::filesystem::path manifest_path(const std::filesystem::path& csv_path);

/// `simulate`, then the CSV at `cfg.output_path` and a JSON manifest beside it.
ExperimentResult run_experiment(const ExperimentConfig& cfg, int workers);

struct RdCurveResult {
  RDCurve curve;
  /// (rate budget, achieved distortion, achieved rate) from the inverse sweep.
  std::vector<std::array<double, 3>> inverse;
};

/// R_1(D) and D_1(R) on the first replica's episode-1 atoms.
RdCurveResult compute_rd_curve(const ExperimentConfig& cfg);

/// `compute_rd_curve`, written to `cfg.output_path` and `<stem>_inverse.csv`.
RdCurveResult run_rd_curve(const ExperimentConfig& cfg);

/// `results.csv` with key `agent.distortion_threshold` and value `0.04`
/// becomes `results_distortion_threshold_0.04.csv`.
std::filesystem::path sweep_output_path(const std::filesystem::path& base, const std::string& key,
                                        const std::string& value);

}  // namespace ratebound
