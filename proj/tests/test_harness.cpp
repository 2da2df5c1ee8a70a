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
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "ratebound/errors.hpp"
#include "ratebound/harness.hpp"
#include "ratebound/rng.hpp"

namespace ratebound {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() / (std::string("ratebound_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

ExperimentConfig small_vsrl(const fs::path& out) {
  ExperimentConfig cfg = parse_config(
      "env.kind = chain\n"
      "env.num_states = 3\n"
      "env.horizon = 3\n"
      "agent.kind = vsrl\n"
      "agent.distortion_threshold = 0.04\n"
      "agent.num_atoms = 6\n"
      "experiment.episodes = 3\n"
      "experiment.num_seeds = 3\n");
  cfg.output_path = out;
  return cfg;
}

std::string config_error(const std::string& text) {
  try {
    const auto cfg = parse_config(text);
    validate(cfg);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(ParseConfigTest, ReadsKeysCommentsAndSeedLists) {
  const auto cfg = parse_config(
      "# comment\n"
      "\n"
      "env.kind = multires   # trailing comment\n"
      "env.components = 2, 3\n"
      "agent.kind = psrl\n"
      "experiment.seeds = 4, 9, 1\n"
      "experiment.episodes = 7\n");
  EXPECT_EQ(cfg.env.kind, EnvironmentKind::MultiResolution);
  EXPECT_EQ(cfg.env.components, (std::vector<int>{2, 3}));
  EXPECT_EQ(cfg.agent.kind, AgentKind::PSRL);
  EXPECT_EQ(cfg.seed_list, (std::vector<std::uint64_t>{4, 9, 1}));
  EXPECT_EQ(replica_seeds(cfg), cfg.seed_list);
  EXPECT_EQ(cfg.episodes, 7);
  EXPECT_EQ(cfg.entries.at("env.kind"), "multires");
}

TEST(ParseConfigTest, ErrorsNameTheOffendingKey) {
  EXPECT_NE(config_error("agent.distortion_threshold = abc\n").find("agent.distortion_threshold"), std::string::npos);
  EXPECT_NE(config_error("agent.bogus = 1\n").find("agent.bogus"), std::string::npos);
  EXPECT_NE(config_error("experiment.episodes = 0\n").find("experiment.episodes"), std::string::npos);
  EXPECT_NE(config_error("env.kind = torus\n").find("env.kind"), std::string::npos);
  EXPECT_NE(config_error("agent.num_atoms = 3\nagent.num_atoms = 4\n").find("agent.num_atoms"), std::string::npos);
  EXPECT_NE(config_error("agent.kind\n"), "");
}

TEST(ParseConfigTest, CvsrlDefaultsToPhiDistortion) {
  const auto cfg = parse_config("agent.kind = cvsrl\n");
  EXPECT_EQ(cfg.agent.distortion.kind, DistortionKind::Phi);
}

TEST(ParseConfigTest, RateBudgetAcceptsNone) {
  auto cfg = parse_config("agent.rate_budget = 0.5\n");
  ASSERT_TRUE(cfg.agent.rate_budget.has_value());
  EXPECT_EQ(*cfg.agent.rate_budget, 0.5);
  set_config_value(cfg, "agent.rate_budget", "none");
  EXPECT_FALSE(cfg.agent.rate_budget.has_value());
}

TEST(LoadConfigTest, MissingFileIsAConfigError) {
  EXPECT_THROW(load_config("/nonexistent/ratebound.cfg"), ConfigError);
}

TEST(ReplicaSeedsTest, DerivedFromBaseSeed) {
  ExperimentConfig cfg;
  cfg.num_seeds = 3;
  cfg.base_seed = 5;
  const auto seeds = replica_seeds(cfg);
  ASSERT_EQ(seeds.size(), 3u);
  EXPECT_EQ(seeds[2], mix_seed(5, 2));
}

TEST(BuildEnvironmentTest, FixedAndPerSeedModes) {
  EnvironmentConfig env;
  env.seed = 3;
  EXPECT_TRUE(build_environment(env, 1) == build_environment(env, 2));
  env.per_seed = true;
  EXPECT_FALSE(build_environment(env, 1) == build_environment(env, 2));
}

TEST(RunExperimentTest, SameConfigGivesByteIdenticalCsv) {
  TempDir dir;
  const auto cfg_a = small_vsrl(dir.path() / "a.csv");
  const auto cfg_b = small_vsrl(dir.path() / "b.csv");
  ASSERT_TRUE(run_experiment(cfg_a, 1).ok());
  ASSERT_TRUE(run_experiment(cfg_b, 1).ok());
  const std::string a = slurp(cfg_a.output_path);
  EXPECT_EQ(a, slurp(cfg_b.output_path));
  EXPECT_EQ(a.substr(0, kCsvHeader.size()), kCsvHeader);
}

TEST(RunExperimentTest, WorkerCountDoesNotChangeOutput) {
  TempDir dir;
  const auto one = small_vsrl(dir.path() / "one.csv");
  const auto many = small_vsrl(dir.path() / "many.csv");
  run_experiment(one, 1);
  run_experiment(many, 4);
  EXPECT_EQ(slurp(one.output_path), slurp(many.output_path));
}

TEST(RunExperimentTest, OneEpisodeOneSeedIsOneRow) {
  TempDir dir;
  auto cfg = small_vsrl(dir.path() / "r.csv");
  cfg.episodes = 1;
  cfg.num_seeds = 1;
  const auto result = run_experiment(cfg, 1);
  EXPECT_EQ(result.records.size(), 1u);
  std::ifstream in(cfg.output_path);
  int lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  EXPECT_EQ(lines, 2);
}

TEST(RunExperimentTest, ManifestEchoesConfig) {
  TempDir dir;
  const auto cfg = small_vsrl(dir.path() / "m.csv");
  run_experiment(cfg, 1);
  const auto manifest = nlohmann::json::parse(slurp(manifest_path(cfg.output_path)));
  EXPECT_EQ(manifest["config"]["agent.kind"], "vsrl");
  EXPECT_EQ(manifest["rows"], 9);
  EXPECT_EQ(manifest["seeds"].size(), 3u);
}

TEST(SimulateTest, PsrlOnCollapsedPriorHasZeroRegret) {
  auto cfg = parse_config(
      "env.kind = random\n"
      "env.num_states = 3\n"
      "prior.collapsed = true\n"
      "experiment.episodes = 4\n"
      "experiment.num_seeds = 3\n");
  const auto result = simulate(cfg, 2);
  ASSERT_TRUE(result.ok());
  ASSERT_EQ(result.records.size(), 12u);
  for (const auto& r : result.records) {
    EXPECT_EQ(r.true_regret, 0.0);
    EXPECT_TRUE(std::isnan(r.rate_nats));
  }
}

TEST(SimulateTest, RecordsSortedAndVsrlSatisficingRegretIsZero) {
  TempDir dir;
  const auto result = simulate(small_vsrl(dir.path() / "x.csv"), 2);
  for (std::size_t i = 1; i < result.records.size(); ++i) {
    const auto& a = result.records[i - 1];
    const auto& b = result.records[i];
    EXPECT_TRUE(a.seed < b.seed || (a.seed == b.seed && a.episode < b.episode));
  }
  for (const auto& r : result.records) {
    EXPECT_LE(r.satisficing_regret, 1e-12);
    EXPECT_GE(r.true_regret, 0.0);
    EXPECT_LE(r.true_regret, 3.0);
    EXPECT_LE(r.expected_distortion, 0.04 + 1e-6 * 1.04);
    EXPECT_EQ(r.wall_ms, 0.0);
  }
}

TEST(SimulateTest, FailedSeedIsIsolated) {
  // D = 0 with a Phi distortion and one abstract state has no feasible channel.
  auto cfg = parse_config(
      "env.kind = random\n"
      "env.num_states = 4\n"
      "agent.kind = cvsrl\n"
      "agent.distortion_threshold = 0\n"
      "agent.num_atoms = 3\n"
      "distortion.num_abstract_states = 1\n"
      "experiment.episodes = 2\n"
      "experiment.num_seeds = 2\n");
  const auto result = simulate(cfg, 1);
  EXPECT_FALSE(result.ok());
  ASSERT_EQ(result.seeds.size(), 2u);
  for (const auto& s : result.seeds) {
    ASSERT_TRUE(s.error.has_value());
    EXPECT_NE(s.error->find("episode 1"), std::string::npos);
  }
}

TEST(RecordsToCsvTest, NanAndFullPrecision) {
  EpisodeRecord r;
  r.seed = 3;
  r.episode = 1;
  r.true_regret = 0.1;
  const std::string csv = records_to_csv(std::vector<EpisodeRecord>{r});
  EXPECT_NE(csv.find("3,1,0.10000000000000001,0,nan,nan,nan,nan,0"), std::string::npos);
}

TEST(RdCurveTest, CollapsedPosteriorHasZeroRates) {
  TempDir dir;
  auto cfg = parse_config(
      "env.kind = random\n"
      "agent.kind = vsrl\n"
      "agent.num_atoms = 4\n"
      "prior.collapsed = true\n"
      "rd.num_curve_points = 6\n");
  cfg.output_path = dir.path() / "curve.csv";
  const auto result = run_rd_curve(cfg);
  ASSERT_FALSE(result.curve.empty());
  for (const auto& pt : result.curve) EXPECT_EQ(pt.rate, 0.0);
  EXPECT_TRUE(fs::exists(dir.path() / "curve_inverse.csv"));
  EXPECT_EQ(slurp(cfg.output_path).substr(0, 19), "distortion,rate_nat");
}

TEST(RdCurveTest, RowsSortedAndNonIncreasing) {
  auto cfg = parse_config(
      "env.kind = random\n"
      "agent.kind = vsrl\n"
      "agent.num_atoms = 8\n"
      "rd.num_curve_points = 10\n");
  const auto result = compute_rd_curve(cfg);
  for (std::size_t i = 1; i < result.curve.size(); ++i) {
    EXPECT_LE(result.curve[i - 1].distortion, result.curve[i].distortion);
    EXPECT_GE(result.curve[i - 1].rate, result.curve[i].rate - 1e-6);
  }
  for (const auto& row : result.inverse) EXPECT_LE(row[2], row[0] + 1e-6);
}

TEST(SweepOutputPathTest, SuffixesTheStem) {
  EXPECT_EQ(sweep_output_path("out/results.csv", "agent.distortion_threshold", "0.04"),
            fs::path("out/results_distortion_threshold_0.04.csv"));
}

}  // namespace
}  // namespace ratebound
