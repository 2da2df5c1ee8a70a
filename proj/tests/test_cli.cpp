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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

namespace fs = std::filesystem;

int run_cli(const std::string& args) {
  const std::string cmd = std::string(RATEBOUND_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           (std::string("ratebound_cli_") + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_config(const std::string& body) {
    const fs::path path = dir_ / "exp.cfg";
    std::ofstream(path) << body << "output.path = " << (dir_ / "results.csv").string() << "\n";
    return path;
  }

  fs::path dir_;
};

TEST_F(CliTest, RunWithoutConfigIsUsageError) { EXPECT_EQ(run_cli("run"), 1); }

TEST_F(CliTest, UnknownFlagIsUsageError) { EXPECT_EQ(run_cli("run --frobnicate"), 1); }

TEST_F(CliTest, MissingConfigFileIsUsageError) {
  EXPECT_EQ(run_cli("run --config " + (dir_ / "absent.cfg").string()), 1);
}

TEST_F(CliTest, InvalidConfigIsUsageError) {
  EXPECT_EQ(run_cli("run --config " + write_config("agent.num_atoms = many\n").string()), 1);
}

TEST_F(CliTest, CheckSuiteRunsRdAnalytic) { EXPECT_EQ(run_cli("check --suite rd-analytic"), 0); }

TEST_F(CliTest, UnknownSuiteIsUsageError) { EXPECT_EQ(run_cli("check --suite nope"), 1); }

TEST_F(CliTest, RunWritesCsvAndManifest) {
  const auto cfg = write_config("env.kind = chain\nagent.kind = psrl\nexperiment.episodes = 2\n");
  ASSERT_EQ(run_cli("--seed-workers 2 run --config " + cfg.string()), 0);
  EXPECT_TRUE(fs::exists(dir_ / "results.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "results.manifest.json"));
}

TEST_F(CliTest, SweepFansOutOneCsvPerValue) {
  const auto cfg = write_config(
      "env.kind = chain\nenv.num_states = 3\nenv.horizon = 3\nagent.kind = vsrl\n"
      "agent.num_atoms = 4\nexperiment.episodes = 1\n");
  ASSERT_EQ(run_cli("sweep --config " + cfg.string() +
                    " --param agent.distortion_threshold --values 0,0.04,0.25"),
            0);
  for (const char* v : {"0", "0.04", "0.25"}) {
    EXPECT_TRUE(fs::exists(dir_ / (std::string("results_distortion_threshold_") + v + ".csv"))) << v;
  }
}

TEST_F(CliTest, SweepValidatesEveryValueFirst) {
  const auto cfg = write_config("env.kind = chain\nagent.kind = vsrl\nexperiment.episodes = 1\n");
  EXPECT_EQ(run_cli("sweep --config " + cfg.string() + " --param agent.distortion_threshold --values 0.1,-1"), 1);
  EXPECT_FALSE(fs::exists(dir_ / "results_distortion_threshold_0.1.csv"));
}

TEST_F(CliTest, RdCurveWritesBothFiles) {
  const auto cfg = write_config("agent.kind = vsrl\nagent.num_atoms = 4\nrd.num_curve_points = 4\n");
  ASSERT_EQ(run_cli("rd-curve --config " + cfg.string()), 0);
  EXPECT_TRUE(fs::exists(dir_ / "results.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "results_inverse.csv"));
}

}  // namespace
