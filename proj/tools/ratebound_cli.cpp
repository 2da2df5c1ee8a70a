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

// Command-line front end: run, rd-curve, sweep, check.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 runtime failure
// (a failed seed, a solver error, an I/O error, or a failing check).

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "ratebound/checks.hpp"
#include "ratebound/errors.hpp"
#include "ratebound/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

int default_workers() {
  if (const char* env = std::getenv("RATEBOUND_WORKERS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (const std::exception&) {
    }
    std::cerr << "ignoring RATEBOUND_WORKERS='" << env << "' (expected a positive integer)\n";
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void print_summary(const ratebound::ExperimentConfig& cfg, const ratebound::ExperimentResult& result) {
  const auto regret = ratebound::bayes_regret(result.records);
  std::printf("%s: %zu rows, cumulative regret %.6f +/- %.6f over %d seeds (%.2fs)\n",
              cfg.output_path.string().c_str(), result.records.size(), regret.mean, regret.stderr_,
              regret.count, result.wall_seconds);
  for (const auto& s : result.seeds) {
    if (s.error) std::fprintf(stderr, "seed %llu failed after %d rows: %s\n",
                              static_cast<unsigned long long>(s.seed), s.rows, s.error->c_str());
  }
}

std::vector<std::string> split_values(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first != std::string::npos) out.push_back(item.substr(first, last - first + 1));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Posterior sampling and rate-distortion satisficing on tabular MDPs", "ratebound"};
  app.require_subcommand(1);
  int workers = default_workers();
  app.add_option("--seed-workers", workers, "Maximum number of seeds simulated in parallel")
      ->check(CLI::PositiveNumber);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Simulate an experiment and write its CSV and manifest");
  run->add_option("--config", config_path, "Experiment config file")->required();

  auto* curve = app.add_subcommand("rd-curve", "Trace R(D) and D(R) on the episode-1 atoms");
  curve->add_option("--config", config_path, "Experiment config file")->required();

  std::string param;
  std::string values;
  auto* sweep = app.add_subcommand("sweep", "Run one experiment per value of a config key");
  sweep->add_option("--config", config_path, "Experiment config file")->required();
  sweep->add_option("--param", param, "Dotted config key to vary")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required();

  std::string suite;
  auto* check = app.add_subcommand("check", "Run a property suite");
  check->add_option("--suite", suite, "Suite name")
      ->required()
      ->check(CLI::IsMember(ratebound::checks::suite_names()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*check) {
      const auto results = ratebound::checks::run_suite(suite, {.workers = workers});
      bool all = true;
      for (const auto& r : results) {
        std::cout << ratebound::checks::format_result(r) << '\n';
        all = all && r.passed;
      }
      return all ? kExitOk : kExitRuntime;
    }

    ratebound::ExperimentConfig cfg;
    try {
      cfg = ratebound::load_config(config_path);
      ratebound::validate(cfg);
    } catch (const ratebound::ConfigError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitUsage;
    }

    if (*run) {
      const auto result = ratebound::run_experiment(cfg, workers);
      print_summary(cfg, result);
      return result.ok() ? kExitOk : kExitRuntime;
    }
    if (*curve) {
      const auto result = ratebound::run_rd_curve(cfg);
      std::printf("%s: %zu curve points, %zu inverse points\n", cfg.output_path.string().c_str(),
                  result.curve.size(), result.inverse.size());
      return kExitOk;
    }

    // sweep: validate every variant before running any of them.
    std::vector<ratebound::ExperimentConfig> variants;
    try {
      const auto list = split_values(values);
      if (list.empty()) throw ratebound::ConfigError("--values: no values given");
      for (const auto& v : list) {
        ratebound::ExperimentConfig variant = cfg;
        ratebound::set_config_value(variant, param, v);
        variant.output_path = ratebound::sweep_output_path(cfg.output_path, param, v);
        ratebound::validate(variant);
        variants.push_back(std::move(variant));
      }
    } catch (const ratebound::ConfigError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitUsage;
    }
    bool all_ok = true;
    for (const auto& variant : variants) {
      const auto result = ratebound::run_experiment(variant, workers);
      print_summary(variant, result);
      all_ok = all_ok && result.ok();
    }
    return all_ok ? kExitOk : kExitRuntime;
  } catch (const ratebound::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << '\n';
    return kExitRuntime;
  }
}
