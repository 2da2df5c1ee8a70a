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

#include <string>
#include <string_view>
#include <vector>

#include "ratebound/mdp.hpp"

namespace ratebound::checks {

struct CheckResult {
  int criterion = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct CheckOptions {
  int workers = 1;
};

/// Registered check names in criterion order.
std::vector<std::string> check_names();

/// Names accepted by `run_suite`: every check name plus `all` and `quick`
/// (the checks that run in seconds).
std::vector<std::string> suite_names();

/// Throws std::invalid_argument for an unknown name.
std::vector<CheckResult> run_suite(std::string_view suite, const CheckOptions& opts);

/// "PASS" or "FAIL", criterion number, name, detail, and runtime on one line.
std::string format_result(const CheckResult& result);

// Brute-force oracles, kept independent of the planning and solver code.

/// Value at step 0 of the deterministic nonstationary policy `actions[h][s]`,
/// by direct summation over successor states.
double enumerate_policy_value(const TabularMDP& mdp, const std::vector<std::vector<int>>& actions);

/// Max of `enumerate_policy_value` over all |A|^(|S| H) deterministic
/// nonstationary policies.
double enumerate_optimal_value(const TabularMDP& mdp);

/// ln 2 - h_b(D) in nats for D in [0, 1/2], else 0.
double binary_hamming_rate(double D);

/// Minimum mutual information over a grid of binary channels
/// (P(1|0), P(0|1)) with step 1/`steps`, subject to expected Hamming
/// distortion <= D, for a uniform binary source.
double binary_grid_min_rate(double D, int steps);

/// Smallest P(d(X, Z) > D) over a grid of m x m channels (each row on the
/// simplex with step 1/`steps`) whose mutual information is at most
/// `rate_cap`.
double grid_min_error(const Vector& p, const Matrix& dmat, double D, double rate_cap, int steps);

}  // namespace ratebound::checks
