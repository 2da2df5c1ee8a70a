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


// Runs every acceptance criterion and prints one PASS or FAIL line each.
// Exits nonzero when any criterion fails.

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

#include "ratebound/checks.hpp"

int main(int argc, char** argv) {
  std::string suite = "all";
  if (argc > 1) suite = argv[1];

  int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("RATEBOUND_WORKERS")) workers = std::max(1, std::atoi(env));

  const auto results = ratebound::checks::run_suite(suite, {.workers = workers});
  int failures = 0;
  for (const auto& r : results) {
    std::cout << ratebound::checks::format_result(r) << std::endl;
    if (!r.passed) ++failures;
  }
  std::cout << results.size() - static_cast<std::size_t>(failures) << "/" << results.size()
            << " acceptance criteria passed" << std::endl;
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
