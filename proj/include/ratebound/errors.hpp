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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ratebound {

/// Shapes, ranges, or probability vectors that violate a documented contract.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A constructed object would exceed a configured size cap.
class CapacityError : public std::runtime_error {
 public:
  CapacityError(const std::string& what, std::size_t requested)
      : std::runtime_error(what), requested_(requested) {}
  std::size_t requested() const { return requested_; }

 private:
  std::size_t requested_;
};

/// No channel over the reproduction alphabet meets the requested distortion.
class InfeasibleDistortion : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No abstract reproduction meets the requested distortion (empty feasible set).
class InfeasibleAbstraction : public InfeasibleDistortion {
 public:
  using InfeasibleDistortion::InfeasibleDistortion;
};

/// Bad or missing configuration. The message names the offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ratebound
