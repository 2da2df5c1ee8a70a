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
#include <random>

#include <Eigen/Dense>

namespace ratebound {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives a child seed from a parent seed and a stream index. Used for the
/// per-seed and per-episode streams so results never depend on scheduling.
constexpr std::uint64_t mix_seed(std::uint64_t parent, std::uint64_t index) {
  return splitmix64(splitmix64(parent) ^ (index * 0xd1b54a32d192ed03ULL + 1));
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Draws an index from an (unnormalized, nonnegative) weight vector by
/// inverse CDF in ascending index order.
template <typename Derived>
int sample_categorical(const Eigen::DenseBase<Derived>& weights, Rng& rng) {
  const double total = weights.sum();
  const double u = uniform01(rng) * total;
  double acc = 0.0;
  int last_positive = 0;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (weights(i) <= 0.0) continue;
    acc += weights(i);
    last_positive = static_cast<int>(i);
    if (u < acc) return last_positive;
  }
  return last_positive;
}

/// Symmetric or general Dirichlet draw via normalized gamma variates.
template <typename Derived>
Eigen::VectorXd sample_dirichlet(const Eigen::DenseBase<Derived>& alpha, Rng& rng) {
  Eigen::VectorXd out(alpha.size());
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    std::gamma_distribution<double> gamma(alpha(i), 1.0);
    out(i) = gamma(rng);
  }
  const double total = out.sum();
  if (!(total > 0.0)) {
    // Every variate underflowed (tiny concentrations): fall back to a vertex.
    out.setZero();
    out(sample_categorical(alpha, rng)) = 1.0;
    return out;
  }
  return out / total;
}

}  // namespace ratebound
