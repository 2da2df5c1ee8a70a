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

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "ratebound/mdp.hpp"

namespace ratebound {

/// A channel Q(j|i) over a finite source and reproduction alphabet together
/// with the point it attains on the rate-distortion plane. Rates are in nats.
struct ChannelSolution {
  Matrix channel;
  double rate_nats = 0.0;
  double expected_distortion = 0.0;
  double slope = 0.0;
  int iterations = 0;
  bool converged = true;
};

struct SolverOptions {
  double tol = 1e-6;
  int max_iters = 10000;
  double zero_tol = 1e-9;
};

struct RDPoint {
  double distortion = 0.0;
  double rate = 0.0;
};

using RDCurve = std::vector<RDPoint>;

/// I(X;Z) = sum_ij p_i Q_ij ln(Q_ij / q_j) with q = p^T Q.
template <typename DerivedP, typename DerivedQ>
double mutual_information(const Eigen::MatrixBase<DerivedP>& p,
                          const Eigen::MatrixBase<DerivedQ>& channel) {
  const Eigen::RowVectorXd q = p.transpose() * channel;
  double rate = 0.0;
  for (Eigen::Index i = 0; i < channel.rows(); ++i) {
    if (p(i) <= 0.0) continue;
    for (Eigen::Index j = 0; j < channel.cols(); ++j) {
      const double w = channel(i, j);
      const double joint = p(i) * w;
      // A joint mass that underflows to zero contributes nothing; q(j) >= joint
      // keeps the logarithm finite otherwise.
      if (joint <= 0.0) continue;
      rate += joint * std::log(w / q(j));
    }
  }
  return std::max(rate, 0.0);
}

/// sum_ij p_i Q_ij d_ij.
template <typename DerivedP, typename DerivedQ, typename DerivedD>
double expected_distortion(const Eigen::MatrixBase<DerivedP>& p,
                           const Eigen::MatrixBase<DerivedQ>& channel,
                           const Eigen::MatrixBase<DerivedD>& dmat) {
  return p.dot(channel.cwiseProduct(dmat).rowwise().sum());
}

/// Blahut-Arimoto at a fixed Lagrange slope s >= 0. Iterates
/// Q(j|i) ∝ q(j) exp(-s d(i,j)), q ← p^T Q in the log domain until the
/// Lagrangian duality gap max_j ln(sum_i p_i e^{-s d_ij} / Z_i) falls below
/// `tol`, or `max_iters` is reached (then `converged` is false).
ChannelSolution ba_fixed_slope(const Vector& p, const Matrix& dmat, double slope,
                               const SolverOptions& opts = {},
                               const Vector* initial_marginal = nullptr);

/// Deterministic channel reaching the smallest achievable distortion
/// sum_i p_i min_j d_ij (zero when every atom has a zero-distortion output):
/// source atoms are greedily clustered onto shared near-minimal outputs,
/// largest cluster first, and the rate is the entropy of the cluster law.
ChannelSolution min_distortion_channel(const Vector& p, const Matrix& dmat,
                                       const SolverOptions& opts = {});

/// Minimal-rate channel with expected distortion <= target. Throws
/// InfeasibleDistortion when target is below the smallest achievable value.
ChannelSolution solve_rate_distortion(const Vector& p, const Matrix& dmat, double target_distortion,
                                      const SolverOptions& opts = {});

/// Minimal-distortion channel with rate <= budget + tol.
ChannelSolution solve_distortion_rate(const Vector& p, const Matrix& dmat, double rate_budget,
                                      const SolverOptions& opts = {});

/// (D, R) pairs from a geometric slope sweep plus both zero-rate endpoints
/// and the minimum-distortion point, sorted ascending in D.
RDCurve trace_rd_curve(const Vector& p, const Matrix& dmat, int num_points,
                       const SolverOptions& opts = {});

/// Draws an output index from channel row `source_index`.
int sample_through_channel(const ChannelSolution& sol, int source_index, std::uint64_t rng_seed);

}  // namespace ratebound
