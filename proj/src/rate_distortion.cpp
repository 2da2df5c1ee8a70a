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

#include "ratebound/rate_distortion.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "ratebound/errors.hpp"
#include "ratebound/rng.hpp"

namespace ratebound {

namespace {

constexpr double kMaxSlope = 1e6;
constexpr double kMinStartSlope = 1e-6;
constexpr int kMaxBisections = 200;
// Bisection stops once the bracket spans less than this in the bisected
// quantity; the final mix then lands exactly on the target.
constexpr double kBracketSpan = 1e-5;
// Rounding allowance for a mixed channel that should land exactly on D.
constexpr double kMixSlack = 1e-12;
// Warm starts are blended with a little uniform mass so that output letters
// dropped at a neighbouring slope can come back.
constexpr double kWarmStartBlend = 1e-2;

void check_problem(const Vector& p, const Matrix& dmat) {
  if (p.size() < 1) throw InvalidInput("rate-distortion: empty source");
  if (dmat.rows() != p.size() || dmat.cols() < 1) {
    throw InvalidInput("rate-distortion: distortion matrix shape does not match the source");
  }
  if ((p.array() < 0.0).any() || std::abs(p.sum() - 1.0) > kSimplexTol) {
    throw InvalidInput("rate-distortion: source is not a probability vector");
  }
  if (!dmat.allFinite() || (dmat.array() < 0.0).any()) {
    throw InvalidInput("rate-distortion: distortions must be finite and nonnegative");
  }
}

ChannelSolution finish(const Vector& p, const Matrix& dmat, Matrix channel, double slope,
                       int iterations, bool converged) {
  ChannelSolution sol;
  sol.rate_nats = mutual_information(p, channel);
  sol.expected_distortion = expected_distortion(p, channel, dmat);
  sol.channel = std::move(channel);
  sol.slope = slope;
  sol.iterations = iterations;
  sol.converged = converged;
  return sol;
}

/// Point mass on the column with the smallest expected distortion.
ChannelSolution zero_rate_channel(const Vector& p, const Matrix& dmat) {
  const Eigen::RowVectorXd column_cost = p.transpose() * dmat;
  Eigen::Index best = 0;
  for (Eigen::Index j = 1; j < column_cost.size(); ++j) {
    if (column_cost(j) < column_cost(best)) best = j;
  }
  Matrix channel = Matrix::Zero(dmat.rows(), dmat.cols());
  channel.col(best).setOnes();
  return finish(p, dmat, std::move(channel), 0.0, 0, true);
}

Matrix mix(const Matrix& a, const Matrix& b, double weight_a) {
  Matrix out = weight_a * a + (1.0 - weight_a) * b;
  for (Eigen::Index i = 0; i < out.rows(); ++i) out.row(i) /= out.row(i).sum();
  return out;
}

Vector output_marginal(const Vector& p, const Matrix& channel) {
  return (p.transpose() * channel).transpose();
}

double next_slope(double lo, double hi) { return lo == 0.0 ? 0.5 * hi : std::sqrt(lo * hi); }

}  // namespace

ChannelSolution ba_fixed_slope(const Vector& p, const Matrix& dmat, double slope,
                               const SolverOptions& opts, const Vector* initial_marginal) {
  check_problem(p, dmat);
  if (!(slope >= 0.0) || !std::isfinite(slope)) throw InvalidInput("ba_fixed_slope: slope must be >= 0");
  const Eigen::Index m = dmat.rows();
  const Eigen::Index n = dmat.cols();

  // kernel(i,j) = exp(-s (d_ij - min_j d_ij)); the per-row shift cancels in
  // every normalized quantity below.
  Matrix kernel(m, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double row_min = dmat.row(i).minCoeff();
    for (Eigen::Index j = 0; j < n; ++j) kernel(i, j) = std::exp(-slope * (dmat(i, j) - row_min));
  }

  Vector q = Vector::Constant(n, 1.0 / static_cast<double>(n));
  if (initial_marginal != nullptr && initial_marginal->size() == n) {
    q = (1.0 - kWarmStartBlend) * (*initial_marginal) + kWarmStartBlend * q;
    q /= q.sum();
  }

  bool converged = false;
  int iterations = 0;
  Vector z(m);
  Vector weights(m);
  for (iterations = 1; iterations <= opts.max_iters; ++iterations) {
    z.noalias() = kernel * q;
    for (Eigen::Index i = 0; i < m; ++i) weights(i) = z(i) > 0.0 ? p(i) / z(i) : 0.0;
    // c_j = sum_i p_i K_ij / Z_i; q_j c_j is the updated marginal and
    // max_j ln c_j bounds the Lagrangian suboptimality.
    const Vector c = kernel.transpose() * weights;
    const double gap = std::log(c.maxCoeff());
    q = q.cwiseProduct(c);
    q /= q.sum();
    if (gap < opts.tol) {
      converged = true;
      break;
    }
  }
  iterations = std::min(iterations, opts.max_iters);

  Matrix channel(m, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::RowVectorXd row = kernel.row(i).cwiseProduct(q.transpose());
    const double total = row.sum();
    if (total > 0.0) {
      channel.row(i) = row / total;
    } else {
      // Every surviving output is exponentially far from atom i; fall back to
      // its nearest output.
      Eigen::Index best = 0;
      dmat.row(i).minCoeff(&best);
      channel.row(i).setZero();
      channel(i, best) = 1.0;
    }
  }
  return finish(p, dmat, std::move(channel), slope, iterations, converged);
}

ChannelSolution min_distortion_channel(const Vector& p, const Matrix& dmat,
                                       const SolverOptions& opts) {
  check_problem(p, dmat);
  const Eigen::Index m = dmat.rows();
  const Eigen::Index n = dmat.cols();
  const Vector row_min = dmat.rowwise().minCoeff();
  std::vector<bool> covered(static_cast<std::size_t>(m), false);
  Matrix channel = Matrix::Zero(m, n);
  Eigen::Index remaining = m;
  while (remaining > 0) {
    Eigen::Index best = -1;
    double best_mass = -1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      double mass = 0.0;
      bool any = false;
      for (Eigen::Index i = 0; i < m; ++i) {
        if (covered[static_cast<std::size_t>(i)] || dmat(i, j) > row_min(i) + opts.zero_tol) continue;
        mass += p(i);
        any = true;
      }
      if (any && mass > best_mass) {
        best_mass = mass;
        best = j;
      }
    }
    for (Eigen::Index i = 0; i < m; ++i) {
      if (covered[static_cast<std::size_t>(i)] || dmat(i, best) > row_min(i) + opts.zero_tol) continue;
      covered[static_cast<std::size_t>(i)] = true;
      channel(i, best) = 1.0;
      --remaining;
    }
  }
  return finish(p, dmat, std::move(channel), std::numeric_limits<double>::infinity(), 0, true);
}

ChannelSolution solve_rate_distortion(const Vector& p, const Matrix& dmat, double target_distortion,
                                      const SolverOptions& opts) {
  check_problem(p, dmat);
  if (!(target_distortion >= 0.0)) throw InvalidInput("solve_rate_distortion: target must be >= 0");
  const double D = target_distortion;

  ChannelSolution lo = zero_rate_channel(p, dmat);
  if (D >= lo.expected_distortion) return lo;

  const double floor = p.dot(dmat.rowwise().minCoeff());
  if (D < floor - opts.zero_tol) {
    throw InfeasibleDistortion("solve_rate_distortion: target " + std::to_string(D) +
                               " is below the smallest achievable distortion " +
                               std::to_string(floor));
  }
  if (D <= floor + opts.zero_tol) return min_distortion_channel(p, dmat, opts);

  // Bracket the slope starting from 1/D. Small slopes are where BA is
  // slowest, so small targets should never have to pass through them.
  int total_iterations = 0;
  double s_lo = 0.0;
  double s_hi = std::clamp(1.0 / D, kMinStartSlope, kMaxSlope);
  ChannelSolution hi = ba_fixed_slope(p, dmat, s_hi, opts);
  total_iterations += hi.iterations;
  if (hi.expected_distortion > D) {
    while (hi.expected_distortion > D) {
      s_lo = s_hi;
      lo = hi;
      s_hi *= 2.0;
      if (s_hi > kMaxSlope) return min_distortion_channel(p, dmat, opts);
      const Vector warm = output_marginal(p, lo.channel);
      hi = ba_fixed_slope(p, dmat, s_hi, opts, &warm);
      total_iterations += hi.iterations;
    }
  } else {
    double s = s_hi;
    while (true) {
      s *= 0.5;
      if (s < kMinStartSlope) break;  // keep the zero-rate channel as the lower end
      const Vector warm = output_marginal(p, hi.channel);
      ChannelSolution probe = ba_fixed_slope(p, dmat, s, opts, &warm);
      total_iterations += probe.iterations;
      if (probe.expected_distortion > D) {
        s_lo = s;
        lo = std::move(probe);
        break;
      }
      s_hi = s;
      hi = std::move(probe);
    }
  }

  for (int step = 0; step < kMaxBisections; ++step) {
    if (s_lo > 0.0 && s_hi / s_lo - 1.0 < 1e-7) break;
    if (lo.expected_distortion - hi.expected_distortion < kBracketSpan) break;
    const double s_mid = next_slope(s_lo, s_hi);
    const Vector warm = output_marginal(p, hi.channel);
    ChannelSolution mid = ba_fixed_slope(p, dmat, s_mid, opts, &warm);
    total_iterations += mid.iterations;
    if (mid.expected_distortion > D) {
      s_lo = s_mid;
      lo = std::move(mid);
    } else {
      s_hi = s_mid;
      hi = std::move(mid);
    }
  }

  ChannelSolution best = hi;
  const double span = lo.expected_distortion - hi.expected_distortion;
  if (span > 0.0) {
    const double weight_lo = (D - hi.expected_distortion) / span;
    ChannelSolution mixed =
        finish(p, dmat, mix(lo.channel, hi.channel, weight_lo), s_hi, 0, hi.converged);
    if (mixed.expected_distortion <= D + kMixSlack * (1.0 + D) && mixed.rate_nats < best.rate_nats) {
      best = std::move(mixed);
    }
  }
  best.slope = s_hi;
  best.iterations = total_iterations;
  best.converged = hi.converged;
  return best;
}

ChannelSolution solve_distortion_rate(const Vector& p, const Matrix& dmat, double rate_budget,
                                      const SolverOptions& opts) {
  check_problem(p, dmat);
  if (!(rate_budget >= 0.0)) throw InvalidInput("solve_distortion_rate: budget must be >= 0");
  const double R = rate_budget;

  ChannelSolution lo = zero_rate_channel(p, dmat);
  if (R == 0.0) return lo;
  ChannelSolution finest = min_distortion_channel(p, dmat, opts);
  if (finest.rate_nats <= R + opts.tol) return finest;

  int total_iterations = 0;
  double s_lo = 0.0;
  double s_hi = 1.0;
  ChannelSolution hi = ba_fixed_slope(p, dmat, s_hi, opts);
  total_iterations += hi.iterations;
  while (hi.rate_nats <= R) {
    if (hi.expected_distortion < lo.expected_distortion) {
      s_lo = s_hi;
      lo = hi;
    }
    s_hi *= 2.0;
    if (s_hi > kMaxSlope) {
      lo.iterations = total_iterations;
      return lo;
    }
    const Vector warm = output_marginal(p, lo.channel);
    hi = ba_fixed_slope(p, dmat, s_hi, opts, &warm);
    total_iterations += hi.iterations;
  }

  for (int step = 0; step < kMaxBisections; ++step) {
    if (s_lo > 0.0 && s_hi / s_lo - 1.0 < 1e-7) break;
    if (hi.rate_nats - lo.rate_nats < kBracketSpan) break;
    const double s_mid = next_slope(s_lo, s_hi);
    const Vector warm = output_marginal(p, hi.channel);
    ChannelSolution mid = ba_fixed_slope(p, dmat, s_mid, opts, &warm);
    total_iterations += mid.iterations;
    if (mid.rate_nats > R) {
      s_hi = s_mid;
      hi = std::move(mid);
    } else {
      s_lo = s_mid;
      if (mid.expected_distortion <= lo.expected_distortion) lo = std::move(mid);
    }
  }

  ChannelSolution best = lo;
  const double span = hi.rate_nats - lo.rate_nats;
  if (span > 0.0) {
    const double weight_lo = (hi.rate_nats - R) / span;
    ChannelSolution mixed =
        finish(p, dmat, mix(lo.channel, hi.channel, weight_lo), s_lo, 0, hi.converged);
    if (mixed.rate_nats <= R + opts.tol && mixed.expected_distortion < best.expected_distortion) {
      best = std::move(mixed);
    }
  }
  best.slope = s_lo;
  best.iterations = total_iterations;
  return best;
}

RDCurve trace_rd_curve(const Vector& p, const Matrix& dmat, int num_points,
                       const SolverOptions& opts) {
  check_problem(p, dmat);
  if (num_points < 2) throw InvalidInput("trace_rd_curve: need at least two points");
  const ChannelSolution zero_rate = zero_rate_channel(p, dmat);
  const ChannelSolution finest = min_distortion_channel(p, dmat, opts);
  RDCurve curve;
  curve.push_back({dmat.maxCoeff(), 0.0});
  curve.push_back({zero_rate.expected_distortion, 0.0});
  curve.push_back({finest.expected_distortion, finest.rate_nats});

  const double d_max = dmat.maxCoeff();
  if (d_max > 0.0 && zero_rate.expected_distortion > finest.expected_distortion) {
    double d_pos = d_max;
    for (Eigen::Index i = 0; i < dmat.size(); ++i) {
      const double v = dmat.data()[i];
      if (v > opts.zero_tol) d_pos = std::min(d_pos, v);
    }
    const double s_first = 0.1 / d_max;
    const double s_last = std::min(kMaxSlope, std::max(50.0 / d_pos, 10.0 * s_first));
    const double ratio = std::pow(s_last / s_first, 1.0 / (num_points - 1));
    Vector warm = Vector::Constant(dmat.cols(), 1.0 / static_cast<double>(dmat.cols()));
    double s = s_first;
    for (int k = 0; k < num_points; ++k, s *= ratio) {
      const ChannelSolution sol = ba_fixed_slope(p, dmat, s, opts, &warm);
      warm = output_marginal(p, sol.channel);
      if (sol.expected_distortion < zero_rate.expected_distortion &&
          sol.expected_distortion > finest.expected_distortion) {
        curve.push_back({sol.expected_distortion, sol.rate_nats});
      }
    }
  }
  std::stable_sort(curve.begin(), curve.end(), [](const RDPoint& a, const RDPoint& b) {
    return a.distortion < b.distortion || (a.distortion == b.distortion && a.rate > b.rate);
  });
  return curve;
}

int sample_through_channel(const ChannelSolution& sol, int source_index, std::uint64_t rng_seed) {
  if (source_index < 0 || source_index >= sol.channel.rows()) {
    throw InvalidInput("sample_through_channel: source index out of range");
  }
  Rng rng(rng_seed);
  return sample_categorical(sol.channel.row(source_index), rng);
}

}  // namespace ratebound
