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

#include "ratebound/checks.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "ratebound/bayes.hpp"
#include "ratebound/distortion.hpp"
#include "ratebound/environments.hpp"
#include "ratebound/harness.hpp"
#include "ratebound/metrics.hpp"
#include "ratebound/rate_distortion.hpp"
#include "ratebound/rng.hpp"

namespace ratebound::checks {

namespace {

// Pinned tolerances and run sizes, one block per criterion.
constexpr int kPlannerInstances = 100;
constexpr double kPlannerTol = 1e-12;

constexpr double kAnalyticRateTol = 1e-3;
constexpr int kBinaryGridSteps = 400;

constexpr int kPropertyInstances = 20;
constexpr int kPropertyAtoms = 8;
constexpr int kCurvePoints = 12;
constexpr double kMonotoneTol = 1e-6;
constexpr double kConvexTol = 1e-4;

constexpr int kDominanceGrid = 10;
constexpr int kDominanceSubclassSize = 3;
constexpr double kDominanceTol = 1e-6;

constexpr double kInverseTolFactor = 2.0;

constexpr double kContractD = 0.04;
constexpr double kContractTol = 1e-6;
constexpr int kContractSeeds = 50;
constexpr int kContractEpisodes = 100;

constexpr int kEquivalenceSeeds = 200;
constexpr int kEquivalenceEpisodes = 100;
constexpr double kEquivalenceSlack = 3.0;

constexpr int kDecompositionSeeds = 100;
constexpr int kDecompositionEpisodes = 30;

constexpr int kFanoGridSteps = 20;
constexpr double kFanoTol = 1e-3;

constexpr int kCapacitySeeds = 20;

using Clock = std::chrono::steady_clock;

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c);
  return buf;
}

/// Prior over a random MDP's shape, sharpened by a seed-dependent number of
/// uniform-policy trajectories so instances range from diffuse to peaked.
Posterior random_posterior(int S, int A, int H, std::uint64_t seed) {
  const TabularMDP truth = build_random_mdp(S, A, H, seed);
  Posterior post = init_prior(S, A, H, kDefaultGridLevels, 1.0, truth.initial_distribution());
  const int trajectories = static_cast<int>(seed % 4) * 3;
  const auto uniform = NonstationaryPolicy::uniform(S, A, H);
  for (int t = 0; t < trajectories; ++t) {
    post = update(post, sample_trajectory(truth, uniform, mix_seed(seed, 1000 + t)));
  }
  return post;
}

Vector uniform_source(Eigen::Index m) { return Vector::Constant(m, 1.0 / static_cast<double>(m)); }

ExperimentConfig base_config(const std::vector<std::pair<std::string, std::string>>& kv) {
  ExperimentConfig cfg;
  for (const auto& [k, v] : kv) set_config_value(cfg, k, v);
  validate(cfg);
  return cfg;
}

std::string seed_failures(const ExperimentResult& r) {
  for (const auto& s : r.seeds) {
    if (s.error) return "seed " + std::to_string(s.seed) + " failed: " + *s.error;
  }
  return {};
}

CheckResult planner_oracle(const CheckOptions&) {
  CheckResult r{1, "planner-oracle"};
  double worst = 0.0;
  for (int i = 0; i < kPlannerInstances; ++i) {
    const TabularMDP mdp = build_random_mdp(2, 2, 2, mix_seed(0xA11CE, i));
    const double planned = plan_backward_induction(mdp).values.initial_value;
    worst = std::max(worst, std::abs(planned - enumerate_optimal_value(mdp)));
  }
  r.passed = worst <= kPlannerTol;
  r.detail = fmt("max |V*_plan - V*_enum| = %.3g over 100 MDPs (tol 1e-12)", worst);
  return r;
}

CheckResult rd_analytic(const CheckOptions&) {
  CheckResult r{2, "rd-analytic"};
  const Vector p = uniform_source(2);
  Matrix d(2, 2);
  d << 0.0, 1.0, 1.0, 0.0;
  double worst = 0.0;
  double worst_grid = 0.0;
  for (double D : {0.05, 0.1, 0.2, 0.3}) {
    const double solved = solve_rate_distortion(p, d, D, {}).rate_nats;
    const double exact = binary_hamming_rate(D);
    worst = std::max(worst, std::abs(solved - exact));
    // The grid minimum can only overestimate the true minimum.
    worst_grid = std::max(worst_grid, std::max(0.0, exact - binary_grid_min_rate(D, kBinaryGridSteps)));
  }
  r.passed = worst <= kAnalyticRateTol && worst_grid <= kAnalyticRateTol;
  r.detail = fmt("max |R_solver - (ln2 - h_b(D))| = %.3g nats, grid undershoot %.3g (tol 1e-3)", worst,
                 worst_grid);
  return r;
}

CheckResult rd_properties(const CheckOptions&) {
  CheckResult r{3, "rd-properties"};
  int failures = 0;
  double worst_mono = -std::numeric_limits<double>::infinity();
  double worst_convex = -std::numeric_limits<double>::infinity();
  double min_rate = 0.0;
  for (int i = 0; i < kPropertyInstances; ++i) {
    const Posterior post = random_posterior(3, 2, 3, mix_seed(0xFAC7, i));
    const auto atoms = sample_atoms(post, kPropertyAtoms, mix_seed(0xA70B, i));
    const Matrix d = distortion_matrix(atoms, atoms, DistortionSpec{});
    const Vector p = uniform_source(d.rows());
    const RDCurve curve = trace_rd_curve(p, d, kCurvePoints, {});
    bool ok = true;
    for (std::size_t k = 0; k < curve.size(); ++k) {
      min_rate = std::min(min_rate, curve[k].rate);
      if (curve[k].rate < 0.0) ok = false;
      if (k > 0) {
        const double rise = curve[k].rate - curve[k - 1].rate;
        worst_mono = std::max(worst_mono, rise);
        if (rise > kMonotoneTol) ok = false;
      }
    }
    for (std::size_t a = 0; a < curve.size(); ++a) {
      for (std::size_t b = a + 1; b < curve.size(); ++b) {
        if (curve[b].distortion <= curve[a].distortion) continue;
        const double mid = 0.5 * (curve[a].distortion + curve[b].distortion);
        const double r_mid = solve_rate_distortion(p, d, mid, {}).rate_nats;
        const double excess = r_mid - 0.5 * (curve[a].rate + curve[b].rate);
        worst_convex = std::max(worst_convex, excess);
        if (excess > kConvexTol) ok = false;
      }
    }
    if (!ok) ++failures;
  }
  r.passed = failures == 0;
  r.detail = fmt("min rate %.3g, max rise %.3g (tol 1e-6), max midpoint excess %.3g (tol 1e-4)", min_rate,
                 worst_mono, worst_convex);
  if (failures > 0) r.detail += ", " + std::to_string(failures) + " failing instances";
  return r;
}

CheckResult dominance(const CheckOptions&) {
  CheckResult r{4, "dominance"};
  const int S = 3;
  const int A = 2;
  DistortionSpec large;
  large.kind = DistortionKind::PiV;
  large.policy_class = all_deterministic_policies(S, A);
  DistortionSpec small = large;
  small.policy_class.resize(kDominanceSubclassSize);
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kPropertyInstances; ++i) {
    const Posterior post = random_posterior(S, A, 3, mix_seed(0xD0D0, i));
    const auto atoms = sample_atoms(post, kPropertyAtoms, mix_seed(0xA70C, i));
    const Matrix d_large = distortion_matrix(atoms, atoms, large);
    const Matrix d_small = distortion_matrix(atoms, atoms, small);
    const Vector p = uniform_source(d_large.rows());
    const double top = (p.transpose() * d_large).minCoeff();
    for (int g = 0; g < kDominanceGrid; ++g) {
      const double D = top * g / (kDominanceGrid - 1);
      const double r_large = solve_rate_distortion(p, d_large, D, {}).rate_nats;
      const double r_small = solve_rate_distortion(p, d_small, D, {}).rate_nats;
      worst = std::max(worst, r_small - r_large);
    }
  }
  r.passed = worst <= kDominanceTol;
  r.detail = fmt("max R_small - R_large = %.3g nats over 20 posteriors x 10 D (tol 1e-6)", worst);
  return r;
}

CheckResult inverse_consistency(const CheckOptions&) {
  CheckResult r{5, "inverse-consistency"};
  const SolverOptions opts;
  double worst = -1.0;
  for (int i = 0; i < kPropertyInstances; ++i) {
    const Posterior post = random_posterior(3, 2, 3, mix_seed(0x1A7E, i));
    const auto atoms = sample_atoms(post, kPropertyAtoms, mix_seed(0xA70D, i));
    const Matrix d = distortion_matrix(atoms, atoms, DistortionSpec{});
    const Vector p = uniform_source(d.rows());
    Rng rng(mix_seed(0x1A7F, i));
    const double D = (0.05 + 0.9 * uniform01(rng)) * (p.transpose() * d).minCoeff();
    const double R = solve_rate_distortion(p, d, D, opts).rate_nats;
    const double back = solve_distortion_rate(p, d, R, opts).expected_distortion;
    worst = std::max(worst, back - D);
  }
  r.passed = worst <= kInverseTolFactor * opts.tol;
  r.detail = fmt("max D(R(D)) - D = %.3g (tol 2e-6)", worst);
  return r;
}

CheckResult vsrl_contract(const CheckOptions& opts) {
  CheckResult r{6, "vsrl-contract"};
  const ExperimentConfig cfg = base_config({{"env.kind", "chain"},
                                            {"env.num_states", "4"},
                                            {"env.horizon", "5"},
                                            {"agent.kind", "vsrl"},
                                            {"agent.distortion_threshold", "0.04"},
                                            {"distortion.kind", "qstar"},
                                            {"experiment.episodes", std::to_string(kContractEpisodes)},
                                            {"experiment.num_seeds", std::to_string(kContractSeeds)},
                                            {"experiment.base_seed", "6"}});
  const ExperimentResult res = simulate(cfg, opts.workers);
  double worst_d = -1.0;
  double worst_r = -1.0;
  for (const auto& rec : res.records) {
    worst_d = std::max(worst_d, rec.expected_distortion - kContractD);
    worst_r = std::max(worst_r, rec.rate_nats - rec.posterior_entropy_est);
  }
  const auto expected_rows = static_cast<std::size_t>(kContractSeeds * kContractEpisodes);
  r.passed = res.ok() && res.records.size() == expected_rows && worst_d <= kContractTol &&
             worst_r <= kContractTol;
  r.detail = fmt("%.0f episodes, max E[d] - D = %.3g, max rate - entropy = %.3g (tol 1e-6)",
                 static_cast<double>(res.records.size()), worst_d, worst_r);
  if (!res.ok()) r.detail += "; " + seed_failures(res);
  return r;
}

CheckResult psrl_equivalence(const CheckOptions& opts) {
  CheckResult r{7, "psrl-equivalence"};
  std::vector<std::pair<std::string, std::string>> common = {
      {"env.kind", "random"},       {"env.num_states", "3"},
      {"env.num_actions", "2"},     {"env.horizon", "5"},
      {"env.seed", "7"},            {"experiment.episodes", std::to_string(kEquivalenceEpisodes)},
      {"experiment.num_seeds", std::to_string(kEquivalenceSeeds)},
      {"experiment.base_seed", "7"}};
  auto psrl_kv = common;
  psrl_kv.emplace_back("agent.kind", "psrl");
  auto vsrl_kv = common;
  vsrl_kv.insert(vsrl_kv.end(), {{"agent.kind", "vsrl"},
                                 {"agent.distortion_threshold", "0"},
                                 {"agent.num_atoms", "32"},
                                 {"distortion.kind", "qstar"}});
  const ExperimentResult psrl = simulate(base_config(psrl_kv), opts.workers);
  const ExperimentResult vsrl = simulate(base_config(vsrl_kv), opts.workers);
  const MeanStdErr a = bayes_regret(psrl.records);
  const MeanStdErr b = bayes_regret(vsrl.records);
  const double gap = std::abs(a.mean - b.mean);
  const double allowed = kEquivalenceSlack * std::hypot(a.stderr_, b.stderr_);
  r.passed = psrl.ok() && vsrl.ok() && gap < allowed;
  r.detail = fmt("PSRL %.4f vs VSRL(D=0) %.4f cumulative regret, |diff| %.4f", a.mean, b.mean, gap) +
             fmt(" < 3 x combined SE %.4f", allowed);
  if (!psrl.ok()) r.detail += "; " + seed_failures(psrl);
  if (!vsrl.ok()) r.detail += "; " + seed_failures(vsrl);
  return r;
}

struct MultiresRuns {
  ExperimentResult d001;
  ExperimentResult d004;
};

const MultiresRuns& multires_runs(const CheckOptions& opts) {
  static std::once_flag once;
  static MultiresRuns runs;
  std::call_once(once, [&] {
    const auto run = [&](const std::string& D) {
      return simulate(base_config({{"env.kind", "multires"},
                                   {"env.components", "2,2,2"},
                                   {"env.num_actions", "2"},
                                   {"env.horizon", "5"},
                                   {"env.seed", "8"},
                                   {"agent.kind", "vsrl"},
                                   {"agent.distortion_threshold", D},
                                   {"distortion.kind", "qstar"},
                                   {"experiment.episodes", std::to_string(kDecompositionEpisodes)},
                                   {"experiment.num_seeds", std::to_string(kDecompositionSeeds)},
                                   {"experiment.base_seed", "8"}}),
                      opts.workers);
    };
    runs.d001 = run("0.01");
    runs.d004 = run("0.04");
  });
  return runs;
}

CheckResult regret_decomposition(const CheckOptions& opts) {
  CheckResult r{8, "regret-decomposition"};
  const auto& runs = multires_runs(opts);
  const int H = 5;
  std::ostringstream detail;
  const char* sep = "";
  bool passed = true;
  for (const auto& [D, res] : {std::pair{0.01, &runs.d001}, std::pair{0.04, &runs.d004}}) {
    detail << sep;
    sep = "; ";
    const DecompositionReport rep = regret_decomposition_check(res->records, D, H, DistortionKind::QStar);
    double worst_margin = -1e300;
    int worst_k = 0;
    for (const auto& v : rep.per_episode) {
      const double margin = v.mean_true_regret - v.mean_satisficing_regret - v.allowance;
      if (margin > worst_margin) {
        worst_margin = margin;
        worst_k = v.episode;
      }
    }
    passed = passed && rep.passed && res->ok();
    detail << "D=" << D << ": " << (rep.passed ? "holds" : "violated") << " (closest k=" << worst_k
           << ", true - sat - allowance = " << worst_margin << ", err term " << rep.bound << ")";
    if (rep.low_power) detail << " low-power";
    if (!res->ok()) detail << " " << seed_failures(*res);
  }
  r.passed = passed;
  r.detail = detail.str();
  return r;
}

CheckResult rate_trend(const CheckOptions& opts) {
  CheckResult r{9, "rate-trend"};
  const auto& runs = multires_runs(opts);
  std::ostringstream detail;
  const char* sep = "";
  bool passed = true;
  for (const auto& [D, res] : {std::pair{0.01, &runs.d001}, std::pair{0.04, &runs.d004}}) {
    detail << sep;
    sep = "; ";
    const TrendReport rep = rate_trend_check(res->records);
    passed = passed && rep.passed && res->ok();
    detail << "D=" << D << ": R_1=" << rep.mean_rate.front() << " -> R_K=" << rep.mean_rate.back() << ", "
           << rep.violations.size() << " violations";
    for (int k : rep.violations) detail << " k=" << k;
    if (rep.low_power) detail << " low-power";
  }
  r.passed = passed;
  r.detail = detail.str();
  return r;
}

CheckResult fano(const CheckOptions&) {
  CheckResult r{10, "fano"};
  const Vector p = uniform_source(3);
  const Matrix d = Matrix::Ones(3, 3) - Matrix::Identity(3, 3);
  const double D = 0.5;
  const ChannelSolution sol = solve_rate_distortion(p, d, D, {});
  const double bound = fano_lower_bound(p, d, D, sol);
  const double brute = grid_min_error(p, d, D, sol.rate_nats, kFanoGridSteps);
  r.passed = bound <= brute + kFanoTol;
  r.detail = fmt("R(0.5) = %.4f nats, bound %.4f <= grid minimum error %.4f + 1e-3", sol.rate_nats, bound, brute);
  return r;
}

CheckResult capacity(const CheckOptions& opts) {
  CheckResult r{11, "capacity"};
  const SolverOptions solver;
  std::ostringstream detail;
  const char* sep = "";
  bool passed = true;
  for (const char* R : {"0.5", "1.0", "2.0"}) {
    detail << sep;
    sep = "; ";
    const ExperimentResult res = simulate(base_config({{"env.kind", "chain"},
                                                       {"env.num_states", "4"},
                                                       {"env.horizon", "5"},
                                                       {"agent.kind", "vsrl"},
                                                       {"agent.rate_budget", R},
                                                       {"distortion.kind", "qstar"},
                                                       {"experiment.episodes", "1"},
                                                       {"experiment.num_seeds", std::to_string(kCapacitySeeds)},
                                                       {"experiment.base_seed", "11"}}),
                                          opts.workers);
    const double budget = std::stod(R);
    double worst = 0.0;
    for (const auto& rec : res.records) worst = std::max(worst, rec.rate_nats);
    passed = passed && res.ok() && worst <= budget + solver.tol;
    detail << "R=" << R << ": max episode-1 rate " << worst;
  }
  r.passed = passed;
  r.detail = detail.str();
  return r;
}

using CheckFn = std::function<CheckResult(const CheckOptions&)>;

const std::vector<std::pair<std::string, CheckFn>>& registry() {
  static const std::vector<std::pair<std::string, CheckFn>> table = {
      {"planner-oracle", planner_oracle},
      {"rd-analytic", rd_analytic},
      {"rd-properties", rd_properties},
      {"dominance", dominance},
      {"inverse-consistency", inverse_consistency},
      {"vsrl-contract", vsrl_contract},
      {"psrl-equivalence", psrl_equivalence},
      {"regret-decomposition", regret_decomposition},
      {"rate-trend", rate_trend},
      {"fano", fano},
      {"capacity", capacity},
  };
  return table;
}

bool is_quick(const std::string& name) {
  return name != "vsrl-contract" && name != "psrl-equivalence" && name != "regret-decomposition" &&
         name != "rate-trend";
}

}  // namespace

std::vector<std::string> check_names() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : registry()) out.push_back(name);
  return out;
}

std::vector<std::string> suite_names() {
  std::vector<std::string> out = check_names();
  out.push_back("quick");
  out.push_back("all");
  return out;
}

std::vector<CheckResult> run_suite(std::string_view suite, const CheckOptions& opts) {
  std::vector<CheckResult> out;
  bool known = suite == "all" || suite == "quick";
  int criterion = 0;
  for (const auto& [name, fn] : registry()) {
    ++criterion;
    const bool selected = suite == "all" || (suite == "quick" && is_quick(name)) || suite == name;
    if (!selected) continue;
    known = true;
    const auto start = Clock::now();
    CheckResult result;
    try {
      result = fn(opts);
    } catch (const std::exception& e) {
      result.criterion = criterion;
      result.name = name;
      result.passed = false;
      result.detail = std::string("threw: ") + e.what();
    }
    result.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    out.push_back(std::move(result));
  }
  if (!known) throw std::invalid_argument("unknown suite '" + std::string(suite) + "'");
  return out;
}

std::string format_result(const CheckResult& result) {
  char head[96];
  std::snprintf(head, sizeof(head), "%s  [%2d] %-22s", result.passed ? "PASS" : "FAIL", result.criterion,
                result.name.c_str());
  char tail[32];
  std::snprintf(tail, sizeof(tail), "  (%.2fs)", result.seconds);
  return std::string(head) + result.detail + tail;
}

double enumerate_policy_value(const TabularMDP& mdp, const std::vector<std::vector<int>>& actions) {
  const int S = mdp.num_states();
  const int H = mdp.horizon();
  std::vector<double> next(static_cast<std::size_t>(S), 0.0);
  for (int h = H - 1; h >= 0; --h) {
    std::vector<double> cur(static_cast<std::size_t>(S), 0.0);
    for (int s = 0; s < S; ++s) {
      const int a = actions[static_cast<std::size_t>(h)][static_cast<std::size_t>(s)];
      double total = mdp.rewards()(s, a);
      for (int sp = 0; sp < S; ++sp) {
        total += mdp.transitions()(static_cast<Eigen::Index>(s) * mdp.num_actions() + a, sp) *
                 next[static_cast<std::size_t>(sp)];
      }
      cur[static_cast<std::size_t>(s)] = total;
    }
    next = std::move(cur);
  }
  double value = 0.0;
  for (int s = 0; s < S; ++s) value += mdp.initial_distribution()(s) * next[static_cast<std::size_t>(s)];
  return value;
}

double enumerate_optimal_value(const TabularMDP& mdp) {
  const int S = mdp.num_states();
  const int A = mdp.num_actions();
  const int H = mdp.horizon();
  const int slots = S * H;
  long long total = 1;
  for (int i = 0; i < slots; ++i) {
    total *= A;
    if (total > (1LL << 24)) throw std::invalid_argument("enumerate_optimal_value: too many policies");
  }
  double best = -1e300;
  std::vector<std::vector<int>> actions(static_cast<std::size_t>(H), std::vector<int>(static_cast<std::size_t>(S)));
  for (long long code = 0; code < total; ++code) {
    long long c = code;
    for (int h = 0; h < H; ++h) {
      for (int s = 0; s < S; ++s) {
        actions[static_cast<std::size_t>(h)][static_cast<std::size_t>(s)] = static_cast<int>(c % A);
        c /= A;
      }
    }
    best = std::max(best, enumerate_policy_value(mdp, actions));
  }
  return best;
}

double binary_hamming_rate(double D) {
  if (D <= 0.0) return std::log(2.0);
  if (D >= 0.5) return 0.0;
  return std::log(2.0) + D * std::log(D) + (1.0 - D) * std::log(1.0 - D);
}

double binary_grid_min_rate(double D, int steps) {
  double best = std::log(2.0);
  const auto xlogx = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };
  for (int i = 0; i <= steps; ++i) {
    const double a = static_cast<double>(i) / steps;  // P(1|0)
    for (int j = 0; j <= steps; ++j) {
      const double b = static_cast<double>(j) / steps;  // P(0|1)
      if (0.5 * (a + b) > D + 1e-15) continue;
      const double q1 = 0.5 * (a + 1.0 - b);
      const double q0 = 1.0 - q1;
      const double rate = 0.5 * (xlogx(1.0 - a) + xlogx(a) + xlogx(b) + xlogx(1.0 - b)) - xlogx(q0) - xlogx(q1);
      best = std::min(best, rate);
    }
  }
  return best;
}

double grid_min_error(const Vector& p, const Matrix& dmat, double D, double rate_cap, int steps) {
  const Eigen::Index m = dmat.rows();
  if (m != 3 || dmat.cols() != 3) throw std::invalid_argument("grid_min_error: only 3 x 3 channels");
  std::vector<std::array<double, 3>> rows;
  for (int a = 0; a <= steps; ++a) {
    for (int b = 0; a + b <= steps; ++b) {
      rows.push_back({static_cast<double>(a) / steps, static_cast<double>(b) / steps,
                      static_cast<double>(steps - a - b) / steps});
    }
  }
  const auto xlogx = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };
  std::vector<double> neg_entropy(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    neg_entropy[r] = xlogx(rows[r][0]) + xlogx(rows[r][1]) + xlogx(rows[r][2]);
  }
  // Per source i and row r: probability mass on outputs with d(i, j) > D.
  std::vector<std::array<double, 3>> miss(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (int i = 0; i < 3; ++i) {
      double mass = 0.0;
      for (int j = 0; j < 3; ++j) {
        if (dmat(i, j) > D) mass += rows[r][static_cast<std::size_t>(j)];
      }
      miss[r][static_cast<std::size_t>(i)] = mass;
    }
  }
  double best = 1.0;
  for (std::size_t r0 = 0; r0 < rows.size(); ++r0) {
    for (std::size_t r1 = 0; r1 < rows.size(); ++r1) {
      const double partial_err = p(0) * miss[r0][0] + p(1) * miss[r1][1];
      if (partial_err >= best) continue;
      for (std::size_t r2 = 0; r2 < rows.size(); ++r2) {
        const double err = partial_err + p(2) * miss[r2][2];
        if (err >= best) continue;
        double rate = p(0) * neg_entropy[r0] + p(1) * neg_entropy[r1] + p(2) * neg_entropy[r2];
        for (int j = 0; j < 3; ++j) {
          const auto ju = static_cast<std::size_t>(j);
          rate -= xlogx(p(0) * rows[r0][ju] + p(1) * rows[r1][ju] + p(2) * rows[r2][ju]);
        }
        if (rate <= rate_cap + 1e-12) best = err;
      }
    }
  }
  return best;
}

}  // namespace ratebound::checks
