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

#include "ratebound/harness.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "ratebound/environments.hpp"
#include "ratebound/errors.hpp"
#include "ratebound/rng.hpp"

namespace ratebound {

namespace {

// Sub-stream tags under a replica seed.
constexpr std::uint64_t kEnvStream = 11;
constexpr std::uint64_t kAgentStream = 12;
constexpr std::uint64_t kClassStream = 13;
// Under an episode seed; the agent owns tags 1..3.
constexpr std::uint64_t kTrajectoryStream = 4;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("config key '" + key + "': cannot parse '" + value + "' as a number");
  }
  return out;
}

int parse_int(const std::string& key, const std::string& value) { return parse_number<int>(key, value); }

double parse_double(const std::string& key, const std::string& value) {
  const double out = parse_number<double>(key, value);
  if (!std::isfinite(out)) throw ConfigError("config key '" + key + "': value must be finite");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config key '" + key + "': expected true or false, got '" + value + "'");
}

template <typename Enum>
Enum parse_choice(const std::string& key, const std::string& value,
                  std::initializer_list<std::pair<const char*, Enum>> choices) {
  std::string allowed;
  for (const auto& [name, e] : choices) {
    if (value == name) return e;
    allowed += allowed.empty() ? name : std::string(", ") + name;
  }
  throw ConfigError("config key '" + key + "': '" + value + "' is not one of {" + allowed + "}");
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"env.kind",
       [](auto& c, auto& k, auto& v) {
         c.env.kind = parse_choice<EnvironmentKind>(k, v, {{"random", EnvironmentKind::Random},
                                                           {"chain", EnvironmentKind::Chain},
                                                           {"multires", EnvironmentKind::MultiResolution}});
       }},
      {"env.num_states", [](auto& c, auto& k, auto& v) { c.env.num_states = parse_int(k, v); }},
      {"env.num_actions", [](auto& c, auto& k, auto& v) { c.env.num_actions = parse_int(k, v); }},
      {"env.horizon", [](auto& c, auto& k, auto& v) { c.env.horizon = parse_int(k, v); }},
      {"env.components",
       [](auto& c, auto& k, auto& v) {
         c.env.components.clear();
         for (const auto& item : split_list(v)) c.env.components.push_back(parse_int(k, item));
       }},
      {"env.seed", [](auto& c, auto& k, auto& v) { c.env.seed = parse_number<std::uint64_t>(k, v); }},
      {"env.seed_mode",
       [](auto& c, auto& k, auto& v) {
         c.env.per_seed = parse_choice<bool>(k, v, {{"fixed", false}, {"per_seed", true}});
       }},
      {"env.max_product_states",
       [](auto& c, auto& k, auto& v) { c.env.max_product_states = parse_int(k, v); }},
      {"agent.kind",
       [](auto& c, auto& k, auto& v) {
         c.agent.kind = parse_choice<AgentKind>(
             k, v, {{"psrl", AgentKind::PSRL}, {"vsrl", AgentKind::VSRL}, {"cvsrl", AgentKind::CVSRL}});
       }},
      {"agent.distortion_threshold",
       [](auto& c, auto& k, auto& v) { c.agent.distortion_threshold = parse_double(k, v); }},
      {"agent.num_atoms", [](auto& c, auto& k, auto& v) { c.agent.num_atoms = parse_int(k, v); }},
      {"agent.rate_budget",
       [](auto& c, auto& k, auto& v) {
         if (v == "none") {
           c.agent.rate_budget.reset();
         } else {
           c.agent.rate_budget = parse_double(k, v);
         }
       }},
      {"agent.num_abstractions", [](auto& c, auto& k, auto& v) { c.num_abstractions = parse_int(k, v); }},
      {"distortion.kind",
       [](auto& c, auto& k, auto& v) {
         c.agent.distortion.kind = parse_choice<DistortionKind>(
             k, v, {{"qstar", DistortionKind::QStar}, {"piv", DistortionKind::PiV}, {"phi", DistortionKind::Phi}});
       }},
      {"distortion.pi_subset", [](auto& c, auto& k, auto& v) { c.pi_subset = parse_int(k, v); }},
      {"distortion.num_abstract_states",
       [](auto& c, auto& k, auto& v) { c.agent.distortion.num_abstract_states = parse_int(k, v); }},
      {"experiment.episodes", [](auto& c, auto& k, auto& v) { c.episodes = parse_int(k, v); }},
      {"experiment.seeds",
       [](auto& c, auto& k, auto& v) {
         c.seed_list.clear();
         for (const auto& item : split_list(v)) c.seed_list.push_back(parse_number<std::uint64_t>(k, item));
       }},
      {"experiment.num_seeds", [](auto& c, auto& k, auto& v) { c.num_seeds = parse_int(k, v); }},
      {"experiment.base_seed",
       [](auto& c, auto& k, auto& v) { c.base_seed = parse_number<std::uint64_t>(k, v); }},
      {"output.path", [](auto& c, auto&, auto& v) { c.output_path = v; }},
      {"output.wall_time", [](auto& c, auto& k, auto& v) { c.wall_time = parse_bool(k, v); }},
      {"rd.tol", [](auto& c, auto& k, auto& v) { c.agent.solver.tol = parse_double(k, v); }},
      {"rd.max_iters", [](auto& c, auto& k, auto& v) { c.agent.solver.max_iters = parse_int(k, v); }},
      {"rd.zero_tol", [](auto& c, auto& k, auto& v) { c.agent.solver.zero_tol = parse_double(k, v); }},
      {"rd.num_curve_points", [](auto& c, auto& k, auto& v) { c.curve_points = parse_int(k, v); }},
      {"prior.concentration", [](auto& c, auto& k, auto& v) { c.concentration = parse_double(k, v); }},
      {"prior.grid_levels", [](auto& c, auto& k, auto& v) { c.grid_levels = parse_int(k, v); }},
      {"prior.collapsed", [](auto& c, auto& k, auto& v) { c.collapsed_prior = parse_bool(k, v); }},
  };
  return table;
}

// CVSRL without an explicit distortion kind means d_Phi.
void apply_implied_defaults(ExperimentConfig& cfg) {
  if (cfg.agent.kind == AgentKind::CVSRL && !cfg.entries.contains("distortion.kind")) {
    cfg.agent.distortion.kind = DistortionKind::Phi;
  }
}

int ground_state_count(const EnvironmentConfig& env) {
  if (env.kind != EnvironmentKind::MultiResolution) return env.num_states;
  long long product = 1;
  for (int n : env.components) {
    product *= std::max(n, 1);
    if (product > env.max_product_states) return -1;
  }
  return static_cast<int>(product);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

const char* kind_name(AgentKind kind) {
  switch (kind) {
    case AgentKind::PSRL:
      return "psrl";
    case AgentKind::VSRL:
      return "vsrl";
    case AgentKind::CVSRL:
      return "cvsrl";
  }
  return "unknown";
}

}  // namespace

void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
  it->second(cfg, key, value);
  cfg.entries[key] = value;
  apply_implied_defaults(cfg);
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    if (value.empty()) throw ConfigError("config key '" + key + "': empty value");
    if (!seen.insert(key).second) throw ConfigError("config key '" + key + "': given twice");
    set_config_value(cfg, key, value);
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

void validate(const ExperimentConfig& cfg) {
  const auto fail = [](const std::string& key, const std::string& why) {
    throw ConfigError("config key '" + key + "': " + why);
  };
  const auto& env = cfg.env;
  if (env.num_actions < 1) fail("env.num_actions", "must be >= 1");
  if (env.horizon < 1) fail("env.horizon", "must be >= 1");
  switch (env.kind) {
    case EnvironmentKind::Random:
      if (env.num_states < 1) fail("env.num_states", "must be >= 1");
      break;
    case EnvironmentKind::Chain:
      if (env.num_states < 2) fail("env.num_states", "a chain needs at least 2 states");
      break;
    case EnvironmentKind::MultiResolution:
      if (env.components.empty()) fail("env.components", "multires needs at least one component");
      for (int n : env.components) {
        if (n < 1) fail("env.components", "component sizes must be >= 1");
      }
      if (env.max_product_states < 1) fail("env.max_product_states", "must be >= 1");
      break;
  }

  const auto& agent = cfg.agent;
  if (!(agent.distortion_threshold >= 0.0)) fail("agent.distortion_threshold", "must be >= 0");
  if (agent.rate_budget && !(*agent.rate_budget >= 0.0)) fail("agent.rate_budget", "must be >= 0");
  if (agent.kind != AgentKind::PSRL) {
    if (agent.num_atoms < 2) fail("agent.num_atoms", "VSRL and CVSRL need at least 2 atoms");
    if (agent.kind == AgentKind::VSRL && agent.distortion.kind == DistortionKind::Phi) {
      fail("distortion.kind", "VSRL takes qstar or piv");
    }
    if (agent.kind == AgentKind::CVSRL) {
      if (agent.distortion.kind != DistortionKind::Phi) fail("distortion.kind", "CVSRL takes phi");
      if (cfg.num_abstractions < 1) fail("agent.num_abstractions", "must be >= 1");
      const int states = ground_state_count(env);
      if (agent.distortion.num_abstract_states < 0 ||
          (states > 0 && agent.distortion.num_abstract_states > states)) {
        fail("distortion.num_abstract_states", "must lie in [1, |S|] (0 picks |S|/2)");
      }
    }
    if (agent.distortion.kind == DistortionKind::PiV && cfg.pi_subset < 1) {
      fail("distortion.pi_subset", "must be >= 1");
    }
  }
  if (cfg.episodes < 1) fail("experiment.episodes", "must be >= 1");
  if (cfg.seed_list.empty() && cfg.num_seeds < 1) fail("experiment.num_seeds", "must be >= 1");
  if (std::set<std::uint64_t>(cfg.seed_list.begin(), cfg.seed_list.end()).size() != cfg.seed_list.size()) {
    fail("experiment.seeds", "seeds must be distinct");
  }
  if (cfg.output_path.empty()) fail("output.path", "must not be empty");
  const auto parent = cfg.output_path.parent_path();
  if (!parent.empty() && std::filesystem::exists(parent) && !std::filesystem::is_directory(parent)) {
    fail("output.path", "parent '" + parent.string() + "' is not a directory");
  }
  if (!(agent.solver.tol > 0.0)) fail("rd.tol", "must be > 0");
  if (agent.solver.max_iters < 1) fail("rd.max_iters", "must be >= 1");
  if (!(agent.solver.zero_tol >= 0.0)) fail("rd.zero_tol", "must be >= 0");
  if (cfg.curve_points < 2) fail("rd.num_curve_points", "must be >= 2");
  if (cfg.grid_levels < 2) fail("prior.grid_levels", "must be >= 2");
  if (!(cfg.concentration > 0.0)) fail("prior.concentration", "must be > 0");
}

std::vector<std::uint64_t> replica_seeds(const ExperimentConfig& cfg) {
  if (!cfg.seed_list.empty()) return cfg.seed_list;
  std::vector<std::uint64_t> out;
  for (int i = 0; i < cfg.num_seeds; ++i) out.push_back(mix_seed(cfg.base_seed, static_cast<std::uint64_t>(i)));
  return out;
}

TabularMDP build_environment(const EnvironmentConfig& env, std::uint64_t replica_seed) {
  const std::uint64_t seed = env.per_seed ? mix_seed(replica_seed, kEnvStream) : env.seed;
  switch (env.kind) {
    case EnvironmentKind::Random:
      return build_random_mdp(env.num_states, env.num_actions, env.horizon, seed);
    case EnvironmentKind::Chain:
      return build_chain(env.num_states, env.horizon, env.num_actions);
    case EnvironmentKind::MultiResolution: {
      MultiResSpec spec;
      spec.component_states = env.components;
      spec.num_actions = env.num_actions;
      spec.horizon = env.horizon;
      spec.rng_seed = seed;
      spec.max_product_states = env.max_product_states;
      return build_multi_resolution(spec);
    }
  }
  throw InvalidInput("build_environment: unknown kind");
}

AgentConfig resolve_agent(const ExperimentConfig& cfg, const TabularMDP& truth,
                          std::uint64_t replica_seed) {
  AgentConfig agent = cfg.agent;
  const int S = truth.num_states();
  const std::uint64_t class_seed = mix_seed(replica_seed, kClassStream);
  switch (agent.distortion.kind) {
    case DistortionKind::QStar:
      break;
    case DistortionKind::PiV: {
      DistortionSpec spec = default_piv_spec(S, truth.num_actions(), class_seed, cfg.pi_subset);
      agent.distortion.policy_class = std::move(spec.policy_class);
      agent.distortion.add_greedy_policies = spec.add_greedy_policies;
      break;
    }
    case DistortionKind::Phi: {
      int Z = agent.distortion.num_abstract_states;
      if (Z == 0) Z = std::max(1, S / 2);
      agent.distortion.num_abstract_states = Z;
      agent.distortion.abstractions = default_abstractions(S, Z, cfg.num_abstractions, class_seed);
      break;
    }
  }
  return agent;
}

Posterior initial_posterior(const ExperimentConfig& cfg, const TabularMDP& truth) {
  if (cfg.collapsed_prior) return collapsed_posterior(truth, cfg.grid_levels, 1e12, cfg.concentration);
  return init_prior(truth.num_states(), truth.num_actions(), truth.horizon(), cfg.grid_levels,
                    cfg.concentration, truth.initial_distribution());
}

std::uint64_t episode_seed(std::uint64_t replica_seed, int k) {
  return mix_seed(mix_seed(replica_seed, kAgentStream), static_cast<std::uint64_t>(k));
}

bool ExperimentResult::ok() const {
  return std::all_of(seeds.begin(), seeds.end(), [](const SeedOutcome& s) { return !s.error; });
}

SeedOutcome run_replica(const ExperimentConfig& cfg, std::uint64_t replica_seed,
                        std::vector<EpisodeRecord>& rows) {
  using Clock = std::chrono::steady_clock;
  SeedOutcome outcome;
  outcome.seed = replica_seed;
  int k = 0;
  try {
    const TabularMDP truth = build_environment(cfg.env, replica_seed);
    AgentConfig agent = resolve_agent(cfg, truth, replica_seed);
    Posterior post = initial_posterior(cfg, truth);
    for (k = 1; k <= cfg.episodes; ++k) {
      const auto start = Clock::now();
      const std::uint64_t es = episode_seed(replica_seed, k);
      const EpisodePlan plan = begin_episode(post, agent, es);
      if (k == 1 && agent.rate_budget) {
        // Capacity mode: the episode-1 D(R) becomes the threshold from here on.
        agent.distortion_threshold = plan.distortion_threshold;
        agent.rate_budget.reset();
      }
      const Trajectory traj = sample_trajectory(truth, plan.policy, mix_seed(es, kTrajectoryStream));

      EpisodeRecord rec;
      rec.seed = replica_seed;
      rec.episode = k;
      rec.true_regret = episodic_regret(truth, plan);
      rec.satisficing_regret = satisficing_regret(plan);
      if (plan.channel_solution) {
        rec.rate_nats = plan.channel_solution->rate_nats;
        rec.expected_distortion = plan.channel_solution->expected_distortion;
        rec.realized_distortion = plan.realized_distortion;
        rec.posterior_entropy_est = plan.atom_entropy;
      }
      post = agent_end_episode(post, traj);
      if (cfg.wall_time) {
        rec.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
      }
      rows.push_back(rec);
    }
  } catch (const std::exception& e) {
    outcome.error = (k > 0 ? "episode " + std::to_string(k) + ": " : std::string("setup: ")) + e.what();
  }
  outcome.rows = static_cast<int>(rows.size());
  return outcome;
}

ExperimentResult simulate(const ExperimentConfig& cfg, int workers) {
  validate(cfg);
  const auto started = std::chrono::steady_clock::now();
  const std::vector<std::uint64_t> seeds = replica_seeds(cfg);
  const std::size_t n = seeds.size();
  std::vector<std::vector<EpisodeRecord>> rows(n);
  std::vector<SeedOutcome> outcomes(n);
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      outcomes[i] = run_replica(cfg, seeds[i], rows[i]);
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), 1, n);
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
  }

  ExperimentResult result;
  for (auto& r : rows) result.records.insert(result.records.end(), r.begin(), r.end());
  std::stable_sort(result.records.begin(), result.records.end(),
                   [](const EpisodeRecord& a, const EpisodeRecord& b) {
                     return a.seed < b.seed || (a.seed == b.seed && a.episode < b.episode);
                   });
  result.seeds = std::move(outcomes);
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

std::string records_to_csv(std::span<const EpisodeRecord> records) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    out += std::to_string(r.seed);
    out += ',' + std::to_string(r.episode);
    for (double v : {r.true_regret, r.satisficing_regret, r.rate_nats, r.expected_distortion,
                     r.realized_distortion, r.posterior_entropy_est, r.wall_ms}) {
      out += ',' + format_double(v);
    }
    out += '\n';
  }
  return out;
}

std::filesystem::path manifest_path(const std::filesystem::path& csv_path) {
  std::filesystem::path out = csv_path;
  out.replace_extension(".manifest.json");
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, int workers) {
  ExperimentResult result = simulate(cfg, workers);
  write_text(cfg.output_path, records_to_csv(result.records));

  nlohmann::ordered_json manifest;
  manifest["tool"] = "ratebound";
  manifest["version"] = "0.1.0";
  manifest["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                              "." + std::to_string(EIGEN_MINOR_VERSION);
  manifest["compiler"] = __VERSION__;
  manifest["agent"] = kind_name(cfg.agent.kind);
  manifest["config"] = cfg.entries;
  manifest["episodes"] = cfg.episodes;
  manifest["csv"] = cfg.output_path.filename().string();
  manifest["rows"] = result.records.size();
  manifest["seed_workers"] = workers;
  manifest["wall_seconds"] = result.wall_seconds;
  auto& seeds = manifest["seeds"] = nlohmann::ordered_json::array();
  for (const auto& s : result.seeds) {
    nlohmann::ordered_json entry;
    entry["seed"] = s.seed;
    entry["rows"] = s.rows;
    entry["status"] = s.error ? "failed" : "ok";
    if (s.error) entry["error"] = *s.error;
    seeds.push_back(std::move(entry));
  }
  write_text(manifest_path(cfg.output_path), manifest.dump(2) + "\n");
  return result;
}

RdCurveResult compute_rd_curve(const ExperimentConfig& cfg) {
  validate(cfg);
  if (cfg.agent.kind == AgentKind::PSRL) {
    throw ConfigError("config key 'agent.kind': rd-curve needs a vsrl or cvsrl distortion setup");
  }
  const std::uint64_t seed = replica_seeds(cfg).front();
  const TabularMDP truth = build_environment(cfg.env, seed);
  const AgentConfig agent = resolve_agent(cfg, truth, seed);
  const Posterior post = initial_posterior(cfg, truth);
  const auto atoms = sample_atoms(post, agent.num_atoms, mix_seed(episode_seed(seed, 1), kAtomSubstream));

  PlanningCache cache;
  const Matrix dmat = agent.distortion.kind == DistortionKind::Phi
                          ? distortion_matrix(atoms, abstract_alphabet(atoms, agent.distortion),
                                              agent.distortion, &cache)
                          : distortion_matrix(atoms, atoms, agent.distortion, &cache);
  const auto m = static_cast<Eigen::Index>(atoms.size());
  const Vector p = Vector::Constant(m, 1.0 / static_cast<double>(m));

  RdCurveResult result;
  result.curve = trace_rd_curve(p, dmat, cfg.curve_points, agent.solver);
  double max_rate = 0.0;
  for (const auto& pt : result.curve) max_rate = std::max(max_rate, pt.rate);
  for (int i = 0; i < cfg.curve_points; ++i) {
    const double budget = max_rate * i / (cfg.curve_points - 1);
    const ChannelSolution sol = solve_distortion_rate(p, dmat, budget, agent.solver);
    result.inverse.push_back({budget, sol.expected_distortion, sol.rate_nats});
  }
  return result;
}

RdCurveResult run_rd_curve(const ExperimentConfig& cfg) {
  RdCurveResult result = compute_rd_curve(cfg);
  std::string curve = "distortion,rate_nats\n";
  for (const auto& pt : result.curve) curve += format_double(pt.distortion) + ',' + format_double(pt.rate) + '\n';
  write_text(cfg.output_path, curve);

  std::string inverse = "rate_budget,distortion,rate_nats\n";
  for (const auto& row : result.inverse) {
    inverse += format_double(row[0]) + ',' + format_double(row[1]) + ',' + format_double(row[2]) + '\n';
  }
  std::filesystem::path inverse_path = cfg.output_path;
  inverse_path.replace_filename(cfg.output_path.stem().string() + "_inverse" +
                                cfg.output_path.extension().string());
  write_text(inverse_path, inverse);
  return result;
}

std::filesystem::path sweep_output_path(const std::filesystem::path& base, const std::string& key,
                                        const std::string& value) {
  const auto dot = key.rfind('.');
  const std::string leaf = dot == std::string::npos ? key : key.substr(dot + 1);
  std::filesystem::path out = base;
  out.replace_filename(base.stem().string() + "_" + leaf + "_" + value + base.extension().string());
  return out;
}

}  // namespace ratebound
