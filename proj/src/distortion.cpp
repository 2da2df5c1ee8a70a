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

#include "ratebound/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ratebound/errors.hpp"
#include "ratebound/rng.hpp"

namespace ratebound {

namespace {

using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

void check_policy(const StationaryPolicy& pi, int S, int A) {
  if (static_cast<int>(pi.size()) != S) {
    throw InvalidInput("policy class: decision rule has the wrong number of states");
  }
  for (int a : pi) {
    if (a < 0 || a >= A) throw InvalidInput("policy class: action index out of range");
  }
}

void check_abstraction(const Abstraction& phi, int S, int Z) {
  if (static_cast<int>(phi.size()) != S) {
    throw InvalidInput("abstraction: map has the wrong number of states");
  }
  for (int z : phi) {
    if (z < 0 || z >= Z) throw InvalidInput("abstraction: abstract index out of range");
  }
}

/// v[0..H] of a stationary deterministic rule, v[H] == 0.
std::vector<Vector> stationary_values(const TabularMDP& mdp, const StationaryPolicy& pi) {
  const int S = mdp.num_states();
  const int H = mdp.horizon();
  const Matrix& T = mdp.transitions();
  std::vector<Vector> v(static_cast<std::size_t>(H) + 1, Vector::Zero(S));
  for (int h = H - 1; h >= 0; --h) {
    const Vector& next = v[static_cast<std::size_t>(h) + 1];
    Vector& cur = v[static_cast<std::size_t>(h)];
    for (int s = 0; s < S; ++s) {
      const int a = pi[static_cast<std::size_t>(s)];
      const Eigen::Index row = static_cast<Eigen::Index>(s) * mdp.num_actions() + a;
      double cont = 0.0;
      for (int sp = 0; sp < S; ++sp) cont += T(row, sp) * next(sp);
      cur(s) = mdp.reward(s, a) + cont;
    }
  }
  return v;
}

std::vector<StationaryPolicy> greedy_rules(const PlanResult& plan) {
  std::vector<StationaryPolicy> rules;
  const int S = plan.policy.num_states();
  for (int h = 0; h < plan.policy.horizon(); ++h) {
    StationaryPolicy rule(static_cast<std::size_t>(S));
    for (int s = 0; s < S; ++s) rule[static_cast<std::size_t>(s)] = plan.policy.deterministic_action(h, s);
    rules.push_back(std::move(rule));
  }
  return rules;
}

/// Per-atom material for the PiV distortion: optimal values and the value
/// functions of every base-class policy.
struct PiVAtom {
  std::shared_ptr<const PlanResult> plan;
  std::vector<Vector> base_values;  // flattened over (policy, h)
};

PiVAtom make_piv_atom(const TabularMDP& mdp, const DistortionSpec& spec, PlanningCache& cache) {
  PiVAtom atom;
  atom.plan = cache.get(mdp);
  for (const auto& pi : spec.policy_class) {
    auto v = stationary_values(mdp, pi);
    // v[H] is the zero vector; keep one copy via the optimal values instead.
    for (int h = 0; h < mdp.horizon(); ++h) atom.base_values.push_back(std::move(v[static_cast<std::size_t>(h)]));
  }
  return atom;
}

double piv_pair(const TabularMDP& m1, const PiVAtom& a1, const TabularMDP& m2, const PiVAtom& a2,
                const DistortionSpec& spec) {
  const int S = m1.num_states();
  const int A = m1.num_actions();
  BoolMatrix covered = BoolMatrix::Constant(S, A, false);
  for (const auto& pi : spec.policy_class) {
    for (int s = 0; s < S; ++s) covered(s, pi[static_cast<std::size_t>(s)]) = true;
  }

  std::vector<const Vector*> value_class;
  for (const auto& v : a1.base_values) value_class.push_back(&v);
  for (const auto& v : a2.base_values) value_class.push_back(&v);
  for (const auto& v : a1.plan->values.v) value_class.push_back(&v);
  for (const auto& v : a2.plan->values.v) value_class.push_back(&v);

  std::vector<Vector> greedy_values;
  if (spec.add_greedy_policies) {
    std::vector<StationaryPolicy> extra = greedy_rules(*a1.plan);
    auto more = greedy_rules(*a2.plan);
    extra.insert(extra.end(), more.begin(), more.end());
    for (const auto& pi : extra) {
      for (int s = 0; s < S; ++s) covered(s, pi[static_cast<std::size_t>(s)]) = true;
      for (const TabularMDP* m : {&m1, &m2}) {
        auto v = stationary_values(*m, pi);
        for (int h = 0; h < m->horizon(); ++h) greedy_values.push_back(std::move(v[static_cast<std::size_t>(h)]));
      }
    }
    for (const auto& v : greedy_values) value_class.push_back(&v);
  }

  const Matrix diff_T = m1.transitions() - m2.transitions();
  const Matrix diff_R = m1.rewards() - m2.rewards();
  double worst = 0.0;
  for (const Vector* v : value_class) {
    const Vector cont = diff_T * (*v);
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        if (!covered(s, a)) continue;
        const double gap =
            std::abs(diff_R(s, a) + cont(static_cast<Eigen::Index>(s) * A + a));
        worst = std::max(worst, gap);
      }
    }
  }
  return worst * worst;
}

void check_piv_spec(const TabularMDP& m, const DistortionSpec& spec) {
  if (spec.kind != DistortionKind::PiV) throw InvalidInput("d_pi_v: spec kind must be PiV");
  if (spec.policy_class.empty()) throw InvalidInput("d_pi_v: policy class is empty");
  for (const auto& pi : spec.policy_class) check_policy(pi, m.num_states(), m.num_actions());
}

void check_phi_spec(const TabularMDP& m, const DistortionSpec& spec) {
  if (spec.kind != DistortionKind::Phi) throw InvalidInput("d_phi: spec kind must be Phi");
  if (spec.abstractions.empty()) throw InvalidInput("d_phi: abstraction class is empty");
  if (spec.num_abstract_states < 1) throw InvalidInput("d_phi: Z must be positive");
  for (const auto& phi : spec.abstractions) {
    check_abstraction(phi, m.num_states(), spec.num_abstract_states);
  }
}

}  // namespace

std::vector<StationaryPolicy> all_deterministic_policies(int num_states, int num_actions) {
  double count = std::pow(static_cast<double>(num_actions), num_states);
  if (count > 1e7) throw CapacityError("policy enumeration too large", static_cast<std::size_t>(1e7));
  std::vector<StationaryPolicy> out;
  StationaryPolicy current(static_cast<std::size_t>(num_states), 0);
  while (true) {
    out.push_back(current);
    int pos = num_states - 1;
    while (pos >= 0 && current[static_cast<std::size_t>(pos)] == num_actions - 1) {
      current[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++current[static_cast<std::size_t>(pos)];
  }
  return out;
}

DistortionSpec default_piv_spec(int num_states, int num_actions, std::uint64_t seed, int cap) {
  DistortionSpec spec;
  spec.kind = DistortionKind::PiV;
  const double count = std::pow(static_cast<double>(num_actions), num_states);
  if (count <= cap) {
    spec.policy_class = all_deterministic_policies(num_states, num_actions);
    return spec;
  }
  Rng rng(seed);
  std::uniform_int_distribution<int> action(0, num_actions - 1);
  for (int k = 0; k < cap; ++k) {
    StationaryPolicy pi(static_cast<std::size_t>(num_states));
    for (auto& a : pi) a = action(rng);
    spec.policy_class.push_back(std::move(pi));
  }
  spec.add_greedy_policies = true;
  return spec;
}

double d_qstar(const ValueTable& q1, const ValueTable& q2) {
  if (q1.horizon() != q2.horizon()) throw InvalidInput("d_qstar: horizon mismatch");
  double worst = 0.0;
  for (std::size_t h = 0; h < q1.q.size(); ++h) {
    if (q1.q[h].rows() != q2.q[h].rows() || q1.q[h].cols() != q2.q[h].cols()) {
      throw InvalidInput("d_qstar: shape mismatch");
    }
    worst = std::max(worst, (q1.q[h] - q2.q[h]).cwiseAbs().maxCoeff());
  }
  return worst * worst;
}

double d_qstar(const TabularMDP& m1, const TabularMDP& m2) {
  if (!m1.same_shape(m2)) throw InvalidInput("d_qstar: MDP shapes differ");
  return d_qstar(plan_backward_induction(m1).values, plan_backward_induction(m2).values);
}

double d_pi_v(const TabularMDP& m1, const TabularMDP& m2, const DistortionSpec& spec) {
  if (!m1.same_shape(m2)) throw InvalidInput("d_pi_v: MDP shapes differ");
  check_piv_spec(m1, spec);
  PlanningCache cache;
  const PiVAtom a1 = make_piv_atom(m1, spec, cache);
  const PiVAtom a2 = make_piv_atom(m2, spec, cache);
  return piv_pair(m1, a1, m2, a2, spec);
}

double abstraction_gap(const ValueTable& ground, const ValueTable& abstract_values,
                       const Abstraction& phi) {
  if (ground.horizon() != abstract_values.horizon()) {
    throw InvalidInput("abstraction_gap: horizon mismatch");
  }
  double worst = 0.0;
  for (std::size_t h = 0; h < ground.q.size(); ++h) {
    const Matrix& qg = ground.q[h];
    const Matrix& qa = abstract_values.q[h];
    if (qg.cols() != qa.cols() || static_cast<Eigen::Index>(phi.size()) != qg.rows()) {
      throw InvalidInput("abstraction_gap: shape mismatch");
    }
    for (Eigen::Index s = 0; s < qg.rows(); ++s) {
      const Eigen::Index z = phi[static_cast<std::size_t>(s)];
      for (Eigen::Index a = 0; a < qg.cols(); ++a) {
        worst = std::max(worst, std::abs(qg(s, a) - qa(z, a)));
      }
    }
  }
  return worst * worst;
}

double d_phi(const TabularMDP& m, const AbstractMDP& m_abs, const DistortionSpec& spec) {
  check_phi_spec(m, spec);
  if (m_abs.num_states() != spec.num_abstract_states) {
    throw InvalidInput("d_phi: abstract MDP has " + std::to_string(m_abs.num_states()) +
                       " states, expected Z = " + std::to_string(spec.num_abstract_states));
  }
  if (m_abs.num_actions() != m.num_actions() || m_abs.horizon() != m.horizon()) {
    throw InvalidInput("d_phi: action count or horizon mismatch");
  }
  const auto ground = plan_backward_induction(m);
  const auto abstract_plan = plan_backward_induction(m_abs);
  double worst = 0.0;
  for (const auto& phi : spec.abstractions) {
    worst = std::max(worst, abstraction_gap(ground.values, abstract_plan.values, phi));
  }
  return worst;
}

AbstractMDP abstract_mdp(const TabularMDP& m, const Abstraction& phi, int num_abstract_states) {
  const int S = m.num_states();
  const int A = m.num_actions();
  const int Z = num_abstract_states;
  if (Z < 1) throw InvalidInput("abstract_mdp: Z must be positive");
  check_abstraction(phi, S, Z);
  std::vector<int> block_size(static_cast<std::size_t>(Z), 0);
  for (int z : phi) ++block_size[static_cast<std::size_t>(z)];

  Matrix rewards = Matrix::Zero(Z, A);
  Matrix transitions = Matrix::Zero(static_cast<Eigen::Index>(Z) * A, Z);
  Vector initial = Vector::Zero(Z);
  for (int s = 0; s < S; ++s) {
    const int z = phi[static_cast<std::size_t>(s)];
    const double w = 1.0 / block_size[static_cast<std::size_t>(z)];
    initial(z) += m.initial_distribution()(s);
    for (int a = 0; a < A; ++a) {
      rewards(z, a) += w * m.reward(s, a);
      const Eigen::Index row = static_cast<Eigen::Index>(z) * A + a;
      for (int sp = 0; sp < S; ++sp) {
        transitions(row, phi[static_cast<std::size_t>(sp)]) += w * m.transition_row(s, a)(sp);
      }
    }
  }
  for (int z = 0; z < Z; ++z) {
    if (block_size[static_cast<std::size_t>(z)] > 0) continue;
    for (int a = 0; a < A; ++a) transitions(static_cast<Eigen::Index>(z) * A + a, z) = 1.0;
  }
  for (Eigen::Index row = 0; row < transitions.rows(); ++row) {
    transitions.row(row) /= transitions.row(row).sum();
  }
  rewards = rewards.cwiseMax(0.0).cwiseMin(1.0);
  initial /= initial.sum();
  return AbstractMDP(Z, A, m.horizon(), std::move(rewards), std::move(transitions),
                     std::move(initial));
}

NonstationaryPolicy compose_policy(const NonstationaryPolicy& abstract_policy,
                                   const Abstraction& phi) {
  std::vector<Matrix> steps;
  const auto S = static_cast<Eigen::Index>(phi.size());
  for (int h = 0; h < abstract_policy.horizon(); ++h) {
    const Matrix& rule = abstract_policy.step(h);
    Matrix ground(S, rule.cols());
    for (Eigen::Index s = 0; s < S; ++s) {
      const int z = phi[static_cast<std::size_t>(s)];
      if (z < 0 || z >= rule.rows()) throw InvalidInput("compose_policy: abstract index out of range");
      ground.row(s) = rule.row(z);
    }
    steps.push_back(std::move(ground));
  }
  return NonstationaryPolicy(std::move(steps));
}

std::vector<Abstraction> default_abstractions(int num_states, int num_abstract_states, int count,
                                              std::uint64_t seed) {
  if (num_abstract_states < 1 || num_states < 1 || count < 1) {
    throw InvalidInput("default_abstractions: sizes must be positive");
  }
  std::vector<Abstraction> out;
  Abstraction modulo(static_cast<std::size_t>(num_states));
  for (int s = 0; s < num_states; ++s) modulo[static_cast<std::size_t>(s)] = s % num_abstract_states;
  out.push_back(std::move(modulo));
  Rng rng(seed);
  std::uniform_int_distribution<int> label(0, num_abstract_states - 1);
  for (int k = 1; k < count; ++k) {
    std::vector<int> order(static_cast<std::size_t>(num_states));
    std::iota(order.begin(), order.end(), 0);
    for (int i = num_states - 1; i > 0; --i) {
      std::uniform_int_distribution<int> pick(0, i);
      std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(pick(rng))]);
    }
    Abstraction phi(static_cast<std::size_t>(num_states));
    for (int i = 0; i < num_states; ++i) {
      phi[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] =
          i < num_abstract_states ? i : label(rng);
    }
    out.push_back(std::move(phi));
  }
  return out;
}

std::shared_ptr<const PlanResult> PlanningCache::get(const TabularMDP& mdp) {
  const auto key = mdp.content_hash();
  {
    std::lock_guard lock(mutex_);
    if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  }
  auto plan = std::make_shared<const PlanResult>(plan_backward_induction(mdp));
  std::lock_guard lock(mutex_);
  return entries_.emplace(key, std::move(plan)).first->second;
}

std::size_t PlanningCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

Matrix distortion_matrix(std::span<const TabularMDP> source_atoms,
                         std::span<const TabularMDP> output_atoms, const DistortionSpec& spec,
                         PlanningCache* cache) {
  if (source_atoms.empty() || output_atoms.empty()) {
    throw InvalidInput("distortion_matrix: atom lists must be nonempty");
  }
  PlanningCache local;
  PlanningCache& plans = cache != nullptr ? *cache : local;
  const auto rows = static_cast<Eigen::Index>(source_atoms.size());
  const auto cols = static_cast<Eigen::Index>(output_atoms.size());
  Matrix values(rows, cols);

  switch (spec.kind) {
    case DistortionKind::QStar: {
      std::vector<std::shared_ptr<const PlanResult>> src, out;
      for (const auto& m : source_atoms) src.push_back(plans.get(m));
      for (const auto& m : output_atoms) {
        if (!m.same_shape(source_atoms.front())) throw InvalidInput("d_qstar: MDP shapes differ");
        out.push_back(plans.get(m));
      }
      for (Eigen::Index i = 0; i < rows; ++i) {
        if (!source_atoms[static_cast<std::size_t>(i)].same_shape(source_atoms.front())) {
          throw InvalidInput("d_qstar: MDP shapes differ");
        }
        for (Eigen::Index j = 0; j < cols; ++j) {
          values(i, j) = d_qstar(src[static_cast<std::size_t>(i)]->values,
                                 out[static_cast<std::size_t>(j)]->values);
        }
      }
      break;
    }
    case DistortionKind::PiV: {
      check_piv_spec(source_atoms.front(), spec);
      std::vector<PiVAtom> src, out;
      for (const auto& m : source_atoms) src.push_back(make_piv_atom(m, spec, plans));
      for (const auto& m : output_atoms) out.push_back(make_piv_atom(m, spec, plans));
      for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
          const auto& mi = source_atoms[static_cast<std::size_t>(i)];
          const auto& mj = output_atoms[static_cast<std::size_t>(j)];
          if (!mi.same_shape(mj)) throw InvalidInput("d_pi_v: MDP shapes differ");
          values(i, j) = piv_pair(mi, src[static_cast<std::size_t>(i)], mj,
                                  out[static_cast<std::size_t>(j)], spec);
        }
      }
      break;
    }
    case DistortionKind::Phi: {
      check_phi_spec(source_atoms.front(), spec);
      std::vector<std::shared_ptr<const PlanResult>> src, out;
      for (const auto& m : source_atoms) src.push_back(plans.get(m));
      for (const auto& m : output_atoms) {
        if (m.num_states() != spec.num_abstract_states) {
          throw InvalidInput("d_phi: abstract MDP has " + std::to_string(m.num_states()) +
                             " states, expected Z = " +
                             std::to_string(spec.num_abstract_states));
        }
        out.push_back(plans.get(m));
      }
      for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
          double worst = 0.0;
          for (const auto& phi : spec.abstractions) {
            worst = std::max(worst, abstraction_gap(src[static_cast<std::size_t>(i)]->values,
                                                    out[static_cast<std::size_t>(j)]->values, phi));
          }
          values(i, j) = worst;
        }
      }
      break;
    }
  }
  return values;
}

}  // namespace ratebound
