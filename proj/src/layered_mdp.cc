// Copyright 2026 The rmdp Authors. All rights reserved.
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

#include "rmdp/layered_mdp.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>

#include "rmdp/error.h"

namespace rmdp {
namespace {

std::string PairName(int depth, int state, int action) {
  std::ostringstream out;
  out << "(depth " << depth << ", state " << state << ", action " << action
      << ")";
  return out.str();
}

// Checks that `row` is a distribution; returns an empty string when valid.
std::string RowProblem(const Row& row) {
  double sum = 0.0;
  for (double p : row) {
    if (!std::isfinite(p) || p < -kProbTol || p > 1.0 + kProbTol) {
      return "entry outside [0, 1]";
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbTol) return "row does not sum to 1";
  return {};
}

}  // namespace

LayeredMdp::LayeredMdp(int num_actions, std::vector<int> widths,
                       std::vector<std::vector<std::vector<Row>>> transitions,
                       std::vector<std::vector<std::vector<double>>> rewards)
    : num_actions_(num_actions),
      widths_(std::move(widths)),
      transitions_(std::move(transitions)),
      rewards_(std::move(rewards)) {
  Validate();
}

void LayeredMdp::Validate() const {
  if (num_actions_ < 1) throw ConfigError("num_actions must be positive");
  if (widths_.empty()) throw ConfigError("horizon must be positive");
  if (widths_[0] != 1) {
    throw ConfigError("depth 0 must hold exactly one initial state");
  }
  for (int w : widths_) {
    if (w < 1) throw ConfigError("every depth needs at least one state");
  }
  const int horizon = this->horizon();
  if (static_cast<int>(rewards_.size()) != horizon) {
    throw ConfigError("rewards must have one entry per depth");
  }
  if (static_cast<int>(transitions_.size()) != horizon - 1) {
    throw ConfigError("transitions must have horizon-1 layers");
  }
  for (int h = 0; h < horizon; ++h) {
    if (static_cast<int>(rewards_[h].size()) != widths_[h]) {
      throw ConfigError("rewards layer width mismatch at depth " +
                        std::to_string(h));
    }
    for (int s = 0; s < widths_[h]; ++s) {
      if (static_cast<int>(rewards_[h][s].size()) != num_actions_) {
        throw ConfigError("reward action count mismatch at " +
                          PairName(h, s, 0));
      }
      for (int a = 0; a < num_actions_; ++a) {
        const double r = rewards_[h][s][a];
        if (!std::isfinite(r) || r < 0.0 || r > 1.0) {
          throw ConfigError("reward outside [0, 1] at " + PairName(h, s, a));
        }
      }
    }
    if (h + 1 == horizon) continue;
    if (static_cast<int>(transitions_[h].size()) != widths_[h]) {
      throw ConfigError("transition layer width mismatch at depth " +
                        std::to_string(h));
    }
    for (int s = 0; s < widths_[h]; ++s) {
      if (static_cast<int>(transitions_[h][s].size()) != num_actions_) {
        throw ConfigError("transition action count mismatch at " +
                          PairName(h, s, 0));
      }
      for (int a = 0; a < num_actions_; ++a) {
        const Row& row = transitions_[h][s][a];
        if (static_cast<int>(row.size()) != widths_[h + 1]) {
          throw ConfigError("transition row length mismatch at " +
                            PairName(h, s, a));
        }
        if (auto problem = RowProblem(row); !problem.empty()) {
          throw ConfigError(problem + " at " + PairName(h, s, a));
        }
      }
    }
  }
}

int LayeredMdp::num_states() const {
  return std::accumulate(widths_.begin(), widths_.end(), 0);
}

int LayeredMdp::max_width() const {
  return *std::max_element(widths_.begin(), widths_.end());
}

LayeredMdp LayeredMdp::WithTransitions(
    std::vector<std::vector<std::vector<Row>>> transitions) const {
  return LayeredMdp(num_actions_, widths_, std::move(transitions), rewards_);
}

DeterministicPolicy DeterministicPolicy::Constant(const LayeredMdp& mdp,
                                                  int action) {
  DeterministicPolicy policy;
  for (int h = 0; h < mdp.horizon(); ++h) {
    policy.actions.emplace_back(mdp.width(h), action);
  }
  return policy;
}

void CheckPolicy(const LayeredMdp& mdp, const DeterministicPolicy& policy) {
  if (static_cast<int>(policy.actions.size()) != mdp.horizon()) {
    throw ConfigError("policy does not cover every depth");
  }
  for (int h = 0; h < mdp.horizon(); ++h) {
    if (static_cast<int>(policy.actions[h].size()) != mdp.width(h)) {
      throw ConfigError("policy is missing states at depth " +
                        std::to_string(h));
    }
    for (int a : policy.actions[h]) {
      if (a < 0 || a >= mdp.num_actions()) {
        throw ConfigError("policy action out of range at depth " +
                          std::to_string(h));
      }
    }
  }
}

PerturbationAssignment PerturbationAssignment::Zero(const LayeredMdp& mdp) {
  PerturbationAssignment sigma;
  sigma.rows.resize(mdp.horizon() - 1);
  for (int h = 0; h + 1 < mdp.horizon(); ++h) {
    sigma.rows[h].assign(
        mdp.width(h),
        std::vector<Row>(mdp.num_actions(), Row(mdp.width(h + 1), 0.0)));
  }
  return sigma;
}

void CheckPerturbationShape(const LayeredMdp& mdp,
                            const PerturbationAssignment& sigma) {
  if (static_cast<int>(sigma.rows.size()) != mdp.horizon() - 1) {
    throw ConfigError("perturbation depth count mismatch");
  }
  for (int h = 0; h + 1 < mdp.horizon(); ++h) {
    if (static_cast<int>(sigma.rows[h].size()) != mdp.width(h)) {
      throw ConfigError("perturbation width mismatch at depth " +
                        std::to_string(h));
    }
    for (int s = 0; s < mdp.width(h); ++s) {
      if (static_cast<int>(sigma.rows[h][s].size()) != mdp.num_actions()) {
        throw ConfigError("perturbation action count mismatch at " +
                          PairName(h, s, 0));
      }
      for (int a = 0; a < mdp.num_actions(); ++a) {
        if (static_cast<int>(sigma.rows[h][s][a].size()) != mdp.width(h + 1)) {
          throw ConfigError("perturbation row length mismatch at " +
                            PairName(h, s, a));
        }
      }
    }
  }
}

LayeredMdp ApplyPerturbation(const LayeredMdp& mdp,
                             const PerturbationAssignment& sigma) {
  CheckPerturbationShape(mdp, sigma);
  auto rows = mdp.transitions();
  for (int h = 0; h + 1 < mdp.horizon(); ++h) {
    for (int s = 0; s < mdp.width(h); ++s) {
      for (int a = 0; a < mdp.num_actions(); ++a) {
        Row& row = rows[h][s][a];
        const Row& delta = sigma.at(h, s, a);
        for (std::size_t i = 0; i < row.size(); ++i) row[i] += delta[i];
        if (auto problem = RowProblem(row); !problem.empty()) {
          throw InvalidPerturbationError("perturbed " + problem + " at " +
                                         PairName(h, s, a));
        }
      }
    }
  }
  return mdp.WithTransitions(std::move(rows));
}

int ArgMax(const std::vector<double>& values) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(values.size()); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

double Dot(const Row& p, const std::vector<double>& v) {
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) total += p[i] * v[i];
  return total;
}

ValueTable EvaluatePolicy(const LayeredMdp& mdp,
                          const DeterministicPolicy& policy) {
  CheckPolicy(mdp, policy);
  const int horizon = mdp.horizon();
  ValueTable table;
  table.v.resize(horizon);
  table.q.resize(horizon);
  for (int h = horizon - 1; h >= 0; --h) {
    table.v[h].resize(mdp.width(h));
    table.q[h].resize(mdp.width(h));
    for (int s = 0; s < mdp.width(h); ++s) {
      auto& q = table.q[h][s];
      q.resize(mdp.num_actions());
      for (int a = 0; a < mdp.num_actions(); ++a) {
        q[a] = mdp.reward(h, s, a);
        if (mdp.has_rows(h)) q[a] += Dot(mdp.transition(h, s, a), table.v[h + 1]);
      }
      table.v[h][s] = q[policy.at(h, s)];
    }
  }
  return table;
}

OptimalSolution SolveOptimal(const LayeredMdp& mdp) {
  const int horizon = mdp.horizon();
  OptimalSolution solution;
  auto& table = solution.values;
  table.v.resize(horizon);
  table.q.resize(horizon);
  solution.policy.actions.resize(horizon);
  for (int h = horizon - 1; h >= 0; --h) {
    table.v[h].resize(mdp.width(h));
    table.q[h].resize(mdp.width(h));
    solution.policy.actions[h].resize(mdp.width(h));
    for (int s = 0; s < mdp.width(h); ++s) {
      auto& q = table.q[h][s];
      q.resize(mdp.num_actions());
      for (int a = 0; a < mdp.num_actions(); ++a) {
        q[a] = mdp.reward(h, s, a);
        if (mdp.has_rows(h)) q[a] += Dot(mdp.transition(h, s, a), table.v[h + 1]);
      }
      const int best = ArgMax(q);
      solution.policy.actions[h][s] = best;
      table.v[h][s] = q[best];
    }
  }
  return solution;
}

ReachTable ReachProbabilities(const LayeredMdp& mdp,
                              const DeterministicPolicy& policy,
                              const PerturbationAssignment& sigma) {
  CheckPolicy(mdp, policy);
  const LayeredMdp perturbed = ApplyPerturbation(mdp, sigma);
  ReachTable xi(mdp.horizon());
  std::vector<double> occupancy{1.0};
  for (int h = 0; h < mdp.horizon(); ++h) {
    xi[h].assign(mdp.width(h), std::vector<double>(mdp.num_actions(), 0.0));
    std::vector<double> next(mdp.has_rows(h) ? mdp.width(h + 1) : 0, 0.0);
    for (int s = 0; s < mdp.width(h); ++s) {
      const int a = policy.at(h, s);
      xi[h][s][a] = occupancy[s];
      if (!mdp.has_rows(h) || occupancy[s] == 0.0) continue;
      const Row& row = perturbed.transition(h, s, a);
      for (std::size_t i = 0; i < row.size(); ++i) {
        next[i] += occupancy[s] * row[i];
      }
    }
    occupancy = std::move(next);
  }
  return xi;
}

}  // namespace rmdp
