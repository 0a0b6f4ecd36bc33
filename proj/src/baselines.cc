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

#include "rmdp/baselines.h"

#include <algorithm>
#include <random>
#include <utility>

#include "rmdp/error.h"

namespace rmdp {

void OnlineEnv::Reset() {
  depth_ = 0;
  state_ = 0;
}

double OnlineEnv::Step(int action) {
  if (done()) throw ConfigError("episode already finished");
  const Transition t = model_.Query(depth_, state_, action);
  ++steps_;
  ++depth_;
  state_ = t.next_state == kTerminalState ? 0 : t.next_state;
  return t.reward;
}

DeterministicPolicy OptBaseline(const GenerativeModel& model, long long n) {
  return SolveOptimal(EstimateEmpirical(model, n)).policy;
}

namespace {

enum class Target { kQLearning, kSarsa };

OnlineLearnerResult RunOnline(GenerativeModel& model,
                              const UncertaintySet& set,
                              const OnlineLearnerConfig& config,
                              Target target) {
  if (!set.is_pair_wise()) {
    throw UnsupportedSetError("robust online learners need a pair-wise set");
  }
  if (config.budget < 1) throw ParameterError("budget must be at least 1");
  if (!(config.exploration >= 0.0 && config.exploration <= 1.0)) {
    throw ParameterError("exploration rate must lie in [0, 1]");
  }
  if (!(config.learning_rate >= 0.0 && config.learning_rate <= 1.0)) {
    throw ParameterError("learning rate must lie in (0, 1] or be 0");
  }
  const LayeredMdp& mdp = model.truth();
  const int horizon = mdp.horizon();
  const int num_actions = mdp.num_actions();

  std::vector<std::vector<std::vector<double>>> q(horizon);
  std::vector<std::vector<std::vector<long long>>> visits(horizon);
  std::vector<std::vector<std::vector<std::vector<long long>>>> counts(horizon);
  for (int h = 0; h < horizon; ++h) {
    q[h].assign(mdp.width(h), std::vector<double>(num_actions, config.initial_q));
    visits[h].assign(mdp.width(h), std::vector<long long>(num_actions, 0));
    if (mdp.has_rows(h)) {
      counts[h].assign(mdp.width(h),
                       std::vector<std::vector<long long>>(
                           num_actions,
                           std::vector<long long>(mdp.width(h + 1), 0)));
    }
  }

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> any_action(0, num_actions - 1);
  auto behaviour = [&](int h, int s) {
    if (coin(rng) < config.exploration) return any_action(rng);
    return ArgMax(q[h][s]);
  };
  auto behaviour_value = [&](int h, int s) {
    const auto& row = q[h][s];
    const double best = *std::max_element(row.begin(), row.end());
    double mean = 0.0;
    for (double x : row) mean += x;
    mean /= num_actions;
    return (1.0 - config.exploration) * best + config.exploration * mean;
  };

  OnlineEnv env(model);
  while (env.steps() < config.budget) {
    env.Reset();
    int action = behaviour(0, 0);
    while (!env.done() && env.steps() < config.budget) {
      const int h = env.depth();
      const int s = env.state();
      const double reward = env.Step(action);
      const long long n = visits[h][s][action]++;
      double update = reward;
      int next_action = 0;
      if (!env.done()) {
        const int next = env.state();
        next_action = behaviour(h + 1, next);
        auto& row_counts = counts[h][s][action];
        ++row_counts[next];
        long long total = 0;
        for (long long c : row_counts) total += c;
        Row empirical(row_counts.size());
        for (std::size_t i = 0; i < empirical.size(); ++i) {
          empirical[i] = static_cast<double>(row_counts[i]) / total;
        }
        std::vector<double> values(empirical.size());
        for (int x = 0; x < static_cast<int>(values.size()); ++x) {
          if (target == Target::kQLearning) {
            values[x] = *std::max_element(q[h + 1][x].begin(), q[h + 1][x].end());
          } else {
            values[x] = x == next ? q[h + 1][x][next_action]
                                  : behaviour_value(h + 1, x);
          }
        }
        try {
          update += WorstCaseInnerMin(set.ForPair(h, s, action, empirical),
                                      empirical, values)
                        .value;
        } catch (const InfeasibleSetError&) {
          // No candidate fits the running estimate yet; use it nominally.
          update += Dot(empirical, values);
        }
      }
      const double rate = config.learning_rate > 0.0
                              ? config.learning_rate
                              : 1.0 / (1.0 + static_cast<double>(n));
      q[h][s][action] += rate * (update - q[h][s][action]);
      action = next_action;
    }
  }

  OnlineLearnerResult result;
  result.steps = env.steps();
  result.visits = std::move(visits);
  result.policy.actions.resize(horizon);
  for (int h = 0; h < horizon; ++h) {
    for (int s = 0; s < mdp.width(h); ++s) {
      result.policy.actions[h].push_back(ArgMax(q[h][s]));
    }
  }
  return result;
}

}  // namespace

OnlineLearnerResult RobustQLearning(GenerativeModel& model,
                                    const UncertaintySet& set,
                                    const OnlineLearnerConfig& config) {
  return RunOnline(model, set, config, Target::kQLearning);
}

OnlineLearnerResult RobustSarsa(GenerativeModel& model,
                                const UncertaintySet& set,
                                const OnlineLearnerConfig& config) {
  return RunOnline(model, set, config, Target::kSarsa);
}

}  // namespace rmdp
