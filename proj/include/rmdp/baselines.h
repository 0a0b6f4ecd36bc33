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

#ifndef RMDP_BASELINES_H_
#define RMDP_BASELINES_H_

#include <cstdint>
#include <vector>

#include "rmdp/estimation.h"
#include "rmdp/layered_mdp.h"
#include "rmdp/uncertainty.h"

namespace rmdp {

struct OnlineLearnerConfig {
  long long budget = 20000;  // environment steps
  double exploration = 0.1;  // epsilon-greedy rate
  // Zero selects the visit-count schedule 1 / (1 + visits).
  double learning_rate = 0.0;
  double initial_q = 0.0;
  std::uint64_t seed = 0;
};

// Trajectory-only access to a generative model: episodes start at the
// initial state and the learner cannot jump to arbitrary pairs.
class OnlineEnv {
 public:
  explicit OnlineEnv(GenerativeModel& model) : model_(model) {}

  void Reset();
  int depth() const { return depth_; }
  int state() const { return state_; }
  bool done() const { return depth_ >= model_.truth().horizon(); }

  // Takes `action` in the current state. Returns the reward.
  double Step(int action);

  long long steps() const { return steps_; }

 private:
  GenerativeModel& model_;
  int depth_ = 0;
  int state_ = 0;
  long long steps_ = 0;
};

struct OnlineLearnerResult {
  DeterministicPolicy policy;
  long long steps = 0;
  // Times each pair was played, indexed [depth][state][action].
  std::vector<std::vector<std::vector<long long>>> visits;
};

// Nominal optimal policy of the empirical model from n samples per pair.
DeterministicPolicy OptBaseline(const GenerativeModel& model, long long n);

// Q-learning whose target replaces the expectation by the worst case over
// U_sa(P~), with P~ the running empirical row of the pair:
//   r + min_{p in U_sa(P~)} p . max_a' Q(., a').
// Throws UnsupportedSetError for non-pair-wise sets.
OnlineLearnerResult RobustQLearning(GenerativeModel& model,
                                    const UncertaintySet& set,
                                    const OnlineLearnerConfig& config);

// On-policy variant: successor values follow the epsilon-greedy behaviour
// policy, and the observed successor uses the action actually taken next.
OnlineLearnerResult RobustSarsa(GenerativeModel& model,
                                const UncertaintySet& set,
                                const OnlineLearnerConfig& config);

}  // namespace rmdp

#endif  // RMDP_BASELINES_H_
