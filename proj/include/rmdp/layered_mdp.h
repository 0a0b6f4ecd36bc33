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

#ifndef RMDP_LAYERED_MDP_H_
#define RMDP_LAYERED_MDP_H_

#include <vector>

namespace rmdp {

// Validation tolerance for probabilities and row sums.
inline constexpr double kProbTol = 1e-9;

using Row = std::vector<double>;

// A finite-horizon tabular MDP whose states are partitioned by depth.
//
// Depths are 0-based: depth 0 holds the single initial state and depth
// horizon()-1 holds the last decision layer. States are addressed by
// (depth, index), so the layers are disjoint by construction. Pairs at the
// last layer move to an implicit terminal state with probability one and
// carry no explicit transition row.
class LayeredMdp {
 public:
  // `transitions[h][s][a]` is the distribution over depth h+1 for every
  // h < horizon-1. `rewards[h][s][a]` must lie in [0, 1].
  LayeredMdp(int num_actions, std::vector<int> widths,
             std::vector<std::vector<std::vector<Row>>> transitions,
             std::vector<std::vector<std::vector<double>>> rewards);

  int horizon() const { return static_cast<int>(widths_.size()); }
  int num_actions() const { return num_actions_; }
  int width(int depth) const { return widths_.at(depth); }
  const std::vector<int>& widths() const { return widths_; }

  // S (= G): total number of non-terminal states.
  int num_states() const;
  // D: the widest layer.
  int max_width() const;

  // True when pairs at `depth` have an explicit transition row.
  bool has_rows(int depth) const { return depth + 1 < horizon(); }

  const Row& transition(int depth, int state, int action) const {
    return transitions_.at(depth).at(state).at(action);
  }
  double reward(int depth, int state, int action) const {
    return rewards_.at(depth).at(state).at(action);
  }

  const std::vector<std::vector<std::vector<Row>>>& transitions() const {
    return transitions_;
  }
  const std::vector<std::vector<std::vector<double>>>& rewards() const {
    return rewards_;
  }

  // Same layout and rewards with replaced transition rows (validated).
  LayeredMdp WithTransitions(
      std::vector<std::vector<std::vector<Row>>> transitions) const;

  bool operator==(const LayeredMdp&) const = default;

 private:
  void Validate() const;

  int num_actions_;
  std::vector<int> widths_;
  std::vector<std::vector<std::vector<Row>>> transitions_;
  std::vector<std::vector<std::vector<double>>> rewards_;
};

// One action for every non-terminal state, indexed [depth][state].
struct DeterministicPolicy {
  std::vector<std::vector<int>> actions;

  int at(int depth, int state) const { return actions.at(depth).at(state); }
  bool operator==(const DeterministicPolicy&) const = default;

  // The policy choosing `action` everywhere.
  static DeterministicPolicy Constant(const LayeredMdp& mdp, int action = 0);
};

// Throws ConfigError unless `policy` assigns a valid action to every state.
void CheckPolicy(const LayeredMdp& mdp, const DeterministicPolicy& policy);

// V indexed [depth][state] and Q indexed [depth][state][action]. The terminal
// state has value zero and is not stored.
struct ValueTable {
  std::vector<std::vector<double>> v;
  std::vector<std::vector<std::vector<double>>> q;

  double root() const { return v.at(0).at(0); }
};

// Additive perturbation of every transition row, same shape as
// LayeredMdp::transitions(). Each row sums to zero.
struct PerturbationAssignment {
  std::vector<std::vector<std::vector<Row>>> rows;

  const Row& at(int depth, int state, int action) const {
    return rows.at(depth).at(state).at(action);
  }
  bool operator==(const PerturbationAssignment&) const = default;

  static PerturbationAssignment Zero(const LayeredMdp& mdp);
};

// Throws ConfigError when `sigma` does not match the row layout of `mdp`.
void CheckPerturbationShape(const LayeredMdp& mdp,
                            const PerturbationAssignment& sigma);

// Returns the MDP with transitions P + sigma. Throws InvalidPerturbationError
// when a perturbed row leaves the simplex.
LayeredMdp ApplyPerturbation(const LayeredMdp& mdp,
                             const PerturbationAssignment& sigma);

// Exact backward induction for a fixed policy.
ValueTable EvaluatePolicy(const LayeredMdp& mdp,
                          const DeterministicPolicy& policy);

struct OptimalSolution {
  DeterministicPolicy policy;
  ValueTable values;
};

// Nominal optimal policy; argmax ties go to the lowest action index.
OptimalSolution SolveOptimal(const LayeredMdp& mdp);

// Visitation probability xi(s, a) of each pair under `policy` in the MDP
// perturbed by `sigma`, indexed [depth][state][action]. Every depth sums to 1.
using ReachTable = std::vector<std::vector<std::vector<double>>>;
ReachTable ReachProbabilities(const LayeredMdp& mdp,
                              const DeterministicPolicy& policy,
                              const PerturbationAssignment& sigma);

// Lowest index attaining the maximum.
int ArgMax(const std::vector<double>& values);

double Dot(const Row& p, const std::vector<double>& v);

}  // namespace rmdp

#endif  // RMDP_LAYERED_MDP_H_
