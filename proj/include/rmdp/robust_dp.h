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

#ifndef RMDP_ROBUST_DP_H_
#define RMDP_ROBUST_DP_H_

#include "rmdp/estimation.h"
#include "rmdp/layered_mdp.h"
#include "rmdp/uncertainty.h"

namespace rmdp {

// Nash equilibrium of the agent-vs-adversary game on a layered MDP.
struct NashSolution {
  DeterministicPolicy policy;
  PerturbationAssignment adversary;
  ValueTable values;
};

// Robust backward induction for pair-wise sets. At each depth the adversary
// row is the worst-case inner minimum against the next layer's values, then
// Q = r + (P + sigma) . V and the agent takes the lowest-index argmax.
//
// Throws UnsupportedSetError for homogeneous sets and InfeasibleSetError when
// some U_sa(P) is empty.
NashSolution SolvePwcNe(const LayeredMdp& mdp, const UncertaintySet& set);

// Worst-case value of a fixed policy under a pair-wise set. Q holds the
// robust action values for every action.
ValueTable RobustEvaluate(const LayeredMdp& mdp, const UncertaintySet& set,
                          const DeterministicPolicy& policy);

// Robust sub-optimality of `policy`: max_pi V~pi(s0) - V~policy(s0).
double ErrOfPolicy(const LayeredMdp& mdp, const UncertaintySet& set,
                   const DeterministicPolicy& policy);

// Largest Bellman residual of `solution` in the game on (mdp, set), checking
// both the agent's max and the adversary rows it recorded.
double BellmanResidual(const LayeredMdp& mdp, const NashSolution& solution);

// Plug-in solve: estimate with `budget.n` samples per pair, then solve with
// the set re-centred at the empirical transitions.
NashSolution SolveFromGenerative(const GenerativeModel& model,
                                 const UncertaintySet& set,
                                 const SampleBudget& budget);

}  // namespace rmdp

#endif  // RMDP_ROBUST_DP_H_
