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

#include "rmdp/robust_dp.h"

#include <algorithm>
#include <cmath>

#include "rmdp/error.h"

namespace rmdp {
namespace {

void RequirePairWise(const UncertaintySet& set) {
  if (!set.is_pair_wise()) {
    throw UnsupportedSetError(
        "pair-wise solver needs a FixedDiscrete, TvBall or Box set");
  }
}

// Shared backward pass. A null `policy` maximises; otherwise it is followed.
NashSolution BackwardInduction(const LayeredMdp& mdp,
                               const UncertaintySet& set,
                               const DeterministicPolicy* policy) {
  RequirePairWise(set);
  const int horizon = mdp.horizon();
  NashSolution out;
  out.adversary = PerturbationAssignment::Zero(mdp);
  out.values.v.resize(horizon);
  out.values.q.resize(horizon);
  out.policy.actions.resize(horizon);
  for (int h = horizon - 1; h >= 0; --h) {
    out.values.v[h].resize(mdp.width(h));
    out.values.q[h].resize(mdp.width(h));
    out.policy.actions[h].resize(mdp.width(h));
    for (int s = 0; s < mdp.width(h); ++s) {
      auto& q = out.values.q[h][s];
      q.resize(mdp.num_actions());
      for (int a = 0; a < mdp.num_actions(); ++a) {
        q[a] = mdp.reward(h, s, a);
        if (!mdp.has_rows(h)) continue;
        const Row& row = mdp.transition(h, s, a);
        InnerMin inner =
            WorstCaseInnerMin(set.ForPair(h, s, a, row), row, out.values.v[h + 1]);
        q[a] += inner.value;
        out.adversary.rows[h][s][a] = std::move(inner.sigma);
      }
      const int chosen = policy ? policy->at(h, s) : ArgMax(q);
      out.policy.actions[h][s] = chosen;
      out.values.v[h][s] = q[chosen];
    }
  }
  return out;
}

}  // namespace

NashSolution SolvePwcNe(const LayeredMdp& mdp, const UncertaintySet& set) {
  return BackwardInduction(mdp, set, nullptr);
}

ValueTable RobustEvaluate(const LayeredMdp& mdp, const UncertaintySet& set,
                          const DeterministicPolicy& policy) {
  CheckPolicy(mdp, policy);
  return BackwardInduction(mdp, set, &policy).values;
}

double ErrOfPolicy(const LayeredMdp& mdp, const UncertaintySet& set,
                   const DeterministicPolicy& policy) {
  const NashSolution best = SolvePwcNe(mdp, set);
  const double optimal = RobustEvaluate(mdp, set, best.policy).root();
  return optimal - RobustEvaluate(mdp, set, policy).root();
}

double BellmanResidual(const LayeredMdp& mdp, const NashSolution& solution) {
  const LayeredMdp perturbed = ApplyPerturbation(mdp, solution.adversary);
  const auto& v = solution.values.v;
  double worst = 0.0;
  for (int h = 0; h < mdp.horizon(); ++h) {
    for (int s = 0; s < mdp.width(h); ++s) {
      double best = -1e300;
      for (int a = 0; a < mdp.num_actions(); ++a) {
        double q = mdp.reward(h, s, a);
        if (mdp.has_rows(h)) q += Dot(perturbed.transition(h, s, a), v[h + 1]);
        worst = std::max(worst, std::abs(q - solution.values.q[h][s][a]));
        best = std::max(best, q);
      }
      worst = std::max(worst, std::abs(best - v[h][s]));
    }
  }
  return worst;
}

NashSolution SolveFromGenerative(const GenerativeModel& model,
                                 const UncertaintySet& set,
                                 const SampleBudget& budget) {
  return SolvePwcNe(EstimateEmpirical(model, budget.n), set);
}

}  // namespace rmdp
