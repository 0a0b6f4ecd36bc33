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

#ifndef RMDP_ESTIMATION_H_
#define RMDP_ESTIMATION_H_

#include <atomic>
#include <cstdint>
#include <memory>
#include <vector>

#include "rmdp/layered_mdp.h"

namespace rmdp {

// Next-state index used for transitions out of the last layer.
inline constexpr int kTerminalState = -1;

struct Transition {
  int next_state = kTerminalState;
  double reward = 0.0;
};

// Uniform double in [0, 1) from a stateless hash of (seed, keys...).
double CounterUniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                      std::uint64_t c, std::uint64_t d);

// Sampling oracle over a ground-truth MDP. Sample t of pair (h, s, a) is a
// pure function of (seed, h, s, a, t), so streams are reproducible
// regardless of query order or threading.
class GenerativeModel {
 public:
  GenerativeModel(LayeredMdp truth, std::uint64_t seed);

  const LayeredMdp& truth() const { return truth_; }
  std::uint64_t seed() const { return seed_; }

  // The t-th sample of the pair.
  Transition Sample(int depth, int state, int action, std::uint64_t t) const;

  // Draws the next unused sample of the pair. Thread-safe.
  Transition Query(int depth, int state, int action);

  // Total Query() calls so far.
  std::uint64_t queries() const;

 private:
  std::size_t PairIndex(int depth, int state, int action) const;

  LayeredMdp truth_;
  std::uint64_t seed_;
  std::vector<std::size_t> offsets_;
  std::unique_ptr<std::atomic<std::uint64_t>[]> counters_;
  std::atomic<std::uint64_t> total_{0};
};

// Empirical MDP built from samples 0..n-1 of every pair: rows are count / n.
LayeredMdp EstimateEmpirical(const GenerativeModel& model, long long n);

struct SampleBudget {
  double epsilon = 0.0;
  double delta = 0.0;
  long long n = 1;  // samples per state-action pair
  double delta_prime = 0.0;
};

// sqrt(2 D ln(2/delta') / N): the l1 concentration radius of one row.
double AlphaBound(double n, double d, double delta_prime);

// H sqrt(2 ln(2/delta') / N) + H ln(2/delta') / (3N).
double BetaBound(double n, double horizon, double delta_prime);

// delta / (4 S A).
double DeltaPrime(double delta, int num_states, int num_actions);

// Raw right-hand sides with log_term = ln(2/delta') = ln(8SA/delta).
double GeneralBound(double eps, double lambda, int horizon, int d,
                    double log_term);
double PwcBound(double eps, double lambda, int horizon, int d,
                double log_term);
double TvdcBound(double eps, double u, int horizon, int d, double log_term);

// True when the TV radius is small enough for the fixed-perturbation-like
// budget: u <= eps / (16 H^2).
bool TvdcSmallRadius(double eps, double u, int horizon);

// Smallest integer N meeting the general-constraint requirement
// 8 (1+lambda)^2 H^4 D ln(2/delta') / eps^2.
SampleBudget BudgetGeneral(double eps, double delta, double lambda,
                           int horizon, int d, int num_states,
                           int num_actions);

// Pair-wise constraints: 8 H^4 ln(8SA/delta) / eps^2 * (2 + lambda sqrt D)^2
// for lambda > 0, and the fixed-perturbation requirement
// 8 H^4 ln(8SA/delta) / eps^2 for lambda == 0. N >= ln(2/delta')/18 always.
SampleBudget BudgetPwc(double eps, double delta, double lambda, int horizon,
                       int d, int num_states, int num_actions);

// TV-ball constraints, branch chosen by TvdcSmallRadius().
SampleBudget BudgetTvdc(double eps, double delta, double u, int horizon,
                        int d, int num_states, int num_actions);

// True iff every row of `empirical` is within AlphaBound(N) of the truth in l1.
bool CheckGoodEvent(const LayeredMdp& truth, const LayeredMdp& empirical,
                    const SampleBudget& budget);

// Largest row-wise l1 deviation between two MDPs of the same shape.
double MaxRowDeviation(const LayeredMdp& truth, const LayeredMdp& empirical);

}  // namespace rmdp

#endif  // RMDP_ESTIMATION_H_
