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

#include "rmdp/estimation.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "rmdp/error.h"

namespace rmdp {
namespace {

std::uint64_t Mix(std::uint64_t x) {
  // SplitMix64 finalizer.
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

int SampleIndex(const Row& row, double uniform) {
  double cumulative = 0.0;
  int last_positive = 0;
  for (int i = 0; i < static_cast<int>(row.size()); ++i) {
    if (row[i] <= 0.0) continue;
    last_positive = i;
    cumulative += row[i];
    if (uniform < cumulative) return i;
  }
  // Rounding left the cumulative sum just below 1.
  return last_positive;
}

void CheckBudgetInputs(double eps, double delta, int horizon, int d,
                       int num_states, int num_actions) {
  if (horizon < 1 || d < 1 || num_states < 1 || num_actions < 1) {
    throw ParameterError("H, D, S and A must be positive");
  }
  if (!(eps > 0.0 && eps < horizon)) {
    throw ParameterError("epsilon must lie in (0, H)");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ParameterError("delta must lie in (0, 1)");
  }
}

SampleBudget MakeBudget(double eps, double delta, double delta_prime,
                        double bound) {
  if (!std::isfinite(bound) ||
      bound >= static_cast<double>(std::numeric_limits<long long>::max())) {
    throw ParameterError("sample budget overflows");
  }
  SampleBudget budget;
  budget.epsilon = eps;
  budget.delta = delta;
  budget.delta_prime = delta_prime;
  budget.n = std::max(1LL, static_cast<long long>(std::ceil(bound)));
  return budget;
}

}  // namespace

double CounterUniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                      std::uint64_t c, std::uint64_t d) {
  std::uint64_t h = Mix(seed);
  h = Mix(h ^ a);
  h = Mix(h ^ b);
  h = Mix(h ^ c);
  h = Mix(h ^ d);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

GenerativeModel::GenerativeModel(LayeredMdp truth, std::uint64_t seed)
    : truth_(std::move(truth)), seed_(seed) {
  std::size_t total = 0;
  for (int h = 0; h < truth_.horizon(); ++h) {
    offsets_.push_back(total);
    total += static_cast<std::size_t>(truth_.width(h)) * truth_.num_actions();
  }
  counters_ = std::make_unique<std::atomic<std::uint64_t>[]>(total);
  for (std::size_t i = 0; i < total; ++i) counters_[i] = 0;
}

std::size_t GenerativeModel::PairIndex(int depth, int state,
                                       int action) const {
  if (depth < 0 || depth >= truth_.horizon() || state < 0 ||
      state >= truth_.width(depth) || action < 0 ||
      action >= truth_.num_actions()) {
    throw ConfigError("invalid state-action pair");
  }
  return offsets_[depth] +
         static_cast<std::size_t>(state) * truth_.num_actions() + action;
}

Transition GenerativeModel::Sample(int depth, int state, int action,
                                   std::uint64_t t) const {
  PairIndex(depth, state, action);
  Transition out;
  out.reward = truth_.reward(depth, state, action);
  if (!truth_.has_rows(depth)) return out;
  const double u = CounterUniform(seed_, static_cast<std::uint64_t>(depth),
                                  static_cast<std::uint64_t>(state),
                                  static_cast<std::uint64_t>(action), t);
  out.next_state = SampleIndex(truth_.transition(depth, state, action), u);
  return out;
}

Transition GenerativeModel::Query(int depth, int state, int action) {
  const std::size_t index = PairIndex(depth, state, action);
  const std::uint64_t t = counters_[index].fetch_add(1);
  total_.fetch_add(1);
  return Sample(depth, state, action, t);
}

std::uint64_t GenerativeModel::queries() const { return total_.load(); }

LayeredMdp EstimateEmpirical(const GenerativeModel& model, long long n) {
  if (n < 1) throw ParameterError("N must be at least 1");
  const LayeredMdp& truth = model.truth();
  auto rows = truth.transitions();
  auto rewards = truth.rewards();
  std::vector<long long> counts;
  for (int h = 0; h < truth.horizon(); ++h) {
    for (int s = 0; s < truth.width(h); ++s) {
      for (int a = 0; a < truth.num_actions(); ++a) {
        rewards[h][s][a] = model.Sample(h, s, a, 0).reward;
        if (!truth.has_rows(h)) continue;
        counts.assign(truth.width(h + 1), 0);
        for (long long t = 0; t < n; ++t) {
          ++counts[model.Sample(h, s, a, static_cast<std::uint64_t>(t))
                       .next_state];
        }
        Row& row = rows[h][s][a];
        for (std::size_t i = 0; i < row.size(); ++i) {
          row[i] = static_cast<double>(counts[i]) / static_cast<double>(n);
        }
      }
    }
  }
  return LayeredMdp(truth.num_actions(), truth.widths(), std::move(rows),
                    std::move(rewards));
}

double AlphaBound(double n, double d, double delta_prime) {
  return std::sqrt(2.0 * d * std::log(2.0 / delta_prime) / n);
}

double BetaBound(double n, double horizon, double delta_prime) {
  const double log_term = std::log(2.0 / delta_prime);
  return horizon * std::sqrt(2.0 * log_term / n) +
         horizon * log_term / (3.0 * n);
}

double DeltaPrime(double delta, int num_states, int num_actions) {
  return delta / (4.0 * num_states * num_actions);
}

double GeneralBound(double eps, double lambda, int horizon, int d,
                    double log_term) {
  const double h2 = static_cast<double>(horizon) * horizon;
  return 8.0 * (1.0 + lambda) * (1.0 + lambda) * h2 * h2 * d * log_term /
         (eps * eps);
}

double PwcBound(double eps, double lambda, int horizon, int d,
                double log_term) {
  const double h2 = static_cast<double>(horizon) * horizon;
  double bound = 8.0 * h2 * h2 * log_term / (eps * eps);
  if (lambda > 0.0) {
    const double factor = 2.0 + lambda * std::sqrt(static_cast<double>(d));
    bound *= factor * factor;
  }
  return std::max(bound, log_term / 18.0);
}

bool TvdcSmallRadius(double eps, double u, int horizon) {
  return u <= eps / (16.0 * horizon * horizon);
}

double TvdcBound(double eps, double u, int horizon, int d, double log_term) {
  const double h2 = static_cast<double>(horizon) * horizon;
  if (TvdcSmallRadius(eps, u, horizon)) {
    return 128.0 * h2 * h2 * log_term / (eps * eps);
  }
  const double factor = std::sqrt(2.0) + 6.0 * std::sqrt(u * d);
  const double estimation = 16.0 * h2 * h2 * log_term / (eps * eps) * factor *
                            factor;
  const double higher_order = 49.0 * d * log_term / (27.0 * u);
  return std::max(estimation, higher_order);
}

SampleBudget BudgetGeneral(double eps, double delta, double lambda,
                           int horizon, int d, int num_states,
                           int num_actions) {
  CheckBudgetInputs(eps, delta, horizon, d, num_states, num_actions);
  if (!(lambda >= 0.0)) throw ParameterError("lambda must be non-negative");
  const double dp = DeltaPrime(delta, num_states, num_actions);
  return MakeBudget(eps, delta, dp,
                    GeneralBound(eps, lambda, horizon, d, std::log(2.0 / dp)));
}

SampleBudget BudgetPwc(double eps, double delta, double lambda, int horizon,
                       int d, int num_states, int num_actions) {
  CheckBudgetInputs(eps, delta, horizon, d, num_states, num_actions);
  if (!(lambda >= 0.0)) throw ParameterError("lambda must be non-negative");
  const double dp = DeltaPrime(delta, num_states, num_actions);
  return MakeBudget(eps, delta, dp,
                    PwcBound(eps, lambda, horizon, d, std::log(2.0 / dp)));
}

SampleBudget BudgetTvdc(double eps, double delta, double u, int horizon,
                        int d, int num_states, int num_actions) {
  CheckBudgetInputs(eps, delta, horizon, d, num_states, num_actions);
  if (!(u >= 0.0 && u <= 1.0)) throw ParameterError("u must lie in [0, 1]");
  const double dp = DeltaPrime(delta, num_states, num_actions);
  return MakeBudget(eps, delta, dp,
                    TvdcBound(eps, u, horizon, d, std::log(2.0 / dp)));
}

double MaxRowDeviation(const LayeredMdp& truth, const LayeredMdp& empirical) {
  if (truth.widths() != empirical.widths() ||
      truth.num_actions() != empirical.num_actions()) {
    throw ConfigError("MDP shapes differ");
  }
  double worst = 0.0;
  for (int h = 0; truth.has_rows(h); ++h) {
    for (int s = 0; s < truth.width(h); ++s) {
      for (int a = 0; a < truth.num_actions(); ++a) {
        const Row& p = truth.transition(h, s, a);
        const Row& q = empirical.transition(h, s, a);
        double l1 = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) l1 += std::abs(p[i] - q[i]);
        worst = std::max(worst, l1);
      }
    }
  }
  return worst;
}

bool CheckGoodEvent(const LayeredMdp& truth, const LayeredMdp& empirical,
                    const SampleBudget& budget) {
  const double radius = AlphaBound(static_cast<double>(budget.n),
                                   truth.max_width(), budget.delta_prime);
  return MaxRowDeviation(truth, empirical) <= radius;
}

}  // namespace rmdp
