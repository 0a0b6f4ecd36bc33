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

#ifndef RMDP_TESTS_FIXTURES_H_
#define RMDP_TESTS_FIXTURES_H_

#include <cstdint>
#include <random>
#include <vector>

#include "rmdp/layered_mdp.h"

namespace fixtures {

using rmdp::LayeredMdp;
using rmdp::Row;

// Single-step MDP with the given rewards for one state.
inline LayeredMdp OneStep(std::vector<double> rewards) {
  const int a = static_cast<int>(rewards.size());
  return LayeredMdp(a, {1}, {}, {{std::move(rewards)}});
}

// Width-one chain of the given depth; action 0 pays 1, action 1 pays 0.
inline LayeredMdp Chain(int depth) {
  std::vector<int> widths(depth, 1);
  std::vector<std::vector<std::vector<Row>>> t(depth - 1, {{{1.0}, {1.0}}});
  std::vector<std::vector<std::vector<double>>> r(depth, {{1.0, 0.0}});
  return LayeredMdp(2, widths, t, r);
}

// Deterministic two-state-wide chain: action a at any state moves to state a
// of the next layer. Rewards favour state 1 at the last layer.
inline LayeredMdp DeterministicToy() {
  std::vector<std::vector<std::vector<Row>>> t = {
      {{{1.0, 0.0}, {0.0, 1.0}}},
      {{{1.0, 0.0}, {0.0, 1.0}}, {{1.0, 0.0}, {0.0, 1.0}}}};
  std::vector<std::vector<std::vector<double>>> r = {
      {{0.2, 0.0}}, {{0.1, 0.3}, {0.0, 0.6}}, {{0.0, 0.2}, {1.0, 0.5}}};
  return LayeredMdp(2, {1, 2, 2}, t, r);
}

inline double Uniform(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

// Random distribution of width n whose entries are multiples of 1/scale.
inline std::vector<int> LatticeDistribution(std::mt19937_64& rng, int n,
                                            int scale, double zero_prob = 0.0) {
  std::vector<double> w(n);
  double total = 0.0;
  for (double& x : w) {
    x = Uniform(rng) < zero_prob ? 0.0 : Uniform(rng);
    total += x;
  }
  if (total == 0.0) {
    w[0] = 1.0;
    total = 1.0;
  }
  std::vector<int> q(n);
  int used = 0;
  for (int i = 0; i < n; ++i) {
    q[i] = static_cast<int>(w[i] / total * scale);
    used += q[i];
  }
  int k = 0;
  while (w[k] == 0.0) ++k;
  q[k] += scale - used;
  return q;
}

inline Row ToRow(const std::vector<int>& q, int scale) {
  Row r(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    r[i] = static_cast<double>(q[i]) / scale;
  }
  return r;
}

}  // namespace fixtures

#endif  // RMDP_TESTS_FIXTURES_H_
