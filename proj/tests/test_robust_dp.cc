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

#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.h"
#include "oracles.h"
#include "rmdp/error.h"
#include "rmdp/estimation.h"
#include "rmdp/harness.h"
#include "rmdp/robust_dp.h"

using namespace rmdp;

TEST_SUITE("robust_dp") {

TEST_CASE("zero radius reproduces the nominal solution") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const LayeredMdp m = RandomMdp(seed, {1, 3, 2}, 3, 0.0);
    const NashSolution ne = SolvePwcNe(m, UncertaintySet::TvBall(0.0));
    const OptimalSolution opt = SolveOptimal(m);
    CHECK(ne.policy == opt.policy);
    CHECK(ne.values.v == opt.values.v);
    CHECK(ne.adversary == PerturbationAssignment::Zero(m));
    CHECK(RobustEvaluate(m, UncertaintySet::TvBall(0.0), opt.policy).v ==
          EvaluatePolicy(m, opt.policy).v);
  }
}

TEST_CASE("simple case robust choice") {
  const LayeredMdp m = SimpleCaseMdp();
  const NashSolution ne = SolvePwcNe(m, SimpleCaseSet(0.05));
  CHECK(ne.policy.at(0, 0) == 1);
  CHECK(ne.values.root() == doctest::Approx(0.49).epsilon(1e-15));
  CHECK(ne.adversary.at(0, 0, 0)[1] == doctest::Approx(0.05));
  const double v0 =
      RobustEvaluate(m, SimpleCaseSet(0.05), DeterministicPolicy::Constant(m, 0))
          .root();
  CHECK(v0 == doctest::Approx(0.475).epsilon(1e-15));
  CHECK(ErrOfPolicy(m, SimpleCaseSet(0.05), DeterministicPolicy::Constant(m, 0)) ==
        doctest::Approx(0.015).epsilon(1e-12));
  CHECK(RobustEvaluate(m, SimpleCaseSet(0.05), ne.policy).root() ==
        ne.values.root());
  CHECK(ErrOfPolicy(m, SimpleCaseSet(0.05), ne.policy) == 0.0);
}

TEST_CASE("robust value matches exhaustive maximin") {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 20; ++k) {
    const int w1 = 1 + static_cast<int>(rng() % 3);
    const int w2 = 1 + static_cast<int>(rng() % 3);
    const LayeredMdp m = RandomMdp(rng(), {1, w1, w2}, 2, 0.0);
    const UncertaintySet set = RandomFixedSet(m, rng(), 3, 0.5);
    const NashSolution ne = SolvePwcNe(m, set);
    CHECK(ne.values.root() ==
          doctest::Approx(oracle::BruteForceMaximin(m, set.fixed_candidates()))
              .epsilon(1e-12));
    CHECK(BellmanResidual(m, ne) <= 1e-9);
    CHECK(Contains(set, m, ne.adversary));
  }
}

TEST_CASE("saddle point on small instances") {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 10; ++k) {
    const LayeredMdp m = RandomMdp(rng(), {1, 2, 2}, 2, 0.0);
    const UncertaintySet set = RandomFixedSet(m, rng(), 3, 0.5);
    const NashSolution ne = SolvePwcNe(m, set);
    const LayeredMdp against = ApplyPerturbation(m, ne.adversary);
    const double value = ne.values.root();
    // Agent cannot improve against the adversary's choice.
    for (const auto& p : oracle::AllPolicies(m)) {
      CHECK(oracle::ForwardValue(against, p) <= value + 1e-9);
    }
    // Adversary cannot lower the value against the agent's choice.
    CHECK(RobustEvaluate(m, set, ne.policy).root() >= value - 1e-9);
    CHECK(oracle::ForwardValue(against, ne.policy) ==
          doctest::Approx(value).epsilon(1e-12));
  }
}

TEST_CASE("robust value is below nominal and non-increasing in u") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const LayeredMdp m = RandomMdp(seed, {1, 3, 3}, 2, 0.0);
    const double nominal = SolveOptimal(m).values.root();
    double prev = nominal;
    for (double u = 0.0; u <= 1.0; u += 0.1) {
      const NashSolution ne = SolvePwcNe(m, UncertaintySet::TvBall(u));
      CHECK(ne.values.root() <= prev + 1e-12);
      CHECK(BellmanResidual(m, ne) <= 1e-9);
      prev = ne.values.root();
      for (const auto& layer : ne.adversary.rows.back()) {
        for (const Row& r : layer) {
          for (double x : r) CHECK(std::isfinite(x));
        }
      }
    }
  }
}

TEST_CASE("err is non-negative and zero for the solver policy") {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 10; ++k) {
    const LayeredMdp m = RandomMdp(rng(), {1, 3, 3}, 2, 0.0);
    const UncertaintySet set = UncertaintySet::TvBall(0.2);
    const NashSolution ne = SolvePwcNe(m, set);
    CHECK(ErrOfPolicy(m, set, ne.policy) == 0.0);
    for (int a = 0; a < 2; ++a) {
      CHECK(ErrOfPolicy(m, set, DeterministicPolicy::Constant(m, a)) >= 0.0);
    }
  }
}

TEST_CASE("shifting rewards at one depth does not change the policy") {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 10; ++k) {
    const LayeredMdp m = RandomMdp(rng(), {1, 3, 3}, 2, 0.0);
    auto rewards = m.rewards();
    for (auto& s : rewards[2]) {
      for (double& r : s) r = r * 0.5;
    }
    const LayeredMdp base(2, m.widths(), m.transitions(), rewards);
    for (auto& s : rewards[2]) {
      for (double& r : s) r += 0.4;
    }
    const LayeredMdp shifted(2, m.widths(), m.transitions(), rewards);
    const UncertaintySet set = UncertaintySet::TvBall(0.1);
    CHECK(SolvePwcNe(base, set).policy == SolvePwcNe(shifted, set).policy);
    const DeterministicPolicy p = DeterministicPolicy::Constant(m, 1);
    CHECK(ErrOfPolicy(base, set, p) ==
          doctest::Approx(ErrOfPolicy(shifted, set, p)).epsilon(1e-12));
  }
}

TEST_CASE("homogeneous sets are routed elsewhere") {
  CHECK_THROWS_AS(SolvePwcNe(HpSimpleCaseMdp(), HpSimpleCaseSet(0.05)),
                  UnsupportedSetError);
}

TEST_CASE("last-layer adversary rows are absent") {
  const LayeredMdp m = RandomMdp(4, {1, 2, 3}, 2, 0.0);
  const NashSolution ne = SolvePwcNe(m, UncertaintySet::TvBall(0.3));
  CHECK(ne.adversary.rows.size() == 2);
  CHECK(ne.values.v.size() == 3);
}

TEST_CASE("solve from generative samples") {
  SampleBudget b;
  b.n = 2000;
  GenerativeModel model(SimpleCaseMdp(), 0);
  const NashSolution ne = SolveFromGenerative(model, SimpleCaseSet(0.05), b);
  CHECK(ne.policy.at(0, 0) == 1);
  CHECK(ErrOfPolicy(SimpleCaseMdp(), SimpleCaseSet(0.05), ne.policy) == 0.0);

  b.n = 3;
  const LayeredMdp det = fixtures::DeterministicToy();
  GenerativeModel toy(det, 9);
  const UncertaintySet tv = UncertaintySet::TvBall(0.1);
  const NashSolution from_samples = SolveFromGenerative(toy, tv, b);
  const NashSolution exact = SolvePwcNe(det, tv);
  CHECK(from_samples.policy == exact.policy);
  CHECK(from_samples.values.v == exact.values.v);
}

}  // TEST_SUITE
