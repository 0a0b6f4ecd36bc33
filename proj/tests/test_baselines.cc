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

#include "doctest.h"
#include "fixtures.h"
#include "rmdp/baselines.h"
#include "rmdp/error.h"
#include "rmdp/harness.h"
#include "rmdp/robust_dp.h"

using namespace rmdp;

TEST_SUITE("baselines") {

TEST_CASE("opt baseline") {
  GenerativeModel model(SimpleCaseMdp(), 0);
  const DeterministicPolicy p = OptBaseline(model, 2000);
  CHECK(p.at(0, 0) == 0);
  CHECK(ErrOfPolicy(SimpleCaseMdp(), SimpleCaseSet(0.5), p) ==
        doctest::Approx(0.24).epsilon(1e-12));
  GenerativeModel toy(fixtures::DeterministicToy(), 1);
  CHECK(OptBaseline(toy, 1) == SolveOptimal(fixtures::DeterministicToy()).policy);
}

TEST_CASE("zero radius learners recover the nominal optimum") {
  const LayeredMdp toy = fixtures::DeterministicToy();
  const DeterministicPolicy best = SolveOptimal(toy).policy;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    OnlineLearnerConfig config;
    config.budget = 30000;
    config.seed = seed;
    config.exploration = 0.2;
    GenerativeModel m1(toy, seed);
    CHECK(RobustQLearning(m1, UncertaintySet::TvBall(0.0), config).policy == best);
    GenerativeModel m2(toy, seed);
    CHECK(RobustSarsa(m2, UncertaintySet::TvBall(0.0), config).policy == best);
  }
  const LayeredMdp chain = fixtures::Chain(2);
  GenerativeModel m3(chain, 0);
  OnlineLearnerConfig config;
  config.budget = 2000;
  CHECK(RobustQLearning(m3, UncertaintySet::TvBall(0.0), config).policy ==
        DeterministicPolicy::Constant(chain, 0));
}

TEST_CASE("online learners fail to be robust on the simple case") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    OnlineLearnerConfig config;
    config.seed = seed;
    GenerativeModel m1(SimpleCaseMdp(), seed);
    const OnlineLearnerResult rq = RobustQLearning(m1, SimpleCaseSet(0.5), config);
    GenerativeModel m2(SimpleCaseMdp(), seed);
    const OnlineLearnerResult rs = RobustSarsa(m2, SimpleCaseSet(0.5), config);
    for (const OnlineLearnerResult* r : {&rq, &rs}) {
      CHECK(r->policy.at(0, 0) == 0);
      CHECK(ErrOfPolicy(SimpleCaseMdp(), SimpleCaseSet(0.5), r->policy) > 0.0);
      CHECK(r->steps == config.budget);
      // s2 and s4 are never reached under the true dynamics.
      for (int a = 0; a < 2; ++a) {
        CHECK(r->visits[1][1][a] == 0);
        CHECK(r->visits[1][3][a] == 0);
      }
    }
    CHECK(m1.queries() == static_cast<std::uint64_t>(config.budget));
  }
}

TEST_CASE("frozen learner regressions") {
  OnlineLearnerConfig config;
  config.seed = 7;
  GenerativeModel m1(SimpleCaseMdp(), 7);
  const OnlineLearnerResult rq = RobustQLearning(m1, SimpleCaseSet(0.5), config);
  CHECK(PolicyString(rq.policy) == "0/0000");
  CHECK(ErrOfPolicy(SimpleCaseMdp(), SimpleCaseSet(0.5), rq.policy) ==
        doctest::Approx(0.24).epsilon(1e-12));
  GenerativeModel m2(SimpleCaseMdp(), 7);
  const OnlineLearnerResult rs = RobustSarsa(m2, SimpleCaseSet(0.5), config);
  CHECK(PolicyString(rs.policy) == "0/0000");
  CHECK(rq.visits[0][0][0] + rq.visits[0][0][1] == 10000);
}

TEST_CASE("budget is respected exactly") {
  OnlineLearnerConfig config;
  config.budget = 1001;
  GenerativeModel m(RandomMdp(3, {1, 3, 3}, 2, 0.0), 1);
  const OnlineLearnerResult r = RobustSarsa(m, UncertaintySet::TvBall(0.1), config);
  CHECK(r.steps == 1001);
  CHECK(m.queries() == 1001);
}

TEST_CASE("learner configuration validation") {
  GenerativeModel m(SimpleCaseMdp(), 0);
  OnlineLearnerConfig config;
  config.budget = 0;
  CHECK_THROWS_AS(RobustQLearning(m, SimpleCaseSet(0.1), config), ParameterError);
  config.budget = 10;
  config.exploration = 1.5;
  CHECK_THROWS_AS(RobustSarsa(m, SimpleCaseSet(0.1), config), ParameterError);
  config.exploration = 0.1;
  CHECK_THROWS_AS(RobustQLearning(m, HpSimpleCaseSet(0.1), config),
                  UnsupportedSetError);
}

}  // TEST_SUITE
