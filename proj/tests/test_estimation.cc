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
#include <thread>
#include <vector>

#include "doctest.h"
#include "fixtures.h"
#include "rmdp/error.h"
#include "rmdp/estimation.h"
#include "rmdp/harness.h"

using namespace rmdp;

constexpr int kFrozenCoinCount = 49968;

namespace {

LayeredMdp Coin() {
  return LayeredMdp(1, {1, 2}, {{{{0.5, 0.5}}}}, {{{0.25}}, {{0.0}, {1.0}}});
}

}  // namespace

TEST_SUITE("estimation") {

TEST_CASE("point mass rows always give the same successor") {
  GenerativeModel model(SimpleCaseMdp(), 3);
  for (int t = 0; t < 100; ++t) {
    CHECK(model.Query(0, 0, 0).next_state == 0);
    CHECK(model.Query(0, 0, 1).next_state == 2);
  }
  const Transition last = model.Query(1, 2, 0);
  CHECK(last.next_state == kTerminalState);
  CHECK(last.reward == 0.49);
  CHECK(model.queries() == 201);
  CHECK_THROWS_AS(model.Query(0, 1, 0), ConfigError);
  CHECK_THROWS_AS(model.Query(0, 0, 2), ConfigError);
}

TEST_CASE("coin frequencies are concentrated and reproducible") {
  GenerativeModel a(Coin(), 0);
  GenerativeModel b(Coin(), 0);
  int first = 0;
  for (int t = 0; t < 100000; ++t) {
    const Transition x = a.Query(0, 0, 0);
    CHECK(x.reward == 0.25);
    first += x.next_state == 0;
    CHECK(b.Query(0, 0, 0).next_state == x.next_state);
  }
  CHECK(first >= 49000);
  CHECK(first <= 51000);
  CHECK(first == kFrozenCoinCount);
}

TEST_CASE("streams do not depend on query order or threads") {
  const LayeredMdp m = RandomMdp(2, {1, 3, 3}, 2, 0.0);
  GenerativeModel model(m, 42);
  std::vector<std::thread> workers;
  std::vector<std::vector<int>> seen(4);
  for (int w = 0; w < 4; ++w) {
    workers.emplace_back([&, w] {
      for (int t = 0; t < 500; ++t) seen[w].push_back(model.Query(1, w % 3, w / 3).next_state);
    });
  }
  for (auto& t : workers) t.join();
  CHECK(model.queries() == 2000);
  for (int w = 0; w < 3; ++w) {
    for (int t = 0; t < 500; ++t) {
      CHECK(seen[w][t] == model.Sample(1, w % 3, w / 3, t).next_state);
    }
  }
}

TEST_CASE("empirical model from counts") {
  GenerativeModel one(Coin(), 5);
  const LayeredMdp single = EstimateEmpirical(one, 1);
  const Row& r = single.transition(0, 0, 0);
  CHECK(((r == Row{1.0, 0.0}) || (r == Row{0.0, 1.0})));

  GenerativeModel det(SimpleCaseMdp(), 5);
  CHECK(EstimateEmpirical(det, 1) == SimpleCaseMdp());
  CHECK(EstimateEmpirical(det, 37) == SimpleCaseMdp());

  const LayeredMdp m = RandomMdp(8, {1, 4, 3}, 2, 0.0);
  GenerativeModel model(m, 1);
  const LayeredMdp e = EstimateEmpirical(model, 1000);
  for (int h = 0; h < 2; ++h) {
    for (int s = 0; s < m.width(h); ++s) {
      for (int a = 0; a < 2; ++a) {
        double sum = 0.0;
        for (double x : e.transition(h, s, a)) {
          CHECK(std::round(x * 1000) == doctest::Approx(x * 1000));
          sum += x;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
      }
    }
  }
  CHECK(e.rewards() == m.rewards());
  CHECK_THROWS_AS(EstimateEmpirical(model, 0), ParameterError);
}

TEST_CASE("simple case deviation at 2000 samples is within alpha") {
  GenerativeModel model(SimpleCaseMdp(), 0);
  const LayeredMdp e = EstimateEmpirical(model, 2000);
  const double dp = DeltaPrime(0.05, 5, 2);
  const double dev = L1Distance(e.transition(0, 0, 0), {1.0, 0.0, 0.0, 0.0});
  CHECK(dev <= AlphaBound(2000, 4, dp));
}

TEST_CASE("alpha bound") {
  const double dp = 0.001;
  const double d = 4;
  CHECK(AlphaBound(2 * d * std::log(2 / dp), d, dp) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(AlphaBound(1e4, 4, 0.001) == doctest::Approx(std::sqrt(8 * std::log(2000.0) / 1e4)));
  CHECK(AlphaBound(1e4, 4, 0.001) == doctest::Approx(0.0779).epsilon(1e-3));
  CHECK(AlphaBound(4 * 300, 3, 0.01) == doctest::Approx(AlphaBound(300, 3, 0.01) / 2));
}

TEST_CASE("beta bound") {
  CHECK(BetaBound(2, 1, 2.0 / std::exp(1.0)) == doctest::Approx(1.0 + 1.0 / 6.0).epsilon(1e-12));
  double prev = BetaBound(1, 3, 0.01);
  for (int n = 2; n < 200; ++n) {
    const double b = BetaBound(n, 3, 0.01);
    CHECK(b < prev);
    prev = b;
  }
  CHECK(BetaBound(50, 4, 0.01) == doctest::Approx(2 * BetaBound(50, 2, 0.01)));
}

TEST_CASE("frozen budget values") {
  // Frozen from a 50-digit evaluation of each formula.
  CHECK(BudgetGeneral(0.1, 0.05, 2, 2, 4, 5, 2).n == 3399672);
  CHECK(BudgetPwc(0.1, 0.05, 0, 2, 4, 5, 2).n == 94436);
  CHECK(BudgetPwc(0.1, 0.05, 2, 2, 4, 5, 2).n == 3399672);
  CHECK(BudgetTvdc(0.1, 0.05, 0.0, 2, 4, 5, 2).n == 1510966);
  CHECK(BudgetTvdc(0.1, 0.05, 0.05, 2, 4, 5, 2).n == 3171038);
  CHECK(BudgetPwc(0.1, 0.05, 0, 2, 4, 5, 2).delta_prime == doctest::Approx(0.05 / 40));
}

TEST_CASE("unit-parameter general budget") {
  // ln(2 / delta') = 1 with S = A = 1 means delta = 8 / e.
  const double delta = 8.0 / std::exp(1.0);
  CHECK_THROWS_AS(BudgetGeneral(1, delta, 0, 1, 1, 1, 1), ParameterError);
  CHECK(GeneralBound(1, 0, 1, 1, 1.0) == doctest::Approx(8.0));
}

TEST_CASE("pwc budget at lambda zero matches the fixed-set closed form") {
  for (double eps : {0.05, 0.1, 0.5, 1.0}) {
    for (double delta : {0.01, 0.05, 0.1}) {
      const int h = 3, s = 7, a = 2;
      const double closed_form =
          8.0 * std::pow(h, 4) * std::log(8.0 * s * a / delta) / (eps * eps);
      CHECK(BudgetPwc(eps, delta, 0, h, 3, s, a).n ==
            static_cast<long long>(std::ceil(closed_form)));
    }
  }
  // (2 + lambda sqrt(D))^2 = 36 for lambda = 2, D = 4.
  CHECK(PwcBound(0.1, 2, 2, 4, 1.0) == doctest::Approx(36.0 * 8 * 16 / 0.01));
}

TEST_CASE("tvdc branch selection") {
  CHECK(TvdcSmallRadius(0.1, 0.0, 2));
  CHECK_FALSE(TvdcSmallRadius(0.1, 0.01, 2));
  CHECK(TvdcSmallRadius(0.1, 0.1 / 64, 2));
  const double log_term = std::log(1600.0);
  CHECK(BudgetTvdc(0.1, 0.05, 0.0, 2, 4, 5, 2).n ==
        static_cast<long long>(std::ceil(128 * 16 * log_term / 0.01)));
  CHECK_THROWS_AS(BudgetTvdc(0.1, 0.05, 1.5, 2, 4, 5, 2), ParameterError);
}

TEST_CASE("budget parameter validation") {
  CHECK_THROWS_AS(BudgetPwc(0.0, 0.1, 0, 2, 2, 3, 2), ParameterError);
  CHECK_THROWS_AS(BudgetPwc(2.0, 0.1, 0, 2, 2, 3, 2), ParameterError);
  CHECK_THROWS_AS(BudgetPwc(0.5, 1.0, 0, 2, 2, 3, 2), ParameterError);
  CHECK_THROWS_AS(BudgetGeneral(0.5, 0.0, 0, 2, 2, 3, 2), ParameterError);
}

TEST_CASE("budgets are monotone in every parameter") {
  using Fn = SampleBudget (*)(double, double, double, int, int, int, int);
  for (Fn f : {Fn(&BudgetGeneral), Fn(&BudgetPwc)}) {
    const long long base = f(0.2, 0.05, 1.0, 2, 3, 5, 2).n;
    CHECK(f(0.3, 0.05, 1.0, 2, 3, 5, 2).n <= base);
    CHECK(f(0.2, 0.1, 1.0, 2, 3, 5, 2).n <= base);
    CHECK(f(0.2, 0.05, 1.0, 3, 3, 5, 2).n >= base);
    CHECK(f(0.2, 0.05, 1.0, 2, 4, 5, 2).n >= base);
    CHECK(f(0.2, 0.05, 1.0, 2, 3, 6, 2).n >= base);
    CHECK(f(0.2, 0.05, 1.0, 2, 3, 5, 3).n >= base);
    CHECK(f(0.2, 0.05, 1.5, 2, 3, 5, 2).n >= base);
  }
  const long long base = BudgetTvdc(0.2, 0.05, 0.1, 2, 3, 5, 2).n;
  CHECK(BudgetTvdc(0.3, 0.05, 0.1, 2, 3, 5, 2).n <= base);
  CHECK(BudgetTvdc(0.2, 0.1, 0.1, 2, 3, 5, 2).n <= base);
  CHECK(BudgetTvdc(0.2, 0.05, 0.1, 2, 4, 5, 2).n >= base);
  CHECK(BudgetTvdc(0.2, 0.05, 0.1, 2, 3, 6, 3).n >= base);
  CHECK(BudgetTvdc(0.2, 0.05, 0.2, 2, 3, 5, 2).n >= base);
}

TEST_CASE("doubling epsilon quarters the budget") {
  const long long n1 = BudgetGeneral(0.1, 0.05, 0, 2, 4, 5, 2).n;
  const long long n2 = BudgetGeneral(0.2, 0.05, 0, 2, 4, 5, 2).n;
  CHECK(std::abs(4 * n2 - n1) <= 4);
}

TEST_CASE("good event") {
  const LayeredMdp m = RandomMdp(1, {1, 3, 3}, 2, 0.0);
  SampleBudget b = BudgetGeneral(0.5, 0.1, 0, 3, 3, 7, 2);
  CHECK(CheckGoodEvent(m, m, b));
  const double alpha = AlphaBound(b.n, 3, b.delta_prime);
  auto rows = m.transitions();
  Row& r = rows[0][0][0];
  const double shift = std::min(r[0], alpha);
  r[0] -= shift;
  r[1] += shift;
  const LayeredMdp far = m.WithTransitions(rows);
  CHECK(MaxRowDeviation(m, far) == doctest::Approx(2 * shift));
  if (2 * shift > alpha) CHECK_FALSE(CheckGoodEvent(m, far, b));
  CHECK_THROWS_AS(CheckGoodEvent(m, SimpleCaseMdp(), b), ConfigError);
}

}  // TEST_SUITE
