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

#include "rmdp/cli.h"

#include <cstdlib>
#include <numeric>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rmdp/baselines.h"
#include "rmdp/error.h"
#include "rmdp/estimation.h"
#include "rmdp/extensive_game.h"
#include "rmdp/harness.h"
#include "rmdp/json_io.h"
#include "rmdp/robust_dp.h"

namespace rmdp {
namespace {

std::string DefaultOutDir() {
  const char* env = std::getenv("RMDP_OUT_DIR");
  return env != nullptr && *env != '\0' ? env : "rmdp_out";
}

Json BudgetJson(const SampleBudget& b) {
  Json j;
  j["epsilon"] = b.epsilon;
  j["delta"] = b.delta;
  j["n"] = b.n;
  j["delta_prime"] = b.delta_prime;
  return j;
}

Json ValueTableJson(const ValueTable& values) {
  Json j;
  j["v"] = values.v;
  j["q"] = values.q;
  return j;
}

Json ProfileJson(const GameTree& game, const MixedStrategyProfile& profile) {
  Json j = Json::object();
  for (std::size_t i = 0; i < game.infosets().size(); ++i) {
    j[game.infoset(i).key] = profile.probs[i];
  }
  return j;
}

struct BudgetArgs {
  int theorem = 2;
  double eps = 0.1;
  double delta = 0.05;
  double lambda = 0.0;
  double u = 0.0;
  int horizon = 2;
  int d = 4;
  int s = 5;
  int a = 2;
};

struct SolveArgs {
  std::string mdp;
  std::string set;
  long long from_samples = 0;
  std::uint64_t seed = 0;
};

struct CfrArgs {
  std::string game = "simple-case-hp";
  int iters = 1000;
  std::uint64_t seed = 0;
  double u = 0.05;
};

struct BaselineArgs {
  std::string method = "opt";
  long long budget = 20000;
  std::uint64_t seed = 0;
  double u = 0.5;
};

struct SimpleCaseArgs {
  std::vector<double> u_list = {0.001, 0.005, 0.01, 0.05, 0.1, 0.5};
  long long budget = 20000;
  std::uint64_t seed = 0;
  int seeds = 1;
  int eval_draws = 10000;
  std::string out;
  bool timing = false;
  bool svg = false;
};

struct PacArgs {
  int theorem = 2;
  double eps = 0.5;
  double delta = 0.1;
  int trials = 200;
  std::uint64_t seed = 0;
  double u = -1.0;
  std::string out;
};

Json RunBudget(const BudgetArgs& a) {
  Json j;
  j["theorem"] = a.theorem;
  SampleBudget b;
  switch (a.theorem) {
    case 1:
      b = BudgetGeneral(a.eps, a.delta, a.lambda, a.horizon, a.d, a.s, a.a);
      break;
    case 2:
      b = BudgetPwc(a.eps, a.delta, a.lambda, a.horizon, a.d, a.s, a.a);
      break;
    case 3:
      b = BudgetTvdc(a.eps, a.delta, a.u, a.horizon, a.d, a.s, a.a);
      j["branch"] = TvdcSmallRadius(a.eps, a.u, a.horizon) ? "small_u"
                                                           : "large_u";
      break;
    default:
      throw ParameterError("theorem must be 1, 2 or 3");
  }
  j.update(BudgetJson(b));
  return j;
}

Json RunSolve(const SolveArgs& a) {
  MdpSpec spec = LoadMdpSpec(a.mdp);
  std::optional<UncertaintySet> set = spec.set;
  if (!a.set.empty()) set = SetFromJson(ParseInlineOrFile(a.set));
  if (!set) throw ConfigError("no uncertainty set given");
  NashSolution solution;
  const LayeredMdp* solved = &spec.mdp;
  LayeredMdp empirical = spec.mdp;
  if (a.from_samples > 0) {
    GenerativeModel model(spec.mdp, a.seed);
    empirical = EstimateEmpirical(model, a.from_samples);
    solved = &empirical;
  }
  solution = SolvePwcNe(*solved, *set);
  Json j;
  j["policy"] = PolicyToJson(solution.policy);
  j["adversary"] = PerturbationToJson(solution.adversary);
  j["robust_value"] = solution.values.root();
  j["bellman_residual"] = BellmanResidual(*solved, solution);
  j["values"] = ValueTableJson(solution.values);
  if (a.from_samples > 0) {
    j["samples_per_pair"] = a.from_samples;
    j["err_true"] = ErrOfPolicy(spec.mdp, *set, solution.policy);
  }
  return j;
}

Json RunCfr(const CfrArgs& a) {
  if (a.iters < 1) throw ParameterError("iters must be positive");
  GameTree game;
  if (a.game == "simple-case-hp") {
    game = BuildHpGame(HpSimpleCaseMdp(), HpSimpleCaseSet(a.u));
  } else {
    MdpSpec spec = LoadMdpSpec(a.game);
    if (!spec.set) throw ConfigError("game file needs an uncertainty set");
    if (spec.observations) {
      game = BuildRpomdpGame(spec.mdp, *spec.observations, *spec.set);
    } else {
      game = BuildHpGame(spec.mdp, *spec.set);
    }
  }
  const CfrResult result = CfrSolve(game, a.iters, a.seed);
  Json j;
  j["iterations"] = a.iters;
  j["value"] = result.value;
  j["exploitability"] = result.exploitability;
  j["strategy"] = ProfileJson(game, result.average);
  j["warnings"] = game.warnings;
  return j;
}

Json RunBaseline(const BaselineArgs& a) {
  const LayeredMdp truth = SimpleCaseMdp();
  const UncertaintySet set = SimpleCaseSet(a.u);
  GenerativeModel model(truth, a.seed);
  const long long pairs =
      static_cast<long long>(truth.num_states()) * truth.num_actions();
  DeterministicPolicy policy;
  long long steps = 0;
  Json j;
  if (a.method == "opt") {
    const long long n = std::max(1LL, a.budget / pairs);
    policy = OptBaseline(model, n);
    steps = n * pairs;
  } else if (a.method == "rq" || a.method == "rsarsa") {
    OnlineLearnerConfig config;
    config.budget = a.budget;
    config.seed = a.seed;
    const OnlineLearnerResult r = a.method == "rq"
                                      ? RobustQLearning(model, set, config)
                                      : RobustSarsa(model, set, config);
    policy = r.policy;
    steps = r.steps;
    j["visits"] = r.visits;
  } else {
    throw ParameterError("unknown method '" + a.method + "'");
  }
  Json out;
  out["method"] = a.method;
  out["u"] = a.u;
  out["seed"] = a.seed;
  out["policy"] = PolicyToJson(policy);
  out["err_worst"] = ErrOfPolicy(truth, set, policy);
  out["samples"] = steps;
  if (j.contains("visits")) out["visits"] = j["visits"];
  return out;
}

Json RunSimpleCaseCommand(const SimpleCaseArgs& a) {
  if (a.seeds < 1) throw ParameterError("seeds must be positive");
  std::vector<std::uint64_t> seeds(a.seeds);
  std::iota(seeds.begin(), seeds.end(), a.seed);
  SimpleCaseOptions options;
  options.eval_draws = a.eval_draws;
  options.timing = a.timing;
  const ExperimentReport report = RunSimpleCase(a.u_list, a.budget, seeds,
                                                options);
  const std::string dir = a.out.empty() ? DefaultOutDir() : a.out;
  EmitReport(report, dir, a.svg);
  Json j;
  j["out"] = dir;
  j["cells"] = report.cells.size();
  j["warnings"] = report.warnings;
  return j;
}

Json RunPacCommand(const PacArgs& a) {
  PacConfig config;
  config.theorem = a.theorem;
  config.epsilon = a.eps;
  config.delta = a.delta;
  config.trials = a.trials;
  config.seed = a.seed;
  config.tv_radius = a.u;
  const PacReport report = RunPacSweep(config);
  const std::string dir = a.out.empty() ? DefaultOutDir() : a.out;
  EmitPacReport(report, dir);
  Json j = PacToJson(report);
  j.erase("err");
  j["out"] = dir;
  return j;
}

}  // namespace

int RunCli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust finite-horizon MDP toolkit"};
  app.require_subcommand(1);

  BudgetArgs budget;
  CLI::App* budget_cmd =
      app.add_subcommand("budget", "Per-pair sample budget for a theorem");
  budget_cmd->add_option("--theorem", budget.theorem, "1, 2 or 3")
      ->check(CLI::Range(1, 3));
  budget_cmd->add_option("--eps", budget.eps);
  budget_cmd->add_option("--delta", budget.delta);
  budget_cmd->add_option("--lambda", budget.lambda);
  budget_cmd->add_option("--u", budget.u, "TV radius (theorem 3)");
  budget_cmd->add_option("-H,--horizon", budget.horizon);
  budget_cmd->add_option("-D,--max-width", budget.d);
  budget_cmd->add_option("-S,--states", budget.s);
  budget_cmd->add_option("-A,--actions", budget.a);

  SolveArgs solve;
  CLI::App* solve_cmd =
      app.add_subcommand("solve", "Robust equilibrium of a pair-wise set");
  solve_cmd->add_option("--mdp", solve.mdp, "MDP spec file")->required();
  solve_cmd->add_option("--set", solve.set, "Inline JSON or file");
  solve_cmd->add_option("--from-samples", solve.from_samples,
                        "Solve the empirical model from N samples per pair");
  solve_cmd->add_option("--seed", solve.seed);

  CfrArgs cfr;
  CLI::App* cfr_cmd = app.add_subcommand("cfr", "CFR on an extensive game");
  cfr_cmd->add_option("--game", cfr.game,
                      "MDP spec file or 'simple-case-hp'");
  cfr_cmd->add_option("--iters", cfr.iters);
  cfr_cmd->add_option("--seed", cfr.seed);
  cfr_cmd->add_option("--u", cfr.u, "Radius for simple-case-hp");

  BaselineArgs baseline;
  CLI::App* baseline_cmd =
      app.add_subcommand("baseline", "One baseline on the simple case");
  baseline_cmd->add_option("--method", baseline.method)
      ->check(CLI::IsMember({"opt", "rq", "rsarsa"}));
  baseline_cmd->add_option("--budget", baseline.budget);
  baseline_cmd->add_option("--seed", baseline.seed);
  baseline_cmd->add_option("--u", baseline.u);

  SimpleCaseArgs simple;
  CLI::App* simple_cmd =
      app.add_subcommand("simple-case", "Four-method comparison over u");
  simple_cmd->add_option("--u-list", simple.u_list)->delimiter(',');
  simple_cmd->add_option("--budget", simple.budget);
  simple_cmd->add_option("--seed", simple.seed, "First seed");
  simple_cmd->add_option("--seeds", simple.seeds, "Number of seeds");
  simple_cmd->add_option("--eval-draws", simple.eval_draws);
  simple_cmd->add_option("--out", simple.out);
  simple_cmd->add_flag("--timing", simple.timing, "Record wall_ms");
  simple_cmd->add_flag("--svg", simple.svg, "Also write err_vs_u.svg");

  PacArgs pac;
  CLI::App* pac_cmd =
      app.add_subcommand("pac-sweep", "Success frequency at a budget");
  pac_cmd->add_option("--theorem", pac.theorem)->check(CLI::Range(1, 3));
  pac_cmd->add_option("--eps", pac.eps);
  pac_cmd->add_option("--delta", pac.delta);
  pac_cmd->add_option("--trials", pac.trials);
  pac_cmd->add_option("--seed", pac.seed);
  pac_cmd->add_option("--u", pac.u, "TV radius (theorem 3)");
  pac_cmd->add_option("--out", pac.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    Json result;
    if (*budget_cmd) {
      result = RunBudget(budget);
    } else if (*solve_cmd) {
      result = RunSolve(solve);
    } else if (*cfr_cmd) {
      result = RunCfr(cfr);
    } else if (*baseline_cmd) {
      result = RunBaseline(baseline);
    } else if (*simple_cmd) {
      result = RunSimpleCaseCommand(simple);
    } else {
      result = RunPacCommand(pac);
    }
    out << result.dump(2) << '\n';
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace rmdp
