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


#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "rmdp/cli.h"
#include "rmdp/error.h"
#include "rmdp/estimation.h"
#include "rmdp/extensive_game.h"
#include "rmdp/harness.h"
#include "rmdp/json_io.h"
#include "rmdp/robust_dp.h"

namespace py = pybind11;

namespace rmdp {
namespace {

std::string Budget(int theorem, double eps, double delta, double lambda,
                   double u, int horizon, int d, int s, int a) {
  SampleBudget b;
  Json j;
  switch (theorem) {
    case 1:
      b = BudgetGeneral(eps, delta, lambda, horizon, d, s, a);
      break;
    case 2:
      b = BudgetPwc(eps, delta, lambda, horizon, d, s, a);
      break;
    case 3:
      b = BudgetTvdc(eps, delta, u, horizon, d, s, a);
      j["branch"] = TvdcSmallRadius(eps, u, horizon) ? "small_u" : "large_u";
      break;
    default:
      throw ParameterError("theorem must be 1, 2 or 3");
  }
  j["theorem"] = theorem;
  j["epsilon"] = b.epsilon;
  j["delta"] = b.delta;
  j["n"] = b.n;
  j["delta_prime"] = b.delta_prime;
  return j.dump();
}

std::string Solve(const std::string& mdp, const std::string& set_text) {
  const MdpSpec spec = MdpSpecFromJson(ParseInlineOrFile(mdp));
  if (!spec.set && set_text.empty()) {
    throw ConfigError("no uncertainty set given");
  }
  const UncertaintySet set = set_text.empty()
                                 ? *spec.set
                                 : SetFromJson(ParseInlineOrFile(set_text));
  const NashSolution solution = SolvePwcNe(spec.mdp, set);
  Json j;
  j["policy"] = PolicyToJson(solution.policy);
  j["adversary"] = PerturbationToJson(solution.adversary);
  j["robust_value"] = solution.values.root();
  j["bellman_residual"] = BellmanResidual(spec.mdp, solution);
  j["v"] = solution.values.v;
  return j.dump();
}

std::string Cfr(double u, int iterations) {
  if (iterations < 1) throw ParameterError("iterations must be positive");
  const GameTree game = BuildHpGame(HpSimpleCaseMdp(), HpSimpleCaseSet(u));
  const CfrResult result = CfrSolve(game, iterations, 0);
  Json j;
  j["value"] = result.value;
  j["exploitability"] = result.exploitability;
  Json strategy = Json::object();
  for (std::size_t i = 0; i < game.infosets().size(); ++i) {
    strategy[game.infoset(i).key] = result.average.probs[i];
  }
  j["strategy"] = strategy;
  return j.dump();
}

std::string SimpleCase(const std::vector<double>& u_list, long long budget,
                       const std::vector<std::uint64_t>& seeds,
                       int eval_draws) {
  SimpleCaseOptions options;
  options.eval_draws = eval_draws;
  return ReportToJson(RunSimpleCase(u_list, budget, seeds, options)).dump();
}

std::string PacSweep(int theorem, double eps, double delta, int trials,
                     std::uint64_t seed, double u) {
  PacConfig config;
  config.theorem = theorem;
  config.epsilon = eps;
  config.delta = delta;
  config.trials = trials;
  config.seed = seed;
  config.tv_radius = u;
  return PacToJson(RunPacSweep(config)).dump();
}

py::tuple RunCliArgs(const std::vector<std::string>& args) {
  std::vector<std::string> storage{"rmdp"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& s : storage) argv.push_back(s.data());
  std::ostringstream out, err;
  const int code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace
}  // namespace rmdp

PYBIND11_MODULE(_rmdp, m) {
  m.doc() = "Robust layered MDP solvers";
  py::register_exception<rmdp::Error>(m, "Error", PyExc_ValueError);
  m.def("budget", &rmdp::Budget, py::arg("theorem"), py::arg("eps"),
        py::arg("delta"), py::arg("lam") = 0.0, py::arg("u") = 0.0,
        py::arg("horizon") = 2, py::arg("d") = 4, py::arg("s") = 5,
        py::arg("a") = 2);
  m.def("solve", &rmdp::Solve, py::arg("mdp"), py::arg("set") = "");
  m.def("cfr_simple_case", &rmdp::Cfr, py::arg("u") = 0.05,
        py::arg("iterations") = 1000);
  m.def("simple_case", &rmdp::SimpleCase, py::arg("u_list"),
        py::arg("budget") = 2000, py::arg("seeds") = std::vector<std::uint64_t>{0},
        py::arg("eval_draws") = 10000);
  m.def("pac_sweep", &rmdp::PacSweep, py::arg("theorem") = 2,
        py::arg("eps") = 0.5, py::arg("delta") = 0.1, py::arg("trials") = 200,
        py::arg("seed") = 0, py::arg("u") = -1.0);
  m.def("run_cli", &rmdp::RunCliArgs, py::arg("args"));
}
