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

#include "rmdp/harness.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <random>
#include <sstream>
#include <utility>

#include "rmdp/baselines.h"
#include "rmdp/error.h"
#include "rmdp/estimation.h"
#include "rmdp/robust_dp.h"

namespace rmdp {
namespace {

double Uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Row RandomDistribution(std::mt19937_64& rng, int n) {
  Row row(n);
  double total = 0.0;
  for (double& x : row) {
    x = -std::log(1.0 - Uniform(rng));
    total += x;
  }
  for (double& x : row) x /= total;
  return row;
}

const char* const kMethods[] = {"OPT", "RPS", "RQ-learning", "RSARSA"};

}  // namespace

LayeredMdp SimpleCaseMdp() {
  std::vector<std::vector<std::vector<Row>>> transitions = {
      {{{1.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 1.0, 0.0}}}};
  std::vector<std::vector<std::vector<double>>> rewards = {
      {{0.0, 0.0}},
      {{0.5, 0.5}, {0.0, 0.0}, {0.49, 0.49}, {0.49, 0.49}}};
  return LayeredMdp(2, {1, 4}, std::move(transitions), std::move(rewards));
}

UncertaintySet SimpleCaseSet(double u) {
  std::map<PairKey, BoxBounds> bounds;
  bounds[{0, 0, 0}] = {{-u, 0.0, 0.0, 0.0}, {0.0, u, 0.0, 0.0}};
  bounds[{0, 0, 1}] = {{0.0, 0.0, -u, 0.0}, {0.0, 0.0, 0.0, u}};
  return UncertaintySet::Box(BoxAnchor::kRelative, std::move(bounds), 1.0);
}

PerturbationAssignment SimpleCaseWorstPerturbation(double u) {
  PerturbationAssignment sigma = PerturbationAssignment::Zero(SimpleCaseMdp());
  sigma.rows[0][0][0] = {-u, u, 0.0, 0.0};
  sigma.rows[0][0][1] = {0.0, 0.0, -u, u};
  return sigma;
}

LayeredMdp HpSimpleCaseMdp() {
  const LayeredMdp base = SimpleCaseMdp();
  return base.WithTransitions(
      {{{{0.9, 0.0, 0.1, 0.0}, {0.1, 0.0, 0.9, 0.0}}}});
}

UncertaintySet HpSimpleCaseSet(double u) {
  return UncertaintySet::Homogeneous({{-u, u, 0.0, 0.0}, {0.0, 0.0, -u, u}});
}

std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t a,
                         std::uint64_t b) {
  const double u = CounterUniform(base, a, b, 0x5eed, 0);
  return static_cast<std::uint64_t>(u * 0x1.0p53);
}

LayeredMdp RandomMdp(std::uint64_t seed, const std::vector<int>& widths,
                     int num_actions, double floor) {
  std::mt19937_64 rng(seed);
  const int horizon = static_cast<int>(widths.size());
  std::vector<std::vector<std::vector<Row>>> transitions(horizon - 1);
  std::vector<std::vector<std::vector<double>>> rewards(horizon);
  for (int h = 0; h < horizon; ++h) {
    rewards[h].resize(widths[h]);
    if (h + 1 < horizon) transitions[h].resize(widths[h]);
    for (int s = 0; s < widths[h]; ++s) {
      for (int a = 0; a < num_actions; ++a) {
        rewards[h][s].push_back(Uniform(rng));
        if (h + 1 == horizon) continue;
        const int n = widths[h + 1];
        Row row = RandomDistribution(rng, n);
        for (double& x : row) x = floor + (1.0 - floor * n) * x;
        transitions[h][s].push_back(std::move(row));
      }
    }
  }
  return LayeredMdp(num_actions, widths, std::move(transitions),
                    std::move(rewards));
}

UncertaintySet RandomFixedSet(const LayeredMdp& mdp, std::uint64_t seed,
                              int max_vectors, double scale) {
  std::mt19937_64 rng(seed);
  std::map<PairKey, std::vector<Row>> candidates;
  for (int h = 0; mdp.has_rows(h); ++h) {
    for (int s = 0; s < mdp.width(h); ++s) {
      for (int a = 0; a < mdp.num_actions(); ++a) {
        const Row& p = mdp.transition(h, s, a);
        const int count = 1 + static_cast<int>(rng() % max_vectors);
        std::vector<Row> rows;
        for (int k = 0; k < count; ++k) {
          const Row q = RandomDistribution(rng, static_cast<int>(p.size()));
          const double t = scale * Uniform(rng);
          Row delta(p.size());
          double sum = 0.0;
          for (std::size_t i = 0; i < p.size(); ++i) {
            delta[i] = t * (q[i] - p[i]);
            sum += delta[i];
          }
          delta.back() -= sum;
          rows.push_back(std::move(delta));
        }
        candidates[{h, s, a}] = std::move(rows);
      }
    }
  }
  return UncertaintySet::FixedDiscrete(std::move(candidates));
}

std::string FormatDouble(double x) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), x);
  return std::string(buffer, end);
}

std::string PolicyString(const DeterministicPolicy& policy) {
  std::string out;
  for (std::size_t h = 0; h < policy.actions.size(); ++h) {
    if (h > 0) out += '/';
    for (int a : policy.actions[h]) out += std::to_string(a);
  }
  return out;
}

double SimpleCaseRandomReturn(const DeterministicPolicy& policy, double u,
                              int draws, std::uint64_t seed) {
  const LayeredMdp base = SimpleCaseMdp();
  std::mt19937_64 rng(seed);
  double total = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double x = u * Uniform(rng);
    const double y = u * Uniform(rng);
    const LayeredMdp perturbed =
        base.WithTransitions({{{{1.0 - x, x, 0.0, 0.0}, {0.0, 0.0, 1.0 - y, y}}}});
    total += EvaluatePolicy(perturbed, policy).root();
  }
  return draws > 0 ? total / draws : 0.0;
}

ExperimentReport RunSimpleCase(const std::vector<double>& u_list,
                               long long budget,
                               const std::vector<std::uint64_t>& seeds,
                               const SimpleCaseOptions& options) {
  const LayeredMdp truth = SimpleCaseMdp();
  const long long pairs =
      static_cast<long long>(truth.num_states()) * truth.num_actions();
  ExperimentReport report;
  long long per_pair = budget / pairs;
  if (per_pair < 1) {
    report.warnings.push_back(
        "budget " + std::to_string(budget) + " cannot cover all " +
        std::to_string(pairs) + " pairs; model-based methods use 1 sample each");
    per_pair = 1;
  }
  for (std::size_t ui = 0; ui < u_list.size(); ++ui) {
    const double u = u_list[ui];
    if (!(u >= 0.0 && u < 1.0)) throw ParameterError("u must lie in [0, 1)");
    const UncertaintySet set = SimpleCaseSet(u);
    for (const std::uint64_t seed : seeds) {
      const std::uint64_t cell_seed = DeriveSeed(seed, ui);
      for (int m = 0; m < 4; ++m) {
        const auto start = std::chrono::steady_clock::now();
        GenerativeModel model(truth, cell_seed);
        DeterministicPolicy policy;
        long long samples = per_pair * pairs;
        if (m == 0) {
          policy = OptBaseline(model, per_pair);
        } else if (m == 1) {
          SampleBudget b;
          b.n = per_pair;
          policy = SolveFromGenerative(model, set, b).policy;
        } else {
          OnlineLearnerConfig config;
          config.budget = budget;
          config.seed = cell_seed;
          const OnlineLearnerResult r = m == 2
                                            ? RobustQLearning(model, set, config)
                                            : RobustSarsa(model, set, config);
          policy = r.policy;
          samples = r.steps;
        }
        ExperimentCell cell;
        cell.method = kMethods[m];
        cell.u = u;
        cell.seed = seed;
        cell.policy = PolicyString(policy);
        cell.err_worst = ErrOfPolicy(truth, set, policy);
        cell.mean_return_random = SimpleCaseRandomReturn(
            policy, u, options.eval_draws, DeriveSeed(cell_seed, 0xe7a1));
        cell.samples = samples;
        if (options.timing) {
          cell.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
        }
        report.cells.push_back(std::move(cell));
      }
    }
  }
  return report;
}

std::pair<double, double> WilsonInterval(int successes, int trials) {
  if (trials <= 0) return {0.0, 1.0};
  const double z = 1.959963984540054;
  const double n = trials;
  const double p = successes / n;
  const double denom = 1.0 + z * z / n;
  const double centre = (p + z * z / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

namespace {

double PacTvRadius(const PacConfig& config) {
  const double h = static_cast<double>(config.widths.size());
  return config.tv_radius >= 0.0 ? config.tv_radius
                                 : config.epsilon / (16.0 * h * h);
}

}  // namespace

PacInstance MakePacInstance(const PacConfig& config, int trial) {
  const std::uint64_t instance_seed = DeriveSeed(config.seed, trial, 1);
  LayeredMdp truth =
      RandomMdp(instance_seed, config.widths, config.num_actions, 0.1);
  UncertaintySet set =
      config.theorem == 3
          ? UncertaintySet::TvBall(PacTvRadius(config))
          : RandomFixedSet(truth, DeriveSeed(instance_seed, 2), 3, 0.5);
  return {std::move(truth), std::move(set)};
}

PacReport RunPacSweep(const PacConfig& config) {
  if (config.trials < 1) throw ParameterError("trials must be positive");
  if (config.theorem < 1 || config.theorem > 3) {
    throw ParameterError("theorem must be 1, 2 or 3");
  }
  if (config.widths.empty()) throw ParameterError("widths must be non-empty");
  const int horizon = static_cast<int>(config.widths.size());
  int num_states = 0;
  for (int w : config.widths) num_states += w;
  const int d = *std::max_element(config.widths.begin(), config.widths.end());
  const double u = PacTvRadius(config);

  SampleBudget budget;
  switch (config.theorem) {
    case 1:
      budget = BudgetGeneral(config.epsilon, config.delta, 0.0, horizon, d,
                             num_states, config.num_actions);
      break;
    case 2:
      budget = BudgetPwc(config.epsilon, config.delta, 0.0, horizon, d,
                         num_states, config.num_actions);
      break;
    default:
      budget = BudgetTvdc(config.epsilon, config.delta, u, horizon, d,
                          num_states, config.num_actions);
      break;
  }

  PacReport report;
  report.config = config;
  report.config.tv_radius = u;
  report.samples_per_pair = budget.n;
  report.delta_prime = budget.delta_prime;
  for (int t = 0; t < config.trials; ++t) {
    const PacInstance instance = MakePacInstance(config, t);
    GenerativeModel model(instance.truth, DeriveSeed(config.seed, t, 3));
    const LayeredMdp empirical = EstimateEmpirical(model, budget.n);
    PacTrial trial;
    trial.policy = SolvePwcNe(empirical, instance.set).policy;
    trial.err = ErrOfPolicy(instance.truth, instance.set, trial.policy);
    trial.success = trial.err <= config.epsilon;
    trial.good_event = CheckGoodEvent(instance.truth, empirical, budget);
    report.successes += trial.success;
    report.good_events += trial.good_event;
    report.trials.push_back(std::move(trial));
  }
  report.frequency = static_cast<double>(report.successes) / config.trials;
  std::tie(report.wilson_low, report.wilson_high) =
      WilsonInterval(report.successes, config.trials);
  return report;
}

std::string ReportToCsv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "method,u,seed,policy,err_worst,mean_return_random,samples,wall_ms\n";
  for (const ExperimentCell& c : report.cells) {
    out << c.method << ',' << FormatDouble(c.u) << ',' << c.seed << ','
        << c.policy << ',' << FormatDouble(c.err_worst) << ','
        << FormatDouble(c.mean_return_random) << ',' << c.samples << ','
        << c.wall_ms << '\n';
  }
  return out.str();
}

Json ReportToJson(const ExperimentReport& report) {
  Json cells = Json::array();
  for (const ExperimentCell& c : report.cells) {
    Json j;
    j["method"] = c.method;
    j["u"] = c.u;
    j["seed"] = c.seed;
    j["policy"] = c.policy;
    j["err_worst"] = c.err_worst;
    j["mean_return_random"] = c.mean_return_random;
    j["samples"] = c.samples;
    j["wall_ms"] = c.wall_ms;
    cells.push_back(std::move(j));
  }
  Json out;
  out["cells"] = std::move(cells);
  out["warnings"] = report.warnings;
  return out;
}

ExperimentReport ReportFromJson(const Json& j) {
  ExperimentReport report;
  try {
    for (const Json& c : j.at("cells")) {
      ExperimentCell cell;
      cell.method = c.at("method").get<std::string>();
      cell.u = c.at("u").get<double>();
      cell.seed = c.at("seed").get<std::uint64_t>();
      cell.policy = c.at("policy").get<std::string>();
      cell.err_worst = c.at("err_worst").get<double>();
      cell.mean_return_random = c.at("mean_return_random").get<double>();
      cell.samples = c.at("samples").get<long long>();
      cell.wall_ms = c.at("wall_ms").get<long long>();
      report.cells.push_back(std::move(cell));
    }
    report.warnings = j.at("warnings").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
  return report;
}

std::string ReportToSvg(const ExperimentReport& report) {
  // Mean Err per (method, u), methods in first-seen order.
  std::vector<std::string> methods;
  std::map<std::string, std::map<double, std::pair<double, int>>> series;
  double max_err = 0.0;
  for (const ExperimentCell& c : report.cells) {
    if (series.find(c.method) == series.end()) methods.push_back(c.method);
    auto& slot = series[c.method][c.u];
    slot.first += c.err_worst;
    slot.second += 1;
  }
  std::vector<double> us;
  for (const auto& [method, points] : series) {
    for (const auto& [u, acc] : points) {
      us.push_back(u);
      max_err = std::max(max_err, acc.first / acc.second);
    }
  }
  std::sort(us.begin(), us.end());
  us.erase(std::unique(us.begin(), us.end()), us.end());
  if (max_err <= 0.0) max_err = 1.0;

  const double width = 640, height = 400, left = 60, right = 150, top = 20,
               bottom = 50;
  auto x_of = [&](double u) {
    if (us.size() < 2) return left;
    const auto it = std::find(us.begin(), us.end(), u);
    return left + (width - left - right) * (it - us.begin()) / (us.size() - 1);
  };
  auto y_of = [&](double err) {
    return top + (height - top - bottom) * (1.0 - err / max_err);
  };
  const char* const colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b"};
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\""
      << width - right << "\" y2=\"" << height - bottom
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left
      << "\" y2=\"" << height - bottom << "\" stroke=\"black\"/>\n";
  for (double u : us) {
    svg << "<text x=\"" << x_of(u) << "\" y=\"" << height - bottom + 18
        << "\" font-size=\"11\" text-anchor=\"middle\">" << FormatDouble(u)
        << "</text>\n";
  }
  svg << "<text x=\"" << (width - right + left) / 2 << "\" y=\""
      << height - 10 << "\" font-size=\"12\" text-anchor=\"middle\">u</text>\n";
  svg << "<text x=\"12\" y=\"" << top + 10
      << "\" font-size=\"12\">Err (max " << FormatDouble(max_err)
      << ")</text>\n";
  for (std::size_t m = 0; m < methods.size(); ++m) {
    const char* color = colors[m % 6];
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\" points=\"";
    for (const auto& [u, acc] : series[methods[m]]) {
      svg << x_of(u) << ',' << y_of(acc.first / acc.second) << ' ';
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << width - right + 10 << "\" y=\"" << top + 20 * (m + 1)
        << "\" font-size=\"12\" fill=\"" << color << "\">" << methods[m]
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string PacToCsv(const PacReport& report) {
  std::ostringstream out;
  out << "trial,samples_per_pair,err,success,good_event\n";
  for (std::size_t t = 0; t < report.trials.size(); ++t) {
    const PacTrial& trial = report.trials[t];
    out << t << ',' << report.samples_per_pair << ','
        << FormatDouble(trial.err) << ',' << trial.success << ','
        << trial.good_event << '\n';
  }
  return out.str();
}

Json PacToJson(const PacReport& report) {
  Json j;
  j["theorem"] = report.config.theorem;
  j["epsilon"] = report.config.epsilon;
  j["delta"] = report.config.delta;
  j["trials"] = report.config.trials;
  j["seed"] = report.config.seed;
  j["widths"] = report.config.widths;
  j["num_actions"] = report.config.num_actions;
  if (report.config.theorem == 3) j["u"] = report.config.tv_radius;
  j["samples_per_pair"] = report.samples_per_pair;
  j["delta_prime"] = report.delta_prime;
  j["successes"] = report.successes;
  j["frequency"] = report.frequency;
  j["wilson_low"] = report.wilson_low;
  j["wilson_high"] = report.wilson_high;
  j["good_events"] = report.good_events;
  Json errs = Json::array();
  for (const PacTrial& t : report.trials) errs.push_back(t.err);
  j["err"] = std::move(errs);
  return j;
}

namespace {

void EnsureDirectory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir + "'");
}

}  // namespace

void EmitReport(const ExperimentReport& report, const std::string& dir,
                bool svg) {
  EnsureDirectory(dir);
  const std::filesystem::path base(dir);
  WriteFile((base / "report.csv").string(), ReportToCsv(report));
  WriteFile((base / "report.json").string(), ReportToJson(report).dump(2) + "\n");
  if (svg) WriteFile((base / "err_vs_u.svg").string(), ReportToSvg(report));
}

void EmitPacReport(const PacReport& report, const std::string& dir) {
  EnsureDirectory(dir);
  const std::filesystem::path base(dir);
  WriteFile((base / "pac.csv").string(), PacToCsv(report));
  WriteFile((base / "pac.json").string(), PacToJson(report).dump(2) + "\n");
}

}  // namespace rmdp
