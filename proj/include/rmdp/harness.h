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

#ifndef RMDP_HARNESS_H_
#define RMDP_HARNESS_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rmdp/json_io.h"
#include "rmdp/layered_mdp.h"
#include "rmdp/uncertainty.h"

namespace rmdp {

// Two-layer toy instance. Depth 1 holds s1..s4 (indices 0..3) with rewards
// 0.5, 0, 0.49, 0.49 for both actions; a0 moves s0 to s1 and a1 moves s0 to
// s3, each with probability one. The nominal optimum is 0.5 via a0.
LayeredMdp SimpleCaseMdp();

// Relative box letting the adversary move up to u of mass s1 -> s2 under a0
// and s3 -> s4 under a1. The robust choice at s0 flips to a1 for u > 0.02.
UncertaintySet SimpleCaseSet(double u);

// The test-time perturbation with P(s2|s0,a0) = P(s4|s0,a1) = u.
PerturbationAssignment SimpleCaseWorstPerturbation(double u);

// Same layout and rewards with overlapping rows (a0 -> [0.9, 0, 0.1, 0],
// a1 -> [0.1, 0, 0.9, 0]) so that shared perturbations stay feasible.
LayeredMdp HpSimpleCaseMdp();

// Shared candidates {[-u, u, 0, 0], [0, 0, -u, u]}.
UncertaintySet HpSimpleCaseSet(double u);

// Stateless seed derivation for grid cells and trials.
std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t a,
                         std::uint64_t b = 0);

// Random layered MDP. Every transition entry is at least `floor`.
LayeredMdp RandomMdp(std::uint64_t seed, const std::vector<int>& widths,
                     int num_actions, double floor);

// Up to `max_vectors` candidates per pair, each t (q - P) for a random
// distribution q and t in [0, scale]; always valid for the base rows.
UncertaintySet RandomFixedSet(const LayeredMdp& mdp, std::uint64_t seed,
                              int max_vectors, double scale);

struct ExperimentCell {
  std::string method;
  double u = 0.0;
  std::uint64_t seed = 0;
  std::string policy;
  double err_worst = 0.0;
  double mean_return_random = 0.0;
  long long samples = 0;
  long long wall_ms = 0;
  bool operator==(const ExperimentCell&) const = default;
};

struct ExperimentReport {
  std::vector<ExperimentCell> cells;
  std::vector<std::string> warnings;
  bool operator==(const ExperimentReport&) const = default;
};

struct SimpleCaseOptions {
  int eval_draws = 10000;  // random perturbations per evaluation
  bool timing = false;     // wall_ms stays 0 unless set
};

// Compact "d0/d1/..." rendering, one digit per state.
std::string PolicyString(const DeterministicPolicy& policy);

// Mean exact return of `policy` on the simple case when P(s2|s0,a0) and
// P(s4|s0,a1) are drawn uniformly from [0, u).
double SimpleCaseRandomReturn(const DeterministicPolicy& policy, double u,
                              int draws, std::uint64_t seed);

// OPT, RPS, RQ-learning and RSARSA on the simple case for each (u, seed)
// under one interaction budget.
ExperimentReport RunSimpleCase(const std::vector<double>& u_list,
                               long long budget,
                               const std::vector<std::uint64_t>& seeds,
                               const SimpleCaseOptions& options = {});

struct PacConfig {
  int theorem = 2;  // 1 general, 2 pair-wise (fixed set), 3 TV ball
  double epsilon = 0.5;
  double delta = 0.1;
  int trials = 200;
  std::uint64_t seed = 0;
  std::vector<int> widths = {1, 2, 2};
  int num_actions = 2;
  double tv_radius = -1.0;  // negative selects eps / (16 H^2)
};

struct PacTrial {
  DeterministicPolicy policy;
  double err = 0.0;
  bool success = false;
  bool good_event = false;
};

struct PacReport {
  PacConfig config;
  long long samples_per_pair = 0;
  double delta_prime = 0.0;
  std::vector<PacTrial> trials;
  int successes = 0;
  int good_events = 0;
  double frequency = 0.0;
  double wilson_low = 0.0;
  double wilson_high = 0.0;
};

// The ground-truth instance of one trial: a random MDP with a random
// fixed-perturbation set (theorems 1 and 2) or a TV ball (theorem 3).
struct PacInstance {
  LayeredMdp truth;
  UncertaintySet set;
};
PacInstance MakePacInstance(const PacConfig& config, int trial);

// 95% Wilson score interval.
std::pair<double, double> WilsonInterval(int successes, int trials);

// Samples each random instance at the theorem's budget, solves, and scores
// Err on the true model against epsilon.
PacReport RunPacSweep(const PacConfig& config);

std::string ReportToCsv(const ExperimentReport& report);
Json ReportToJson(const ExperimentReport& report);
ExperimentReport ReportFromJson(const Json& j);
// Err-vs-u line chart, one line per method (mean over seeds).
std::string ReportToSvg(const ExperimentReport& report);

std::string PacToCsv(const PacReport& report);
Json PacToJson(const PacReport& report);

// Writes report.csv, report.json and (optionally) err_vs_u.svg into `dir`.
void EmitReport(const ExperimentReport& report, const std::string& dir,
                bool svg);
void EmitPacReport(const PacReport& report, const std::string& dir);

// Shortest decimal text that parses back to the same double.
std::string FormatDouble(double x);

}  // namespace rmdp

#endif  // RMDP_HARNESS_H_
