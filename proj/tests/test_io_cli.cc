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

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "rmdp/cli.h"
#include "rmdp/error.h"
#include "rmdp/harness.h"
#include "rmdp/json_io.h"

using namespace rmdp;

#ifndef RMDP_DATA_DIR
#error "RMDP_DATA_DIR must point at the data directory"
#endif

namespace {

std::string Data(const std::string& name) {
  return std::string(RMDP_DATA_DIR) + "/" + name;
}

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun Run(std::vector<std::string> args) {
  args.insert(args.begin(), "rmdp");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  CliRun r;
  r.code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace

TEST_SUITE("json_io") {

TEST_CASE("simple case file matches the built-in instance") {
  const MdpSpec spec = LoadMdpSpec(Data("simple_case.json"));
  CHECK(spec.mdp == SimpleCaseMdp());
  REQUIRE(spec.set.has_value());
  CHECK(spec.set->box_bounds() == SimpleCaseSet(0.05).box_bounds());
  CHECK(spec.set->anchor() == BoxAnchor::kRelative);
  CHECK(MdpFromJson(MdpToJson(spec.mdp)) == spec.mdp);
}

TEST_CASE("set round trips") {
  std::map<PairKey, std::vector<Row>> c;
  c[{0, 0, 1}] = {{0.1, -0.1}};
  for (const UncertaintySet& s :
       {UncertaintySet::TvBall(0.25), SimpleCaseSet(0.1),
        UncertaintySet::FixedDiscrete(c), HpSimpleCaseSet(0.05)}) {
    const UncertaintySet back = SetFromJson(SetToJson(s));
    CHECK(back.kind() == s.kind());
    CHECK(back.tv_radius() == s.tv_radius());
    CHECK(back.box_bounds() == s.box_bounds());
    CHECK(back.fixed_candidates() == s.fixed_candidates());
    CHECK(back.homogeneous_vectors() == s.homogeneous_vectors());
    CHECK(back.lipschitz_constant() == s.lipschitz_constant());
  }
}

TEST_CASE("malformed input") {
  CHECK_THROWS_AS(MdpFromJson(Json::parse("{\"horizon\": 1}")), ConfigError);
  CHECK_THROWS_AS(SetFromJson(Json::parse("{\"kind\": \"kl\"}")), ConfigError);
  CHECK_THROWS_AS(SetFromJson(Json::parse("{\"kind\": \"tv_ball\"}")), ConfigError);
  CHECK_THROWS_AS(SetFromJson(Json::parse("{\"kind\": \"box\", \"anchor\": \"x\"}")),
                  ConfigError);
  CHECK_THROWS_AS(ParseInlineOrFile("{not json"), ConfigError);
  CHECK_THROWS_AS(LoadMdpSpec("/nonexistent/file.json"), IoError);
  CHECK(ParseInlineOrFile("{\"kind\": \"tv_ball\", \"u\": 0.1}")["u"] == 0.1);
}

}  // TEST_SUITE

TEST_SUITE("cli") {

TEST_CASE("budget") {
  const CliRun r = Run({"budget", "--theorem", "2", "--eps", "0.1", "--delta",
                        "0.05", "-H", "2", "-D", "4", "-S", "5", "-A", "2"});
  CHECK(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["n"] == 94436);
  CHECK(j["delta_prime"] == 0.00125);
  const Json t3 = Json::parse(Run({"budget", "--theorem", "3", "--u", "0.05"}).out);
  CHECK(t3["branch"] == "large_u");
  CHECK(t3["n"] == 3171038);
  const CliRun bad = Run({"budget", "--eps", "5"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("error:") == 0);
}

TEST_CASE("solve") {
  const CliRun r = Run({"solve", "--mdp", Data("simple_case.json")});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["policy"][0][0] == 1);
  CHECK(j["robust_value"] == 0.49);
  CHECK(j["bellman_residual"].get<double>() <= 1e-9);
  const Json tv = Json::parse(Run({"solve", "--mdp", Data("simple_case.json"),
                                   "--set", "{\"kind\":\"tv_ball\",\"u\":0.0}"})
                                  .out);
  CHECK(tv["policy"][0][0] == 0);
  CHECK(tv["robust_value"] == 0.5);
  const Json sampled =
      Json::parse(Run({"solve", "--mdp", Data("simple_case.json"),
                       "--from-samples", "2000", "--seed", "0"})
                      .out);
  CHECK(sampled["err_true"] == 0.0);
}

TEST_CASE("cfr") {
  const Json j = Json::parse(Run({"cfr", "--iters", "500"}).out);
  CHECK(std::abs(j["value"].get<double>() - 0.474) <= 2e-3);
  CHECK(j["strategy"].contains("adversary:root"));
  const Json f = Json::parse(
      Run({"cfr", "--game", Data("hp_simple_case.json"), "--iters", "500"}).out);
  CHECK(f["value"] == j["value"]);
  const Json p = Json::parse(
      Run({"cfr", "--game", Data("aliased_pomdp.json"), "--iters", "200"}).out);
  CHECK(std::abs(p["value"].get<double>() - 0.52) <= 2e-3);
  CHECK(Run({"cfr", "--game", Data("simple_case.json")}).code == 2);
}

TEST_CASE("baseline") {
  const Json opt = Json::parse(Run({"baseline", "--method", "opt"}).out);
  CHECK(opt["policy"][0][0] == 0);
  CHECK(opt["samples"] == 20000);
  const Json rq = Json::parse(Run({"baseline", "--method", "rq", "--seed", "1"}).out);
  CHECK(rq["err_worst"].get<double>() > 0.0);
  CHECK(Run({"baseline", "--method", "dqn"}).code != 0);
}

TEST_CASE("simple-case and pac-sweep are byte-identical across runs") {
  const auto base = std::filesystem::temp_directory_path() / "rmdp_cli_test";
  std::filesystem::remove_all(base);
  const std::string a = (base / "a").string(), b = (base / "b").string();
  for (const std::string& dir : {a, b}) {
    CHECK(Run({"simple-case", "--u-list", "0.01,0.5", "--seeds", "2",
               "--eval-draws", "300", "--out", dir, "--svg"})
              .code == 0);
    CHECK(Run({"pac-sweep", "--trials", "5", "--out", dir}).code == 0);
  }
  for (const char* f : {"report.csv", "report.json", "err_vs_u.svg", "pac.csv",
                        "pac.json"}) {
    CHECK(ReadFile(a + "/" + f) == ReadFile(b + "/" + f));
  }
  std::filesystem::remove_all(base);
}

TEST_CASE("usage errors") {
  CHECK(Run({}).code != 0);
  CHECK(Run({"frobnicate"}).code != 0);
  CHECK(Run({"--help"}).code == 0);
  CHECK(Run({"solve"}).code != 0);
}

}  // TEST_SUITE
