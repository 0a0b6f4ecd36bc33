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

#include "rmdp/json_io.h"

#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include "rmdp/error.h"

namespace rmdp {
namespace {

template <typename T>
T Get(const Json& j, const char* field) {
  if (!j.contains(field)) {
    throw ConfigError(std::string("missing field '") + field + "'");
  }
  try {
    return j.at(field).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad field '") + field + "': " + e.what());
  }
}

PairKey KeyFromJson(const Json& entry) {
  return {Get<int>(entry, "depth"), Get<int>(entry, "state"),
          Get<int>(entry, "action")};
}

Json KeyToJson(const PairKey& key) {
  Json j;
  j["depth"] = key.depth;
  j["state"] = key.state;
  j["action"] = key.action;
  return j;
}

}  // namespace

LayeredMdp MdpFromJson(const Json& j) {
  const int horizon = Get<int>(j, "horizon");
  if (!j.contains("states_per_depth")) {
    throw ConfigError("missing field 'states_per_depth'");
  }
  const Json& layers = j.at("states_per_depth");
  if (!layers.is_array()) throw ConfigError("states_per_depth must be a list");
  std::vector<int> widths;
  for (const Json& layer : layers) {
    // Either a count or a list of state names.
    if (!layer.is_array() && !layer.is_number_integer()) {
      throw ConfigError("states_per_depth entries must be counts or lists");
    }
    widths.push_back(layer.is_array() ? static_cast<int>(layer.size())
                                      : layer.get<int>());
  }
  if (static_cast<int>(widths.size()) != horizon) {
    throw ConfigError("states_per_depth must have `horizon` entries");
  }
  using Rows = std::vector<std::vector<std::vector<double>>>;
  auto transitions = Get<std::vector<Rows>>(j, "transitions");
  auto rewards = Get<Rows>(j, "rewards");
  return LayeredMdp(Get<int>(j, "num_actions"), std::move(widths),
                    std::move(transitions), std::move(rewards));
}

Json MdpToJson(const LayeredMdp& mdp) {
  Json j;
  j["horizon"] = mdp.horizon();
  j["states_per_depth"] = mdp.widths();
  j["num_actions"] = mdp.num_actions();
  j["transitions"] = mdp.transitions();
  j["rewards"] = mdp.rewards();
  return j;
}

UncertaintySet SetFromJson(const Json& j) {
  const auto kind = Get<std::string>(j, "kind");
  if (kind == "tv_ball") return UncertaintySet::TvBall(Get<double>(j, "u"));
  if (kind == "box") {
    const auto anchor_name =
        j.contains("anchor") ? Get<std::string>(j, "anchor") : "absolute";
    BoxAnchor anchor;
    if (anchor_name == "absolute") {
      anchor = BoxAnchor::kAbsolute;
    } else if (anchor_name == "relative") {
      anchor = BoxAnchor::kRelative;
    } else {
      throw ConfigError("anchor must be 'absolute' or 'relative'");
    }
    std::map<PairKey, BoxBounds> bounds;
    for (const Json& entry : Get<Json>(j, "bounds")) {
      bounds[KeyFromJson(entry)] = {Get<Row>(entry, "lower"),
                                    Get<Row>(entry, "upper")};
    }
    const double lambda = j.contains("lambda") ? Get<double>(j, "lambda") : 0.0;
    return UncertaintySet::Box(anchor, std::move(bounds), lambda);
  }
  if (kind == "fixed") {
    std::map<PairKey, std::vector<Row>> candidates;
    for (const Json& entry : Get<Json>(j, "vectors")) {
      candidates[KeyFromJson(entry)] = Get<std::vector<Row>>(entry, "vectors");
    }
    return UncertaintySet::FixedDiscrete(std::move(candidates));
  }
  if (kind == "homogeneous") {
    return UncertaintySet::Homogeneous(Get<std::vector<Row>>(j, "vectors"));
  }
  throw ConfigError("unknown uncertainty kind '" + kind + "'");
}

Json SetToJson(const UncertaintySet& set) {
  Json j;
  switch (set.kind()) {
    case SetKind::kTvBall:
      j["kind"] = "tv_ball";
      j["u"] = set.tv_radius();
      break;
    case SetKind::kBoxOnSimplex: {
      j["kind"] = "box";
      j["anchor"] =
          set.anchor() == BoxAnchor::kRelative ? "relative" : "absolute";
      j["lambda"] = set.lipschitz_constant();
      Json bounds = Json::array();
      for (const auto& [key, b] : set.box_bounds()) {
        Json entry = KeyToJson(key);
        entry["lower"] = b.lower;
        entry["upper"] = b.upper;
        bounds.push_back(std::move(entry));
      }
      j["bounds"] = std::move(bounds);
      break;
    }
    case SetKind::kFixedDiscrete: {
      j["kind"] = "fixed";
      Json vectors = Json::array();
      for (const auto& [key, rows] : set.fixed_candidates()) {
        Json entry = KeyToJson(key);
        entry["vectors"] = rows;
        vectors.push_back(std::move(entry));
      }
      j["vectors"] = std::move(vectors);
      break;
    }
    case SetKind::kHomogeneous:
      j["kind"] = "homogeneous";
      j["vectors"] = set.homogeneous_vectors();
      break;
  }
  return j;
}

ObservationModel ObservationsFromJson(const Json& j) {
  ObservationModel model;
  model.num_observations = Get<int>(j, "num_observations");
  model.probs = Get<std::vector<std::vector<Row>>>(j, "probs");
  return model;
}

MdpSpec MdpSpecFromJson(const Json& j) {
  MdpSpec spec{MdpFromJson(j), std::nullopt, std::nullopt};
  if (j.contains("uncertainty")) spec.set = SetFromJson(j.at("uncertainty"));
  if (j.contains("observations")) {
    spec.observations = ObservationsFromJson(j.at("observations"));
  }
  return spec;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << contents;
  if (!out) throw IoError("write failed for '" + path + "'");
}

Json ParseInlineOrFile(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  const std::string source =
      first != std::string::npos && text[first] == '{' ? text : ReadFile(text);
  try {
    return Json::parse(source);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
}

MdpSpec LoadMdpSpec(const std::string& path) {
  return MdpSpecFromJson(ParseInlineOrFile(path));
}

Json PolicyToJson(const DeterministicPolicy& policy) { return policy.actions; }

Json PerturbationToJson(const PerturbationAssignment& sigma) {
  return sigma.rows;
}

}  // namespace rmdp
