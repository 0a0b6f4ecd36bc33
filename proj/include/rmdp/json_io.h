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

#ifndef RMDP_JSON_IO_H_
#define RMDP_JSON_IO_H_

#include <optional>
#include <string>

#include "json.hpp"
#include "rmdp/extensive_game.h"
#include "rmdp/layered_mdp.h"
#include "rmdp/uncertainty.h"

namespace rmdp {

using Json = nlohmann::ordered_json;

// An MDP spec file: the model plus optional embedded uncertainty set and
// observation model.
struct MdpSpec {
  LayeredMdp mdp;
  std::optional<UncertaintySet> set;
  std::optional<ObservationModel> observations;
};

LayeredMdp MdpFromJson(const Json& j);
Json MdpToJson(const LayeredMdp& mdp);

UncertaintySet SetFromJson(const Json& j);
Json SetToJson(const UncertaintySet& set);

ObservationModel ObservationsFromJson(const Json& j);

MdpSpec MdpSpecFromJson(const Json& j);
MdpSpec LoadMdpSpec(const std::string& path);

// Reads `text` as inline JSON when it starts with '{', else as a file path.
Json ParseInlineOrFile(const std::string& text);

Json PolicyToJson(const DeterministicPolicy& policy);
Json PerturbationToJson(const PerturbationAssignment& sigma);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, const std::string& contents);

}  // namespace rmdp

#endif  // RMDP_JSON_IO_H_
