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

#ifndef RMDP_EXTENSIVE_GAME_H_
#define RMDP_EXTENSIVE_GAME_H_

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "rmdp/layered_mdp.h"
#include "rmdp/uncertainty.h"

namespace rmdp {

// The agent maximises terminal payoffs, the adversary minimises them.
enum class Player { kAgent = 0, kAdversary = 1 };
enum class NodeKind { kTerminal, kChance, kDecision };

struct GameNode {
  NodeKind kind = NodeKind::kTerminal;
  int infoset = -1;
  std::vector<int> children;
  std::vector<double> probs;  // chance nodes only
  double payoff = 0.0;        // terminal nodes only; agent's utility
};

struct Infoset {
  Player player = Player::kAgent;
  int num_actions = 0;
  std::string key;
  std::vector<int> nodes;
};

// Finite two-player zero-sum game tree with imperfect information. Nodes are
// added bottom-up: every child id is smaller than its parent's, which keeps
// the tree acyclic.
class GameTree {
 public:
  int AddTerminal(double payoff);
  int AddChance(std::vector<int> children, std::vector<double> probs);
  // Creates the infoset on first use; later nodes must match its player and
  // action count.
  int AddDecision(Player player, const std::string& infoset_key,
                  std::vector<int> children);
  void SetRoot(int node);

  int root() const { return root_; }
  const GameNode& node(int id) const { return nodes_.at(id); }
  const std::vector<GameNode>& nodes() const { return nodes_; }
  const Infoset& infoset(int id) const { return infosets_.at(id); }
  const std::vector<Infoset>& infosets() const { return infosets_; }
  int FindInfoset(const std::string& key) const;  // -1 when absent

  // Notes recorded while building, e.g. discarded perturbations.
  std::vector<std::string> warnings;

 private:
  std::vector<GameNode> nodes_;
  std::vector<Infoset> infosets_;
  std::unordered_map<std::string, int> infoset_ids_;
  int root_ = -1;
};

// Probability vector per infoset, indexed like GameTree::infosets().
struct MixedStrategyProfile {
  std::vector<std::vector<double>> probs;
};

MixedStrategyProfile UniformProfile(const GameTree& game);

// Observation distribution per state, indexed [depth][state].
struct ObservationModel {
  int num_observations = 0;
  std::vector<std::vector<Row>> probs;

  // Every state observes its own index.
  static ObservationModel Identity(const LayeredMdp& mdp);
};

// Game for a homogeneous perturbation set: the adversary picks one vector
// at the root under a single infoset, the agent sees states and its own
// actions, and chance draws transitions from P + sigma. Candidates that
// break some row are dropped with a warning.
GameTree BuildHpGame(const LayeredMdp& mdp, const UncertaintySet& set);

// Game for a robust POMDP with known parameters. Agent infosets are keyed by
// observation-action histories. A homogeneous set gives the adversary one
// root infoset; a FixedDiscrete set gives it a decision at every history
// where the played pair has more than one candidate.
GameTree BuildRpomdpGame(const LayeredMdp& mdp,
                         const ObservationModel& observations,
                         const UncertaintySet& set);

// Row player = agent (maximiser), column player = adversary, who does not
// see the row choice.
GameTree MatrixGameTree(const std::vector<std::vector<double>>& payoffs);

double ExpectedPayoff(const GameTree& game,
                      const MixedStrategyProfile& profile);

// Best-response value for `player` against the other side of `profile`.
double BestResponseValue(const GameTree& game,
                         const MixedStrategyProfile& profile, Player player);

// Half the Nash gap: (BR_agent - BR_adversary) / 2. Zero exactly at an
// equilibrium. Throws ConfigError for an incomplete profile.
double Exploitability(const GameTree& game,
                      const MixedStrategyProfile& profile);

// Vanilla counterfactual regret minimisation with regret matching and
// simultaneous updates over full tree walks.
class CfrSolver {
 public:
  explicit CfrSolver(const GameTree& game);

  void RunIteration();
  int iterations() const { return iterations_; }

  MixedStrategyProfile AverageProfile() const;
  MixedStrategyProfile CurrentProfile() const;

 private:
  double Walk(int node, double reach_agent, double reach_adversary,
              double reach_chance);

  const GameTree& game_;
  std::vector<std::vector<double>> regrets_;
  std::vector<std::vector<double>> strategy_sums_;
  std::vector<std::vector<double>> current_;
  int iterations_ = 0;
};

struct CfrResult {
  MixedStrategyProfile average;
  double exploitability = 0.0;
  double value = 0.0;
};

// `seed` is accepted for interface parity; vanilla CFR is deterministic.
CfrResult CfrSolve(const GameTree& game, int iterations, std::uint64_t seed);

}  // namespace rmdp

#endif  // RMDP_EXTENSIVE_GAME_H_
