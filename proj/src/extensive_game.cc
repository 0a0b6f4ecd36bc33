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

#include "rmdp/extensive_game.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <utility>

#include "rmdp/error.h"

namespace rmdp {

int GameTree::AddTerminal(double payoff) {
  GameNode node;
  node.kind = NodeKind::kTerminal;
  node.payoff = payoff;
  nodes_.push_back(std::move(node));
  return static_cast<int>(nodes_.size()) - 1;
}

int GameTree::AddChance(std::vector<int> children, std::vector<double> probs) {
  if (children.empty() || children.size() != probs.size()) {
    throw ConfigError("chance node needs one probability per child");
  }
  double sum = 0.0;
  for (double p : probs) {
    if (p < 0.0) throw ConfigError("negative chance probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbTol) {
    throw ConfigError("chance probabilities do not sum to 1");
  }
  const int id = static_cast<int>(nodes_.size());
  for (int c : children) {
    if (c < 0 || c >= id) throw ConfigError("child must be added before parent");
  }
  GameNode node;
  node.kind = NodeKind::kChance;
  node.children = std::move(children);
  node.probs = std::move(probs);
  nodes_.push_back(std::move(node));
  return id;
}

int GameTree::AddDecision(Player player, const std::string& infoset_key,
                          std::vector<int> children) {
  if (children.empty()) throw ConfigError("decision node without actions");
  const int id = static_cast<int>(nodes_.size());
  for (int c : children) {
    if (c < 0 || c >= id) throw ConfigError("child must be added before parent");
  }
  int info;
  if (auto it = infoset_ids_.find(infoset_key); it != infoset_ids_.end()) {
    info = it->second;
    const Infoset& existing = infosets_[info];
    if (existing.player != player ||
        existing.num_actions != static_cast<int>(children.size())) {
      throw ConfigError("infoset '" + infoset_key +
                        "' mixes players or action counts");
    }
  } else {
    info = static_cast<int>(infosets_.size());
    infosets_.push_back({player, static_cast<int>(children.size()),
                         infoset_key, {}});
    infoset_ids_.emplace(infoset_key, info);
  }
  infosets_[info].nodes.push_back(id);
  GameNode node;
  node.kind = NodeKind::kDecision;
  node.infoset = info;
  node.children = std::move(children);
  nodes_.push_back(std::move(node));
  return id;
}

void GameTree::SetRoot(int node) {
  if (node < 0 || node >= static_cast<int>(nodes_.size())) {
    throw ConfigError("root out of range");
  }
  root_ = node;
}

int GameTree::FindInfoset(const std::string& key) const {
  auto it = infoset_ids_.find(key);
  return it == infoset_ids_.end() ? -1 : it->second;
}

MixedStrategyProfile UniformProfile(const GameTree& game) {
  MixedStrategyProfile profile;
  for (const Infoset& info : game.infosets()) {
    profile.probs.emplace_back(info.num_actions, 1.0 / info.num_actions);
  }
  return profile;
}

ObservationModel ObservationModel::Identity(const LayeredMdp& mdp) {
  ObservationModel model;
  model.num_observations = mdp.max_width();
  for (int h = 0; h < mdp.horizon(); ++h) {
    std::vector<Row> layer;
    for (int s = 0; s < mdp.width(h); ++s) {
      Row row(model.num_observations, 0.0);
      row[s] = 1.0;
      layer.push_back(std::move(row));
    }
    model.probs.push_back(std::move(layer));
  }
  return model;
}

namespace {

class MdpGameBuilder {
 public:
  MdpGameBuilder(const LayeredMdp& mdp, const ObservationModel& observations,
                 const UncertaintySet* pair_set)
      : mdp_(mdp), observations_(observations), pair_set_(pair_set) {}

  // Chance over the initial observation, conditioned on `shared`.
  int BuildEpisode(const Row* shared, const std::string& prefix) {
    const Row& obs = observations_.probs.at(0).at(0);
    std::vector<int> children;
    std::vector<double> probs;
    for (int o = 0; o < static_cast<int>(obs.size()); ++o) {
      if (obs[o] <= 0.0) continue;
      children.push_back(
          Decision(0, 0, o, "", prefix + "s0o" + std::to_string(o), 0.0,
                   shared));
      probs.push_back(obs[o]);
    }
    return Join(std::move(children), std::move(probs));
  }

  GameTree& tree() { return tree_; }

 private:
  int Join(std::vector<int> children, std::vector<double> probs) {
    if (children.size() == 1) return children.front();
    return tree_.AddChance(std::move(children), std::move(probs));
  }

  int Decision(int depth, int state, int obs, const std::string& agent_history,
               const std::string& full_history, double accumulated,
               const Row* shared) {
    const std::string key = agent_history + "o" + std::to_string(obs);
    std::vector<int> children;
    for (int a = 0; a < mdp_.num_actions(); ++a) {
      children.push_back(AfterAction(depth, state, a,
                                     key + "a" + std::to_string(a) + "|",
                                     full_history + "a" + std::to_string(a),
                                     accumulated, shared));
    }
    return tree_.AddDecision(Player::kAgent, "agent:" + key,
                             std::move(children));
  }

  int AfterAction(int depth, int state, int action,
                  const std::string& agent_history,
                  const std::string& full_history, double accumulated,
                  const Row* shared) {
    accumulated += mdp_.reward(depth, state, action);
    if (!mdp_.has_rows(depth)) return tree_.AddTerminal(accumulated);
    const Row& base = mdp_.transition(depth, state, action);
    if (shared != nullptr) {
      return Outcomes(depth, Add(base, *shared), agent_history, full_history,
                      accumulated, shared);
    }
    if (pair_set_ == nullptr) {
      return Outcomes(depth, base, agent_history, full_history, accumulated,
                      nullptr);
    }
    const PairSet pair = pair_set_->ForPair(depth, state, action, base);
    const auto* candidates = std::get_if<CandidateRows>(&pair);
    if (candidates == nullptr) {
      throw UnsupportedSetError(
          "game construction needs a finite perturbation set; discretize "
          "continuous sets first");
    }
    const auto& rows = candidates->perturbations;
    if (rows.size() == 1) {
      return Outcomes(depth, Add(base, rows.front()), agent_history,
                      full_history, accumulated, nullptr);
    }
    std::vector<int> children;
    for (int k = 0; k < static_cast<int>(rows.size()); ++k) {
      children.push_back(Outcomes(depth, Add(base, rows[k]), agent_history,
                                  full_history + "c" + std::to_string(k),
                                  accumulated, nullptr));
    }
    return tree_.AddDecision(Player::kAdversary, "adversary:" + full_history,
                             std::move(children));
  }

  int Outcomes(int depth, const Row& row, const std::string& agent_history,
               const std::string& full_history, double accumulated,
               const Row* shared) {
    std::vector<int> children;
    std::vector<double> probs;
    for (int next = 0; next < static_cast<int>(row.size()); ++next) {
      if (row[next] <= 0.0) continue;
      const Row& obs = observations_.probs.at(depth + 1).at(next);
      for (int o = 0; o < static_cast<int>(obs.size()); ++o) {
        if (obs[o] <= 0.0) continue;
        children.push_back(Decision(
            depth + 1, next, o, agent_history,
            full_history + "s" + std::to_string(next) + "o" + std::to_string(o),
            accumulated, shared));
        probs.push_back(row[next] * obs[o]);
      }
    }
    // Renormalise away rounding from P + sigma.
    const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
    for (double& p : probs) p /= total;
    return Join(std::move(children), std::move(probs));
  }

  static Row Add(const Row& a, const Row& b) {
    Row out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      out[i] = std::clamp(a[i] + b[i], 0.0, 1.0);
    }
    return out;
  }

  const LayeredMdp& mdp_;
  const ObservationModel& observations_;
  const UncertaintySet* pair_set_;
  GameTree tree_;
};

void CheckObservations(const LayeredMdp& mdp,
                       const ObservationModel& observations) {
  if (static_cast<int>(observations.probs.size()) != mdp.horizon()) {
    throw ConfigError("observation model depth mismatch");
  }
  for (int h = 0; h < mdp.horizon(); ++h) {
    if (static_cast<int>(observations.probs[h].size()) != mdp.width(h)) {
      throw ConfigError("observation model width mismatch");
    }
    for (const Row& row : observations.probs[h]) {
      if (static_cast<int>(row.size()) != observations.num_observations) {
        throw ConfigError("observation row length mismatch");
      }
      double sum = 0.0;
      for (double p : row) {
        if (p < -kProbTol) throw ConfigError("negative observation probability");
        sum += p;
      }
      if (std::abs(sum - 1.0) > kProbTol) {
        throw ConfigError("observation row does not sum to 1");
      }
    }
  }
}

GameTree BuildHomogeneous(const LayeredMdp& mdp,
                          const ObservationModel& observations,
                          const UncertaintySet& set) {
  for (int h = 0; mdp.has_rows(h); ++h) {
    if (mdp.width(h + 1) != mdp.width(1)) {
      throw UnsupportedSetError(
          "homogeneous perturbations need equal row widths at every depth");
    }
  }
  std::vector<Row> valid;
  std::vector<std::string> warnings;
  if (!mdp.has_rows(0)) {
    valid.push_back({});
  } else {
    const auto& all = set.homogeneous_vectors();
    if (all.front().size() != static_cast<std::size_t>(mdp.width(1))) {
      throw ConfigError("homogeneous vector length does not match row width");
    }
    valid = set.ValidSharedVectors(mdp);
    for (std::size_t k = 0; k < all.size(); ++k) {
      if (std::find(valid.begin(), valid.end(), all[k]) == valid.end()) {
        warnings.push_back("homogeneous candidate " + std::to_string(k) +
                           " leaves the simplex and was dropped");
      }
    }
  }
  if (valid.empty()) {
    throw InfeasibleSetError("no homogeneous candidate keeps all rows valid");
  }
  MdpGameBuilder builder(mdp, observations, nullptr);
  std::vector<int> children;
  for (int k = 0; k < static_cast<int>(valid.size()); ++k) {
    const Row* shared = mdp.has_rows(0) ? &valid[k] : nullptr;
    children.push_back(
        builder.BuildEpisode(shared, "c" + std::to_string(k) + "|"));
  }
  GameTree& tree = builder.tree();
  const int root = children.size() == 1
                       ? children.front()
                       : tree.AddDecision(Player::kAdversary, "adversary:root",
                                          std::move(children));
  tree.SetRoot(root);
  tree.warnings = std::move(warnings);
  return std::move(tree);
}

}  // namespace

GameTree BuildHpGame(const LayeredMdp& mdp, const UncertaintySet& set) {
  if (set.kind() != SetKind::kHomogeneous) {
    throw UnsupportedSetError("BuildHpGame needs a homogeneous set");
  }
  return BuildHomogeneous(mdp, ObservationModel::Identity(mdp), set);
}

GameTree BuildRpomdpGame(const LayeredMdp& mdp,
                         const ObservationModel& observations,
                         const UncertaintySet& set) {
  CheckObservations(mdp, observations);
  if (set.kind() == SetKind::kHomogeneous) {
    return BuildHomogeneous(mdp, observations, set);
  }
  if (set.kind() != SetKind::kFixedDiscrete) {
    throw UnsupportedSetError(
        "game construction needs a finite perturbation set; discretize "
        "continuous sets first");
  }
  MdpGameBuilder builder(mdp, observations, &set);
  const int root = builder.BuildEpisode(nullptr, "");
  GameTree& tree = builder.tree();
  tree.SetRoot(root);
  return std::move(tree);
}

GameTree MatrixGameTree(const std::vector<std::vector<double>>& payoffs) {
  if (payoffs.empty() || payoffs.front().empty()) {
    throw ConfigError("empty payoff matrix");
  }
  GameTree tree;
  std::vector<int> rows;
  for (const auto& line : payoffs) {
    if (line.size() != payoffs.front().size()) {
      throw ConfigError("ragged payoff matrix");
    }
    std::vector<int> columns;
    for (double v : line) columns.push_back(tree.AddTerminal(v));
    rows.push_back(tree.AddDecision(Player::kAdversary, "column",
                                    std::move(columns)));
  }
  tree.SetRoot(tree.AddDecision(Player::kAgent, "row", std::move(rows)));
  return tree;
}

namespace {

void CheckProfile(const GameTree& game, const MixedStrategyProfile& profile) {
  if (game.root() < 0) throw ConfigError("game has no root");
  if (profile.probs.size() != game.infosets().size()) {
    throw ConfigError("profile does not cover every infoset");
  }
  for (std::size_t i = 0; i < profile.probs.size(); ++i) {
    if (static_cast<int>(profile.probs[i].size()) !=
        game.infoset(static_cast<int>(i)).num_actions) {
      throw ConfigError("profile action count mismatch at infoset '" +
                        game.infoset(static_cast<int>(i)).key + "'");
    }
  }
}

}  // namespace

double ExpectedPayoff(const GameTree& game,
                      const MixedStrategyProfile& profile) {
  CheckProfile(game, profile);
  std::function<double(int)> value = [&](int id) -> double {
    const GameNode& n = game.node(id);
    switch (n.kind) {
      case NodeKind::kTerminal:
        return n.payoff;
      case NodeKind::kChance: {
        double total = 0.0;
        for (std::size_t i = 0; i < n.children.size(); ++i) {
          total += n.probs[i] * value(n.children[i]);
        }
        return total;
      }
      case NodeKind::kDecision: {
        const auto& sigma = profile.probs[n.infoset];
        double total = 0.0;
        for (std::size_t i = 0; i < n.children.size(); ++i) {
          if (sigma[i] != 0.0) total += sigma[i] * value(n.children[i]);
        }
        return total;
      }
    }
    return 0.0;
  };
  return value(game.root());
}

double BestResponseValue(const GameTree& game,
                         const MixedStrategyProfile& profile, Player player) {
  CheckProfile(game, profile);
  const auto& nodes = game.nodes();
  // Probability of reaching each node from chance and the fixed opponent.
  std::vector<double> reach(nodes.size(), 0.0);
  std::function<void(int, double)> spread = [&](int id, double r) {
    reach[id] = r;
    const GameNode& n = nodes[id];
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      double w = 1.0;
      if (n.kind == NodeKind::kChance) {
        w = n.probs[i];
      } else if (game.infoset(n.infoset).player != player) {
        w = profile.probs[n.infoset][i];
      }
      spread(n.children[i], r * w);
    }
  };
  spread(game.root(), 1.0);

  std::vector<double> memo(nodes.size(), 0.0);
  std::vector<char> known(nodes.size(), 0);
  std::vector<int> choice(game.infosets().size(), -1);
  const bool maximise = player == Player::kAgent;

  std::function<double(int)> value;
  auto decide = [&](int info) -> int {
    if (choice[info] >= 0) return choice[info];
    const Infoset& set = game.infoset(info);
    int best = 0;
    double best_score = 0.0;
    for (int a = 0; a < set.num_actions; ++a) {
      double score = 0.0;
      for (int id : set.nodes) {
        const double v = value(nodes[id].children[a]);
        if (reach[id] != 0.0) score += reach[id] * v;
      }
      if (a == 0 || (maximise ? score > best_score : score < best_score)) {
        best = a;
        best_score = score;
      }
    }
    choice[info] = best;
    return best;
  };
  value = [&](int id) -> double {
    if (known[id]) return memo[id];
    const GameNode& n = nodes[id];
    double v = 0.0;
    switch (n.kind) {
      case NodeKind::kTerminal:
        v = n.payoff;
        break;
      case NodeKind::kChance:
        for (std::size_t i = 0; i < n.children.size(); ++i) {
          v += n.probs[i] * value(n.children[i]);
        }
        break;
      case NodeKind::kDecision:
        if (game.infoset(n.infoset).player == player) {
          v = value(n.children[decide(n.infoset)]);
        } else {
          const auto& sigma = profile.probs[n.infoset];
          for (std::size_t i = 0; i < n.children.size(); ++i) {
            if (sigma[i] != 0.0) v += sigma[i] * value(n.children[i]);
          }
        }
        break;
    }
    memo[id] = v;
    known[id] = 1;
    return v;
  };
  return value(game.root());
}

double Exploitability(const GameTree& game,
                      const MixedStrategyProfile& profile) {
  const double agent = BestResponseValue(game, profile, Player::kAgent);
  const double adversary = BestResponseValue(game, profile, Player::kAdversary);
  return std::max(0.0, (agent - adversary) / 2.0);
}

CfrSolver::CfrSolver(const GameTree& game) : game_(game) {
  if (game.root() < 0) throw ConfigError("game has no root");
  for (const Infoset& info : game.infosets()) {
    regrets_.emplace_back(info.num_actions, 0.0);
    strategy_sums_.emplace_back(info.num_actions, 0.0);
  }
  current_ = CurrentProfile().probs;
}

MixedStrategyProfile CfrSolver::CurrentProfile() const {
  MixedStrategyProfile profile;
  for (const auto& regret : regrets_) {
    double positive = 0.0;
    for (double r : regret) positive += std::max(r, 0.0);
    std::vector<double> sigma(regret.size());
    for (std::size_t a = 0; a < regret.size(); ++a) {
      sigma[a] = positive > 0.0 ? std::max(regret[a], 0.0) / positive
                                : 1.0 / regret.size();
    }
    profile.probs.push_back(std::move(sigma));
  }
  return profile;
}

MixedStrategyProfile CfrSolver::AverageProfile() const {
  MixedStrategyProfile profile;
  for (const auto& sums : strategy_sums_) {
    const double total = std::accumulate(sums.begin(), sums.end(), 0.0);
    std::vector<double> sigma(sums.size());
    for (std::size_t a = 0; a < sums.size(); ++a) {
      sigma[a] = total > 0.0 ? sums[a] / total : 1.0 / sums.size();
    }
    profile.probs.push_back(std::move(sigma));
  }
  return profile;
}

void CfrSolver::RunIteration() {
  current_ = CurrentProfile().probs;
  Walk(game_.root(), 1.0, 1.0, 1.0);
  ++iterations_;
}

double CfrSolver::Walk(int id, double reach_agent, double reach_adversary,
                       double reach_chance) {
  const GameNode& n = game_.node(id);
  if (n.kind == NodeKind::kTerminal) return n.payoff;
  if (n.kind == NodeKind::kChance) {
    double total = 0.0;
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      total += n.probs[i] * Walk(n.children[i], reach_agent, reach_adversary,
                                 reach_chance * n.probs[i]);
    }
    return total;
  }
  const Infoset& info = game_.infoset(n.infoset);
  const auto& sigma = current_[n.infoset];
  const bool agent = info.player == Player::kAgent;
  std::vector<double> child_values(n.children.size());
  double node_value = 0.0;
  for (std::size_t a = 0; a < n.children.size(); ++a) {
    child_values[a] =
        agent ? Walk(n.children[a], reach_agent * sigma[a], reach_adversary,
                     reach_chance)
              : Walk(n.children[a], reach_agent, reach_adversary * sigma[a],
                     reach_chance);
    node_value += sigma[a] * child_values[a];
  }
  const double own_reach = agent ? reach_agent : reach_adversary;
  const double other_reach =
      (agent ? reach_adversary : reach_agent) * reach_chance;
  const double sign = agent ? 1.0 : -1.0;
  auto& regret = regrets_[n.infoset];
  auto& sums = strategy_sums_[n.infoset];
  for (std::size_t a = 0; a < n.children.size(); ++a) {
    regret[a] += other_reach * sign * (child_values[a] - node_value);
    sums[a] += own_reach * sigma[a];
  }
  return node_value;
}

CfrResult CfrSolve(const GameTree& game, int iterations, std::uint64_t seed) {
  (void)seed;
  if (iterations < 1) throw ParameterError("CFR needs at least one iteration");
  CfrSolver solver(game);
  for (int t = 0; t < iterations; ++t) solver.RunIteration();
  CfrResult result;
  result.average = solver.AverageProfile();
  result.exploitability = Exploitability(game, result.average);
  result.value = ExpectedPayoff(game, result.average);
  return result;
}

}  // namespace rmdp
