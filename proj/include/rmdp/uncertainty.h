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

#ifndef RMDP_UNCERTAINTY_H_
#define RMDP_UNCERTAINTY_H_

#include <compare>
#include <map>
#include <variant>
#include <vector>

#include "rmdp/layered_mdp.h"

namespace rmdp {

enum class SetKind { kFixedDiscrete, kTvBall, kBoxOnSimplex, kHomogeneous };
enum class BoxAnchor { kAbsolute, kRelative };

struct PairKey {
  int depth = 0;
  int state = 0;
  int action = 0;
  auto operator<=>(const PairKey&) const = default;
};

// Per-entry probability bounds. Absolute bounds are probabilities; relative
// bounds are offsets added to the base row before clipping to [0, 1].
struct BoxBounds {
  Row lower;
  Row upper;
  bool operator==(const BoxBounds&) const = default;
};

// The per-pair perturbation set U_sa(P), resolved against one base row.
struct CandidateRows {
  std::vector<Row> perturbations;  // already filtered to valid ones
};
struct TvRadius {
  double u = 0.0;
};
struct ProbabilityBox {
  Row lower;  // absolute, clipped to [0, 1]
  Row upper;
};
using PairSet = std::variant<CandidateRows, TvRadius, ProbabilityBox>;

// A family of transition perturbation sets U(P), one of four variants:
//
//   FixedDiscrete  finite candidate perturbations per pair (base-independent)
//   TvBall         {p' : ||p' - p||_TV <= u}, i.e. l1 radius 2u, per pair
//   BoxOnSimplex   entrywise probability bounds intersected with the simplex
//   Homogeneous    one finite candidate list shared by every pair at once
//
// The first three decompose over state-action pairs. Pairs that a
// FixedDiscrete or BoxOnSimplex set does not mention are unperturbed.
class UncertaintySet {
 public:
  static UncertaintySet TvBall(double u);
  static UncertaintySet Box(BoxAnchor anchor,
                            std::map<PairKey, BoxBounds> bounds,
                            double lambda);
  static UncertaintySet FixedDiscrete(
      std::map<PairKey, std::vector<Row>> candidates);
  static UncertaintySet Homogeneous(std::vector<Row> vectors);

  SetKind kind() const { return kind_; }
  bool is_pair_wise() const { return kind_ != SetKind::kHomogeneous; }

  // Declared Lipschitz constant of the map P -> U(P).
  double lipschitz_constant() const;

  double tv_radius() const { return tv_radius_; }
  BoxAnchor anchor() const { return anchor_; }
  const std::map<PairKey, BoxBounds>& box_bounds() const { return bounds_; }
  const std::map<PairKey, std::vector<Row>>& fixed_candidates() const {
    return candidates_;
  }
  const std::vector<Row>& homogeneous_vectors() const { return shared_; }

  // U_sa(base_row) for one pair. Throws UnsupportedSetError for Homogeneous
  // sets and InfeasibleSetError when the resolved set is empty.
  PairSet ForPair(int depth, int state, int action, const Row& base_row) const;

  // Homogeneous candidates that keep every row of `base` on the simplex.
  std::vector<Row> ValidSharedVectors(const LayeredMdp& base) const;

 private:
  UncertaintySet() = default;

  SetKind kind_ = SetKind::kTvBall;
  double tv_radius_ = 0.0;
  double lambda_ = 0.0;
  BoxAnchor anchor_ = BoxAnchor::kAbsolute;
  std::map<PairKey, BoxBounds> bounds_;
  std::map<PairKey, std::vector<Row>> candidates_;
  std::vector<Row> shared_;
};

// True when base_row + delta is a distribution.
bool IsValidPerturbedRow(const Row& base_row, const Row& delta);

// True iff P + sigma is a valid transition function inside C(P).
// Throws ConfigError on a shape mismatch.
bool Contains(const UncertaintySet& set, const LayeredMdp& base,
              const PerturbationAssignment& sigma);

struct InnerMin {
  Row sigma;
  double value = 0.0;
};

// argmin over p in U_sa of (base_row + p) . next_values. Ties prefer the zero
// perturbation. Throws InfeasibleSetError for an empty box.
InnerMin WorstCaseInnerMin(const PairSet& set, const Row& base_row,
                           const std::vector<double>& next_values);

// Entrywise clamp of `sigma_row` so that target_base + result stays in
// [0, 1]. The sum may become nonzero.
Row FiveCaseClamp(const Row& sigma_row, const Row& target_base);

// Maps a TV-ball perturbation onto U(target_base) with the same radius:
// five-case clamp, then zero-sum repair by shrinking the entries that carry
// the residual proportionally to their magnitude.
Row ProjectTvRow(const Row& sigma_row, const Row& target_base, double u);

// Clamp into the box and repair the residual proportionally to each entry's
// remaining slack toward the violated side.
Row ProjectBoxRow(const Row& sigma_row, const Row& target_base,
                  const ProbabilityBox& box);

// A member of U(to_base) close to `sigma` in the max-over-pairs l1 metric.
// Throws InfeasibleSetError when U(to_base) is empty.
PerturbationAssignment Project(const UncertaintySet& set,
                               const PerturbationAssignment& sigma,
                               const LayeredMdp& from_base,
                               const LayeredMdp& to_base);

double L1Distance(const Row& a, const Row& b);

}  // namespace rmdp

#endif  // RMDP_UNCERTAINTY_H_
