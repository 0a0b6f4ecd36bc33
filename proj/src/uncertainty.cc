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

#include "rmdp/uncertainty.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <type_traits>
#include <utility>

#include "rmdp/error.h"

namespace rmdp {
namespace {

double Sum(const Row& row) {
  return std::accumulate(row.begin(), row.end(), 0.0);
}

double L1Norm(const Row& row) {
  double total = 0.0;
  for (double x : row) total += std::abs(x);
  return total;
}

bool IsZero(const Row& row) {
  return std::all_of(row.begin(), row.end(), [](double x) { return x == 0.0; });
}

bool NearlyEqual(const Row& a, const Row& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > kProbTol) return false;
  }
  return true;
}

void CheckBoxFeasible(const ProbabilityBox& box) {
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < box.lower.size(); ++i) {
    if (box.lower[i] > box.upper[i] + kProbTol) {
      throw InfeasibleSetError("box lower bound exceeds upper bound");
    }
    lo += box.lower[i];
    hi += box.upper[i];
  }
  if (lo > 1.0 + kProbTol || hi < 1.0 - kProbTol) {
    throw InfeasibleSetError("box does not intersect the simplex");
  }
}

bool InsideBox(const Row& p, const ProbabilityBox& box) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < box.lower[i] - kProbTol || p[i] > box.upper[i] + kProbTol) {
      return false;
    }
  }
  return true;
}

// Indices sorted by value; ties keep the lower index first.
std::vector<int> OrderBy(const std::vector<double>& values, bool ascending) {
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return ascending ? values[a] < values[b] : values[a] > values[b];
  });
  return order;
}

InnerMin MinOverCandidates(const CandidateRows& set, const Row& base_row,
                           const std::vector<double>& next_values) {
  if (set.perturbations.empty()) {
    throw InfeasibleSetError("no valid candidate perturbation for this pair");
  }
  const Row* best = nullptr;
  double best_value = std::numeric_limits<double>::infinity();
  for (const Row& delta : set.perturbations) {
    double value = 0.0;
    for (std::size_t i = 0; i < base_row.size(); ++i) {
      value += (base_row[i] + delta[i]) * next_values[i];
    }
    bool better = value < best_value;
    if (!better && value == best_value) {
      // Zero first, then lexicographically smallest.
      if (IsZero(delta) && !IsZero(*best)) {
        better = true;
      } else if (IsZero(delta) == IsZero(*best)) {
        better = delta < *best;
      }
    }
    if (better) {
      best = &delta;
      best_value = value;
    }
  }
  return {*best, best_value};
}

InnerMin MinOverTvBall(double u, const Row& p,
                       const std::vector<double>& values) {
  const std::size_t n = p.size();
  InnerMin zero{Row(n, 0.0), Dot(p, values)};
  if (n == 0 || u <= 0.0) return zero;

  const int target = static_cast<int>(
      std::min_element(values.begin(), values.end()) - values.begin());
  double capacity = std::min(u, 1.0 - p[target]);
  Row sigma(n, 0.0);
  double moved = 0.0;
  for (int i : OrderBy(values, /*ascending=*/false)) {
    if (capacity <= 0.0) break;
    if (values[i] <= values[target]) break;
    const double take = std::min(p[i], capacity);
    if (take <= 0.0) continue;
    sigma[i] -= take;
    moved += take;
    capacity -= take;
  }
  if (moved <= 0.0) return zero;
  sigma[target] += moved;
  double value = 0.0;
  for (std::size_t i = 0; i < n; ++i) value += (p[i] + sigma[i]) * values[i];
  if (value >= zero.value) return zero;
  return {std::move(sigma), value};
}

InnerMin MinOverBox(const ProbabilityBox& box, const Row& p,
                    const std::vector<double>& values) {
  CheckBoxFeasible(box);
  const std::size_t n = p.size();
  Row q = box.lower;
  double remaining = 1.0 - Sum(box.lower);
  for (int i : OrderBy(values, /*ascending=*/true)) {
    if (remaining <= 0.0) break;
    const double add = std::min(box.upper[i] - box.lower[i], remaining);
    if (add <= 0.0) continue;
    q[i] += add;
    remaining -= add;
  }
  double value = 0.0;
  Row sigma(n);
  for (std::size_t i = 0; i < n; ++i) {
    sigma[i] = q[i] - p[i];
    value += q[i] * values[i];
  }
  if (InsideBox(p, box)) {
    const double base_value = Dot(p, values);
    if (value >= base_value) return {Row(n, 0.0), base_value};
  }
  return {std::move(sigma), value};
}

}  // namespace

UncertaintySet UncertaintySet::TvBall(double u) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw ParameterError("TV radius must lie in [0, 1]");
  }
  UncertaintySet set;
  set.kind_ = SetKind::kTvBall;
  set.tv_radius_ = u;
  set.lambda_ = 2.0;
  return set;
}

UncertaintySet UncertaintySet::Box(BoxAnchor anchor,
                                   std::map<PairKey, BoxBounds> bounds,
                                   double lambda) {
  if (!(lambda >= 0.0)) throw ParameterError("lambda must be non-negative");
  for (const auto& [key, b] : bounds) {
    if (b.lower.size() != b.upper.size()) {
      throw ConfigError("box bounds have mismatched lengths");
    }
  }
  UncertaintySet set;
  set.kind_ = SetKind::kBoxOnSimplex;
  set.anchor_ = anchor;
  set.bounds_ = std::move(bounds);
  set.lambda_ = lambda;
  return set;
}

UncertaintySet UncertaintySet::FixedDiscrete(
    std::map<PairKey, std::vector<Row>> candidates) {
  for (const auto& [key, rows] : candidates) {
    if (rows.empty()) throw InfeasibleSetError("empty candidate list");
    for (const Row& row : rows) {
      if (std::abs(Sum(row)) > kProbTol) {
        throw ConfigError("candidate perturbation does not sum to zero");
      }
      for (double x : row) {
        if (!(x >= -1.0 && x <= 1.0)) {
          throw ConfigError("candidate perturbation entry outside [-1, 1]");
        }
      }
    }
  }
  UncertaintySet set;
  set.kind_ = SetKind::kFixedDiscrete;
  set.candidates_ = std::move(candidates);
  return set;
}

UncertaintySet UncertaintySet::Homogeneous(std::vector<Row> vectors) {
  if (vectors.empty()) throw InfeasibleSetError("empty homogeneous set");
  for (const Row& row : vectors) {
    if (row.size() != vectors.front().size()) {
      throw ConfigError("homogeneous vectors must share one length");
    }
    if (std::abs(Sum(row)) > kProbTol) {
      throw ConfigError("homogeneous perturbation does not sum to zero");
    }
  }
  UncertaintySet set;
  set.kind_ = SetKind::kHomogeneous;
  set.shared_ = std::move(vectors);
  return set;
}

double UncertaintySet::lipschitz_constant() const {
  switch (kind_) {
    case SetKind::kTvBall:
      return 2.0;
    case SetKind::kBoxOnSimplex:
      return lambda_;
    case SetKind::kFixedDiscrete:
    case SetKind::kHomogeneous:
      return 0.0;
  }
  return 0.0;
}

PairSet UncertaintySet::ForPair(int depth, int state, int action,
                                const Row& base_row) const {
  const PairKey key{depth, state, action};
  switch (kind_) {
    case SetKind::kTvBall:
      return TvRadius{tv_radius_};
    case SetKind::kBoxOnSimplex: {
      auto it = bounds_.find(key);
      if (it == bounds_.end()) return ProbabilityBox{base_row, base_row};
      const BoxBounds& b = it->second;
      if (b.lower.size() != base_row.size()) {
        throw ConfigError("box bounds length does not match the row");
      }
      ProbabilityBox box{b.lower, b.upper};
      for (std::size_t i = 0; i < base_row.size(); ++i) {
        if (anchor_ == BoxAnchor::kRelative) {
          box.lower[i] += base_row[i];
          box.upper[i] += base_row[i];
        }
        box.lower[i] = std::clamp(box.lower[i], 0.0, 1.0);
        box.upper[i] = std::clamp(box.upper[i], 0.0, 1.0);
      }
      CheckBoxFeasible(box);
      return box;
    }
    case SetKind::kFixedDiscrete: {
      auto it = candidates_.find(key);
      if (it == candidates_.end()) {
        return CandidateRows{{Row(base_row.size(), 0.0)}};
      }
      CandidateRows rows;
      for (const Row& delta : it->second) {
        if (delta.size() != base_row.size()) {
          throw ConfigError("candidate perturbation length does not match");
        }
        if (IsValidPerturbedRow(base_row, delta)) {
          rows.perturbations.push_back(delta);
        }
      }
      if (rows.perturbations.empty()) {
        throw InfeasibleSetError("no candidate keeps the row on the simplex");
      }
      return rows;
    }
    case SetKind::kHomogeneous:
      break;
  }
  throw UnsupportedSetError(
      "homogeneous perturbations do not decompose over state-action pairs");
}

std::vector<Row> UncertaintySet::ValidSharedVectors(
    const LayeredMdp& base) const {
  if (kind_ != SetKind::kHomogeneous) {
    throw UnsupportedSetError("not a homogeneous set");
  }
  std::vector<Row> valid;
  for (const Row& delta : shared_) {
    bool ok = true;
    for (int h = 0; ok && base.has_rows(h); ++h) {
      for (int s = 0; ok && s < base.width(h); ++s) {
        for (int a = 0; ok && a < base.num_actions(); ++a) {
          const Row& row = base.transition(h, s, a);
          ok = row.size() == delta.size() && IsValidPerturbedRow(row, delta);
        }
      }
    }
    if (ok) valid.push_back(delta);
  }
  return valid;
}

bool IsValidPerturbedRow(const Row& base_row, const Row& delta) {
  if (base_row.size() != delta.size()) return false;
  double sum = 0.0;
  for (std::size_t i = 0; i < base_row.size(); ++i) {
    const double p = base_row[i] + delta[i];
    if (!(p >= -kProbTol && p <= 1.0 + kProbTol)) return false;
    sum += p;
  }
  return std::abs(sum - 1.0) <= kProbTol;
}

double L1Distance(const Row& a, const Row& b) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) total += std::abs(a[i] - b[i]);
  return total;
}

bool Contains(const UncertaintySet& set, const LayeredMdp& base,
              const PerturbationAssignment& sigma) {
  CheckPerturbationShape(base, sigma);
  if (set.kind() == SetKind::kHomogeneous) {
    if (!base.has_rows(0)) return true;
    const Row& shared = sigma.at(0, 0, 0);
    for (int h = 0; base.has_rows(h); ++h) {
      for (int s = 0; s < base.width(h); ++s) {
        for (int a = 0; a < base.num_actions(); ++a) {
          if (!NearlyEqual(sigma.at(h, s, a), shared)) return false;
        }
      }
    }
    for (const Row& c : set.ValidSharedVectors(base)) {
      if (NearlyEqual(c, shared)) return true;
    }
    return false;
  }
  for (int h = 0; base.has_rows(h); ++h) {
    for (int s = 0; s < base.width(h); ++s) {
      for (int a = 0; a < base.num_actions(); ++a) {
        const Row& p = base.transition(h, s, a);
        const Row& delta = sigma.at(h, s, a);
        if (!IsValidPerturbedRow(p, delta)) return false;
        PairSet pair;
        try {
          pair = set.ForPair(h, s, a, p);
        } catch (const InfeasibleSetError&) {
          return false;
        }
        bool inside = std::visit(
            [&](const auto& u) -> bool {
              using T = std::decay_t<decltype(u)>;
              if constexpr (std::is_same_v<T, TvRadius>) {
                double l1 = 0.0;
                for (double x : delta) l1 += std::abs(x);
                return l1 <= 2.0 * u.u + kProbTol;
              } else if constexpr (std::is_same_v<T, ProbabilityBox>) {
                Row q(p.size());
                for (std::size_t i = 0; i < p.size(); ++i) q[i] = p[i] + delta[i];
                return InsideBox(q, u);
              } else {
                return std::any_of(
                    u.perturbations.begin(), u.perturbations.end(),
                    [&](const Row& c) { return NearlyEqual(c, delta); });
              }
            },
            pair);
        if (!inside) return false;
      }
    }
  }
  return true;
}

InnerMin WorstCaseInnerMin(const PairSet& set, const Row& base_row,
                           const std::vector<double>& next_values) {
  if (base_row.size() != next_values.size()) {
    throw ConfigError("row and value vector lengths differ");
  }
  return std::visit(
      [&](const auto& u) -> InnerMin {
        using T = std::decay_t<decltype(u)>;
        if constexpr (std::is_same_v<T, TvRadius>) {
          return MinOverTvBall(u.u, base_row, next_values);
        } else if constexpr (std::is_same_v<T, ProbabilityBox>) {
          return MinOverBox(u, base_row, next_values);
        } else {
          return MinOverCandidates(u, base_row, next_values);
        }
      },
      set);
}

Row FiveCaseClamp(const Row& sigma_row, const Row& target_base) {
  Row clamped(sigma_row.size());
  for (std::size_t i = 0; i < sigma_row.size(); ++i) {
    const double x = sigma_row[i];
    const double p = target_base[i];
    if (x > 0.0 && p + x > 1.0) {
      clamped[i] = 1.0 - p;
    } else if (x < 0.0 && p + x < 0.0) {
      clamped[i] = -p;
    } else {
      clamped[i] = x;
    }
  }
  return clamped;
}

Row ProjectTvRow(const Row& sigma_row, const Row& target_base, double u) {
  if (IsValidPerturbedRow(target_base, sigma_row) &&
      L1Norm(sigma_row) <= 2.0 * u + kProbTol) {
    return sigma_row;
  }
  Row ell = FiveCaseClamp(sigma_row, target_base);
  const double residual = Sum(ell);
  if (residual != 0.0) {
    // Entries with the residual's sign shrink toward zero; they hold at least
    // |residual| in total, so the row ends zero-sum without crossing zero.
    double mass = 0.0;
    for (double x : ell) {
      if (x * residual > 0.0) mass += std::abs(x);
    }
    if (mass > 0.0) {
      const double scale = std::abs(residual) / mass;
      for (double& x : ell) {
        if (x * residual > 0.0) x -= x * std::min(scale, 1.0);
      }
    }
  }
  const double l1 = L1Norm(ell);
  if (l1 > 2.0 * u && l1 > 0.0) {
    for (double& x : ell) x *= 2.0 * u / l1;
  }
  return ell;
}

Row ProjectBoxRow(const Row& sigma_row, const Row& target_base,
                  const ProbabilityBox& box) {
  CheckBoxFeasible(box);
  const std::size_t n = sigma_row.size();
  bool member = IsValidPerturbedRow(target_base, sigma_row);
  for (std::size_t i = 0; member && i < n; ++i) {
    const double q = target_base[i] + sigma_row[i];
    member = q >= box.lower[i] - kProbTol && q <= box.upper[i] + kProbTol;
  }
  if (member) return sigma_row;
  Row lo(n), hi(n), ell(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = box.lower[i] - target_base[i];
    hi[i] = box.upper[i] - target_base[i];
    ell[i] = std::clamp(sigma_row[i], lo[i], std::max(lo[i], hi[i]));
  }
  const double residual = Sum(ell);
  double slack = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    slack += residual > 0.0 ? ell[i] - lo[i] : hi[i] - ell[i];
  }
  if (residual != 0.0 && slack > 0.0) {
    const double scale = std::min(std::abs(residual) / slack, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (residual > 0.0) {
        ell[i] -= (ell[i] - lo[i]) * scale;
      } else {
        ell[i] += (hi[i] - ell[i]) * scale;
      }
    }
  }
  return ell;
}

PerturbationAssignment Project(const UncertaintySet& set,
                               const PerturbationAssignment& sigma,
                               const LayeredMdp& from_base,
                               const LayeredMdp& to_base) {
  CheckPerturbationShape(from_base, sigma);
  CheckPerturbationShape(to_base, sigma);
  PerturbationAssignment out = sigma;

  if (set.kind() == SetKind::kHomogeneous) {
    const auto valid = set.ValidSharedVectors(to_base);
    if (valid.empty()) throw InfeasibleSetError("U(to_base) is empty");
    int best = 0;
    double best_distance = std::numeric_limits<double>::infinity();
    for (int k = 0; k < static_cast<int>(valid.size()); ++k) {
      double worst = 0.0;
      for (int h = 0; to_base.has_rows(h); ++h) {
        for (int s = 0; s < to_base.width(h); ++s) {
          for (int a = 0; a < to_base.num_actions(); ++a) {
            worst = std::max(worst, L1Distance(valid[k], sigma.at(h, s, a)));
          }
        }
      }
      if (worst < best_distance) {
        best_distance = worst;
        best = k;
      }
    }
    for (auto& layer : out.rows) {
      for (auto& state : layer) {
        for (auto& row : state) row = valid[best];
      }
    }
    return out;
  }

  for (int h = 0; to_base.has_rows(h); ++h) {
    for (int s = 0; s < to_base.width(h); ++s) {
      for (int a = 0; a < to_base.num_actions(); ++a) {
        const Row& p = to_base.transition(h, s, a);
        const Row& delta = sigma.at(h, s, a);
        Row& target = out.rows[h][s][a];
        const PairSet pair = set.ForPair(h, s, a, p);
        if (const auto* tv = std::get_if<TvRadius>(&pair)) {
          target = ProjectTvRow(delta, p, tv->u);
        } else if (const auto* box = std::get_if<ProbabilityBox>(&pair)) {
          target = ProjectBoxRow(delta, p, *box);
        } else {
          const auto& rows = std::get<CandidateRows>(pair).perturbations;
          const Row* best = &rows.front();
          for (const Row& c : rows) {
            if (L1Distance(c, delta) < L1Distance(*best, delta)) best = &c;
          }
          target = *best;
        }
      }
    }
  }
  return out;
}

}  // namespace rmdp
