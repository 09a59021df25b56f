// Copyright 2026 The locpriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LOCPRIV_ACCOUNTING_HPP_
#define LOCPRIV_ACCOUNTING_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "locpriv/geometry.hpp"

namespace locpriv {

// Per-release privacy parameters. epsilon >= 0 (zero is the no-noise
// identity case), delta in (0, 1], theta <= 0 by construction (it tightens
// the additive side of a bound).
struct PrivacyParams {
  double epsilon = 0.0;
  double delta = 1.0;
  double theta = 0.0;

  void validate() const;  // InvalidParams
};

// Result of composing per-step parameters across releases. delta_multiplier
// is the product of the per-step 1/delta factors; it exceeds 1 and is never
// reinterpreted as a probability mass. The composite bound on a target with
// initial prior p is delta_multiplier * e^epsilon_sum * p + theta.
struct ComposedBound {
  double epsilon_sum = 0.0;
  double delta_multiplier = 1.0;
  double theta = 0.0;

  double bound(double prior) const;
  double bound_clipped(double prior) const;  // clamped to [0, 1]
};

// Single-release posterior bound on a location: delta^-1 * e^eps * prior.
// Returned uncapped; callers clip to 1 for reporting when needed.
double location_bound(double prior, double epsilon,
                      double delta);  // InvalidParams

// Additive slack from the candidates excluded by the delta set:
// (delta - 1) * min(excluded link weights). Zero when nothing is excluded.
double theta_slack(std::span<const double> excluded_weights, double delta);

// Single-release target bound: delta^-1 * e^eps * prior + theta.
double target_bound(double prior, const PrivacyParams& params);

// Composition across releases:
//   epsilon = sum_i eps_i
//   multiplier = prod_i delta_i^-1
//   theta = theta_n + sum_{i<n} theta_i * prod_{j>i} delta_j^-1 e^{eps_j}
ComposedBound compose(std::span<const PrivacyParams> steps);  // EmptyList

// Baseline sequential bound without delta sets: e^{sum eps} * prior.
double trivial_sequential_bound(double prior,
                                std::span<const double> epsilons);

struct ErrorBoundResult {
  double meters = 0.0;
  bool degenerate = false;  // hull of the set had no area
};

// Lower bound on the expected release error implied by the set geometry:
// (1/eps) * sqrt(Area(sensitivity hull of set plus true location)), with the
// order constant taken as 1. Degenerate hulls report 0 and are flagged.
ErrorBoundResult error_lower_bound(std::span<const PlanarPoint> set_with_true,
                                   double epsilon);  // InvalidEpsilon

// Inversion of the bound above: the epsilon achieving a target error.
double solve_epsilon_for_error(std::span<const PlanarPoint> set_with_true,
                               double target_error);  // DegenerateBody

// 1-based index of the first cumulative bound value exceeding 1, if any.
std::optional<std::size_t> steps_until_identifiable(
    std::span<const double> bounds);

// Adversary link weights Pr[l -> target] per (cell, target). A broadcast
// table stores one row shared by every cell (timing-only models).
class LinkWeights {
 public:
  enum class Kind { trajectory, poi };

  static LinkWeights dense(Kind kind, std::size_t cells, std::size_t targets);
  static LinkWeights broadcast(Kind kind, std::vector<double> row);

  Kind kind() const { return kind_; }
  std::size_t targets() const { return targets_; }
  bool is_broadcast() const { return broadcast_; }

  double at(std::size_t cell, std::size_t target) const;
  void set(std::size_t cell, std::size_t target, double w);  // InvalidParams

  // Weights of one target over the given cells (the excluded-set view used
  // for theta).
  std::vector<double> column(std::span<const std::uint32_t> cells,
                             std::size_t target) const;

 private:
  LinkWeights(Kind kind, std::size_t cells, std::size_t targets,
              bool broadcast);
  Kind kind_;
  std::size_t cells_;
  std::size_t targets_;
  bool broadcast_;
  std::vector<double> w_;  // cell-major
};

// Per-target accumulation of per-step parameters with the composed value
// kept in sync.
struct PrivacyLedger {
  LinkWeights::Kind target_kind = LinkWeights::Kind::trajectory;
  std::string target_id;
  std::vector<PrivacyParams> per_step;
  ComposedBound cumulative;

  void append(const PrivacyParams& step);
};

}  // namespace locpriv

#endif  // LOCPRIV_ACCOUNTING_HPP_
