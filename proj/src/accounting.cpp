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

#include "locpriv/accounting.hpp"

#include <algorithm>
#include <cmath>

namespace locpriv {

void PrivacyParams::validate() const {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
    throw InvalidParams("epsilon must be finite and >= 0");
  if (!(delta > 0.0) || delta > 1.0)
    throw InvalidParams("delta must be in (0, 1]");
  if (!std::isfinite(theta)) throw InvalidParams("theta must be finite");
}

double ComposedBound::bound(double prior) const {
  return delta_multiplier * std::exp(epsilon_sum) * prior + theta;
}

double ComposedBound::bound_clipped(double prior) const {
  return std::clamp(bound(prior), 0.0, 1.0);
}

double location_bound(double prior, double epsilon, double delta) {
  if (!(prior >= 0.0) || prior > 1.0)
    throw InvalidParams("prior must be in [0, 1]");
  PrivacyParams{epsilon, delta, 0.0}.validate();
  return std::exp(epsilon) / delta * prior;
}

double theta_slack(std::span<const double> excluded_weights, double delta) {
  if (!(delta > 0.0) || delta > 1.0)
    throw InvalidParams("delta must be in (0, 1]");
  if (excluded_weights.empty()) return 0.0;
  double min_w = excluded_weights[0];
  for (double w : excluded_weights) {
    if (!(w >= 0.0) || w > 1.0)
      throw InvalidParams("link weights must be in [0, 1]");
    min_w = std::min(min_w, w);
  }
  return (delta - 1.0) * min_w;
}

double target_bound(double prior, const PrivacyParams& params) {
  if (!(prior >= 0.0) || prior > 1.0)
    throw InvalidParams("prior must be in [0, 1]");
  params.validate();
  return std::exp(params.epsilon) / params.delta * prior + params.theta;
}

ComposedBound compose(std::span<const PrivacyParams> steps) {
  if (steps.empty()) throw EmptyList("nothing to compose");
  ComposedBound out;
  for (const auto& s : steps) {
    s.validate();
    const double factor = std::exp(s.epsilon) / s.delta;
    // theta_[k] = theta_k + theta_[k-1] * delta_k^-1 * e^{eps_k}
    out.theta = s.theta + out.theta * factor;
    out.epsilon_sum += s.epsilon;
    out.delta_multiplier /= s.delta;
  }
  return out;
}

double trivial_sequential_bound(double prior,
                                std::span<const double> epsilons) {
  if (!(prior >= 0.0) || prior > 1.0)
    throw InvalidParams("prior must be in [0, 1]");
  double sum = 0.0;
  for (double e : epsilons) {
    if (!(e >= 0.0) || !std::isfinite(e))
      throw InvalidParams("epsilon must be finite and >= 0");
    sum += e;
  }
  return std::exp(sum) * prior;
}

ErrorBoundResult error_lower_bound(std::span<const PlanarPoint> set_with_true,
                                   double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidEpsilon("epsilon must be positive");
  if (set_with_true.empty()) throw EmptyInput("empty location set");
  const Polygon hull = sensitivity_hull(set_with_true);
  if (!hull.proper()) return {0.0, true};
  return {std::sqrt(polygon_area(hull)) / epsilon, false};
}

double solve_epsilon_for_error(std::span<const PlanarPoint> set_with_true,
                               double target_error) {
  if (!(target_error > 0.0))
    throw InvalidParams("target error must be positive");
  if (set_with_true.empty()) throw EmptyInput("empty location set");
  const Polygon hull = sensitivity_hull(set_with_true);
  if (!hull.proper())
    throw DegenerateBody("error bound inversion needs a proper hull");
  return std::sqrt(polygon_area(hull)) / target_error;
}

std::optional<std::size_t> steps_until_identifiable(
    std::span<const double> bounds) {
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    if (bounds[i] > 1.0) return i + 1;
  }
  return std::nullopt;
}

LinkWeights::LinkWeights(Kind kind, std::size_t cells, std::size_t targets,
                         bool broadcast)
    : kind_(kind),
      cells_(cells),
      targets_(targets),
      broadcast_(broadcast),
      w_(cells * targets, 0.0) {}

LinkWeights LinkWeights::dense(Kind kind, std::size_t cells,
                               std::size_t targets) {
  if (cells == 0 || targets == 0)
    throw InvalidParams("link weights need cells and targets");
  return LinkWeights(kind, cells, targets, false);
}

LinkWeights LinkWeights::broadcast(Kind kind, std::vector<double> row) {
  if (row.empty()) throw InvalidParams("broadcast row must be non-empty");
  LinkWeights lw(kind, 1, row.size(), true);
  for (std::size_t t = 0; t < row.size(); ++t) lw.set(0, t, row[t]);
  return lw;
}

double LinkWeights::at(std::size_t cell, std::size_t target) const {
  if (broadcast_) cell = 0;
  if (cell >= cells_ || target >= targets_)
    throw OutOfRange("link weight index out of range");
  return w_[cell * targets_ + target];
}

void LinkWeights::set(std::size_t cell, std::size_t target, double w) {
  if (broadcast_) cell = 0;
  if (cell >= cells_ || target >= targets_)
    throw OutOfRange("link weight index out of range");
  if (!(w >= 0.0) || w > 1.0)
    throw InvalidParams("link weights must be in [0, 1]");
  w_[cell * targets_ + target] = w;
}

std::vector<double> LinkWeights::column(std::span<const std::uint32_t> cells,
                                        std::size_t target) const {
  std::vector<double> out;
  out.reserve(cells.size());
  for (std::uint32_t c : cells) out.push_back(at(c, target));
  return out;
}

void PrivacyLedger::append(const PrivacyParams& step) {
  step.validate();
  per_step.push_back(step);
  cumulative = compose(per_step);
}

}  // namespace locpriv
