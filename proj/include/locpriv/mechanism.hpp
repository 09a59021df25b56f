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

#ifndef LOCPRIV_MECHANISM_HPP_
#define LOCPRIV_MECHANISM_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "locpriv/belief.hpp"
#include "locpriv/geometry.hpp"
#include "locpriv/random.hpp"

namespace locpriv {

// The candidate cells a release is made indistinguishable within, together
// with the prior mass they actually cover. Over a discrete prior the
// requested mass is rarely attainable exactly, so the minimal superset is
// taken and the achieved mass recorded; downstream bounds always use the
// achieved value.
struct ObfuscationSet {
  std::vector<std::uint32_t> cell_ids;  // ascending
  double achieved_delta = 0.0;
  double requested_delta = 0.0;

  bool contains(std::uint32_t id) const;
};

// Smallest set of cells, taken in descending prior order (ties by ascending
// cell id), whose mass reaches the requested delta in (0, 1].
ObfuscationSet build_delta_set(const BeliefState& prior,
                               double requested_delta);  // InvalidDelta

// Identity when the true location's cell is in the set; otherwise the set's
// nearest cell center (ties resolved to the lowest cell id).
PlanarPoint surrogate(PlanarPoint true_loc, const ObfuscationSet& set,
                      const LocationGrid& grid);  // EmptySet

// One released location together with the geometry needed to evaluate its
// density afterwards.
struct ReleaseRecord {
  int timestep = 0;
  PlanarPoint z;
  double epsilon = 0.0;
  ObfuscationSet set;
  bool surrogate_used = false;
  Polygon hull;  // sensitivity hull of set centers plus the (resolved) input
  std::optional<IsotropicTransform> transform;  // engaged iff hull is proper
};

// Planar isotropic release, reusable across draws: the sensitivity hull,
// its isotropic transform and the body sampler are built once.
//
// Proper hull K: with T its isotropic transform, the output is
// T^-1(T(loc) + r*b), r ~ Gamma(shape 3, rate epsilon), b uniform over T(K).
// Segment hull: 1-D analogue along the segment with r ~ Gamma(shape 2, rate
// epsilon) scaled by the half length and a symmetric sign. Point hull: the
// input is returned unchanged.
class ReleaseSampler {
 public:
  ReleaseSampler(PlanarPoint loc, const ObfuscationSet& set,
                 const LocationGrid& grid,
                 double epsilon);  // InvalidEpsilon, EmptySet

  // Same mechanism against explicit candidate points (the audit path).
  ReleaseSampler(PlanarPoint loc, std::span<const PlanarPoint> set_points,
                 double epsilon);

  PlanarPoint draw(RandomStream& rng) const;
  ReleaseRecord release(RandomStream& rng, int timestep = 0) const;

  const Polygon& hull() const { return hull_; }
  const std::optional<IsotropicTransform>& transform() const {
    return transform_;
  }

 private:
  PlanarPoint loc_;
  double epsilon_;
  ObfuscationSet set_;
  Polygon hull_;
  std::optional<IsotropicTransform> transform_;
  std::optional<PolygonSampler> body_;  // over the transformed hull
  PlanarPoint loc_iso_;                 // proper case
  PlanarPoint seg_dir_;                 // segment case, unit
  double seg_half_ = 0.0;
};

ReleaseRecord pim_release(PlanarPoint loc, const ObfuscationSet& set,
                          const LocationGrid& grid, double epsilon,
                          RandomStream& rng);

// Baseline: indistinguishability over every positive-prior cell (delta = 1).
// The location is surrogate-resolved into the set first.
ReleaseRecord full_set_release(PlanarPoint loc, const BeliefState& prior,
                               const LocationGrid& grid, double epsilon,
                               RandomStream& rng);

// Closed-form density of a recorded release, evaluated for any candidate
// input. For a proper hull this is
//   |det T| * eps^2 / (2 Area(T(K))) * exp(-eps * gauge_{T(K)}(T(z - l)))
// expressed in original coordinates; it integrates to 1 over the plane.
// Segment hulls use the 1-D analogue (density per meter along the release
// line); point hulls degenerate to an indicator. This is the exact law the
// Bayesian adversary in the inference loop consumes.
class ReleaseDensity {
 public:
  explicit ReleaseDensity(const ReleaseRecord& record);

  double at(PlanarPoint z, PlanarPoint candidate) const;

  // Densities of one observed z under many candidates (batched kernels).
  void at_batch(PlanarPoint z, std::span<const PlanarPoint> candidates,
                std::span<double> out) const;

 private:
  PolyKind kind_;
  double epsilon_;
  IsotropicTransform t_;
  std::optional<GaugeTable> gauge_;
  double coef_ = 0.0;     // value at zero displacement
  PlanarPoint seg_dir_;   // segment case
  double seg_half_ = 0.0;
  double point_tol_ = 0.0;
};

double release_density(PlanarPoint z, PlanarPoint candidate,
                       const ReleaseRecord& record);

// Largest log density ratio between any two candidates over a dense z grid
// spanning span_factor times the hull extent. Analytical counterpart of the
// Monte-Carlo audit; never exceeds epsilon up to numerics.
double analytic_ldp_max_log_ratio(std::span<const PlanarPoint> candidates,
                                  double epsilon, int grid_n = 200,
                                  double span_factor = 3.0);

inline BeliefState restrict_to_set(const BeliefState& belief,
                                   const ObfuscationSet& set) {
  return restrict_to_set(belief, std::span<const std::uint32_t>(set.cell_ids));
}

}  // namespace locpriv

#endif  // LOCPRIV_MECHANISM_HPP_
