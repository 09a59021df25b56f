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

#include "locpriv/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "locpriv/kernels/kernels.hpp"

namespace locpriv {
namespace {

std::vector<PlanarPoint> set_centers(const ObfuscationSet& set,
                                     const LocationGrid& grid) {
  std::vector<PlanarPoint> pts;
  pts.reserve(set.cell_ids.size());
  for (std::uint32_t id : set.cell_ids) pts.push_back(grid.center(id));
  return pts;
}

}  // namespace

bool ObfuscationSet::contains(std::uint32_t id) const {
  return std::binary_search(cell_ids.begin(), cell_ids.end(), id);
}

ObfuscationSet build_delta_set(const BeliefState& prior,
                               double requested_delta) {
  if (!(requested_delta > 0.0) || requested_delta > 1.0)
    throw InvalidDelta("requested delta must be in (0, 1]");
  prior.validate();

  std::vector<std::uint32_t> order(prior.probs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (prior.probs[a] != prior.probs[b])
      return prior.probs[a] > prior.probs[b];
    return a < b;
  });

  ObfuscationSet set;
  set.requested_delta = requested_delta;
  double mass = 0.0;
  for (std::uint32_t id : order) {
    if (prior.probs[id] <= 0.0) break;  // only positive-mass cells qualify
    set.cell_ids.push_back(id);
    mass += prior.probs[id];
    if (mass >= requested_delta - 1e-12) break;
  }
  set.achieved_delta = std::min(mass, 1.0);
  std::sort(set.cell_ids.begin(), set.cell_ids.end());
  return set;
}

PlanarPoint surrogate(PlanarPoint true_loc, const ObfuscationSet& set,
                      const LocationGrid& grid) {
  if (set.cell_ids.empty()) throw EmptySet("empty obfuscation set");
  if (set.contains(grid.nearest_cell(true_loc))) return true_loc;
  std::vector<double> xs, ys;
  xs.reserve(set.cell_ids.size());
  ys.reserve(set.cell_ids.size());
  for (std::uint32_t id : set.cell_ids) {
    const PlanarPoint c = grid.center(id);
    xs.push_back(c.x);
    ys.push_back(c.y);
  }
  // cell_ids ascending + first-wins argmin = lowest-id tie break.
  const std::size_t k = kernels::ops().argmin_dist2(
      xs.data(), ys.data(), xs.size(), true_loc.x, true_loc.y, nullptr);
  return grid.center(set.cell_ids[k]);
}

ReleaseSampler::ReleaseSampler(PlanarPoint loc, const ObfuscationSet& set,
                               const LocationGrid& grid, double epsilon)
    : ReleaseSampler(loc, set_centers(set, grid), epsilon) {
  set_ = set;
}

ReleaseSampler::ReleaseSampler(PlanarPoint loc,
                               std::span<const PlanarPoint> set_points,
                               double epsilon)
    : loc_(loc), epsilon_(epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw InvalidEpsilon("epsilon must be positive and finite");
  if (set_points.empty()) throw EmptySet("empty obfuscation set");

  std::vector<PlanarPoint> pts(set_points.begin(), set_points.end());
  pts.push_back(loc);
  hull_ = sensitivity_hull(pts);

  switch (hull_.kind()) {
    case PolyKind::proper: {
      transform_ = isotropic_transform(hull_);
      body_.emplace(transform_polygon(hull_, *transform_));
      loc_iso_ = transform_->to_iso(loc);
      break;
    }
    case PolyKind::segment: {
      const PlanarPoint a = hull_.vertices()[0];
      const PlanarPoint b = hull_.vertices()[1];
      const double len = distance(a, b);
      seg_dir_ = (1.0 / len) * (b - a);
      seg_half_ = 0.5 * len;
      break;
    }
    case PolyKind::point:
      break;
  }
}

PlanarPoint ReleaseSampler::draw(RandomStream& rng) const {
  switch (hull_.kind()) {
    case PolyKind::proper: {
      const double r = rng.gamma_int(3, epsilon_);
      const PlanarPoint b = body_->sample(rng);
      return transform_->from_iso(loc_iso_ + r * b);
    }
    case PolyKind::segment: {
      const double r = rng.gamma_int(2, epsilon_);
      const double u = rng.uniform(-1.0, 1.0);
      return loc_ + (r * u * seg_half_) * seg_dir_;
    }
    case PolyKind::point:
      return loc_;
  }
  return loc_;
}

ReleaseRecord ReleaseSampler::release(RandomStream& rng, int timestep) const {
  ReleaseRecord rec;
  rec.timestep = timestep;
  rec.z = draw(rng);
  rec.epsilon = epsilon_;
  rec.set = set_;
  rec.hull = hull_;
  rec.transform = transform_;
  return rec;
}

ReleaseRecord pim_release(PlanarPoint loc, const ObfuscationSet& set,
                          const LocationGrid& grid, double epsilon,
                          RandomStream& rng) {
  return ReleaseSampler(loc, set, grid, epsilon).release(rng);
}

ReleaseRecord full_set_release(PlanarPoint loc, const BeliefState& prior,
                               const LocationGrid& grid, double epsilon,
                               RandomStream& rng) {
  const ObfuscationSet set = build_delta_set(prior, 1.0);
  const PlanarPoint resolved = surrogate(loc, set, grid);
  ReleaseRecord rec =
      ReleaseSampler(resolved, set, grid, epsilon).release(rng);
  rec.surrogate_used = !(resolved == loc);
  return rec;
}

ReleaseDensity::ReleaseDensity(const ReleaseRecord& record)
    : kind_(record.hull.kind()), epsilon_(record.epsilon) {
  switch (kind_) {
    case PolyKind::proper: {
      t_ = *record.transform;
      const Polygon iso = transform_polygon(record.hull, t_);
      gauge_.emplace(iso);
      const double jac = std::abs(t_.forward().det());
      coef_ = jac * epsilon_ * epsilon_ / (2.0 * polygon_area(iso));
      break;
    }
    case PolyKind::segment: {
      const PlanarPoint a = record.hull.vertices()[0];
      const PlanarPoint b = record.hull.vertices()[1];
      const double len = distance(a, b);
      seg_dir_ = (1.0 / len) * (b - a);
      seg_half_ = 0.5 * len;
      coef_ = epsilon_ / (2.0 * seg_half_);
      break;
    }
    case PolyKind::point: {
      point_tol_ = 1e-9 * std::max(1.0, norm(record.z));
      break;
    }
  }
}

double ReleaseDensity::at(PlanarPoint z, PlanarPoint candidate) const {
  switch (kind_) {
    case PolyKind::proper: {
      const PlanarPoint v = t_.to_iso(z) - t_.to_iso(candidate);
      return coef_ * std::exp(-epsilon_ * gauge_->eval(v));
    }
    case PolyKind::segment: {
      const double d = dot(z - candidate, seg_dir_);
      return coef_ * std::exp(-epsilon_ * std::abs(d) / seg_half_);
    }
    case PolyKind::point:
      return distance(z, candidate) <= point_tol_ ? 1.0 : 0.0;
  }
  return 0.0;
}

void ReleaseDensity::at_batch(PlanarPoint z,
                              std::span<const PlanarPoint> candidates,
                              std::span<double> out) const {
  const std::size_t n = candidates.size();
  if (out.size() != n) throw DimensionMismatch("output span size mismatch");
  if (kind_ != PolyKind::proper) {
    for (std::size_t i = 0; i < n; ++i) out[i] = at(z, candidates[i]);
    return;
  }
  std::vector<double> cx(n), cy(n), vx(n), vy(n);
  for (std::size_t i = 0; i < n; ++i) {
    cx[i] = candidates[i].x;
    cy[i] = candidates[i].y;
  }
  // v_i = T(z) - T(cand_i); both share the same affine map, so the centers
  // cancel and v_i = F z - F cand_i.
  const Mat2& f = t_.forward();
  const double m[4] = {-f.a, -f.b, -f.c, -f.d};
  const PlanarPoint ziso{f.a * z.x + f.b * z.y, f.c * z.x + f.d * z.y};
  kernels::ops().affine2(m, ziso.x, ziso.y, cx.data(), cy.data(), n, vx.data(),
                         vy.data());
  gauge_->eval_batch(vx.data(), vy.data(), n, out.data());
  for (std::size_t i = 0; i < n; ++i)
    out[i] = coef_ * std::exp(-epsilon_ * out[i]);
}

double release_density(PlanarPoint z, PlanarPoint candidate,
                       const ReleaseRecord& record) {
  return ReleaseDensity(record).at(z, candidate);
}

double analytic_ldp_max_log_ratio(std::span<const PlanarPoint> candidates,
                                  double epsilon, int grid_n,
                                  double span_factor) {
  if (candidates.empty()) throw EmptyInput("no candidates");
  if (!(epsilon > 0.0)) throw InvalidEpsilon("epsilon must be positive");
  if (candidates.size() == 1) return 0.0;

  const Polygon hull = sensitivity_hull(candidates);
  if (hull.kind() == PolyKind::point) return 0.0;

  double min_x = candidates[0].x, max_x = candidates[0].x;
  double min_y = candidates[0].y, max_y = candidates[0].y;
  for (const auto& c : candidates) {
    min_x = std::min(min_x, c.x);
    max_x = std::max(max_x, c.x);
    min_y = std::min(min_y, c.y);
    max_y = std::max(max_y, c.y);
  }

  if (hull.kind() == PolyKind::segment) {
    // Collinear candidates: scan the line coordinate.
    const PlanarPoint a = hull.vertices()[0];
    const PlanarPoint b = hull.vertices()[1];
    const double len = distance(a, b);
    const PlanarPoint dir = (1.0 / len) * (b - a);
    const double half = 0.5 * len;
    std::vector<double> ts;
    ts.reserve(candidates.size());
    for (const auto& c : candidates) ts.push_back(dot(c, dir));
    const double lo = *std::min_element(ts.begin(), ts.end()) -
                      span_factor * len;
    const double hi = *std::max_element(ts.begin(), ts.end()) +
                      span_factor * len;
    double worst = 0.0;
    for (int g = 0; g < grid_n; ++g) {
      const double t = lo + (hi - lo) * g / (grid_n - 1);
      double gmin = std::numeric_limits<double>::infinity(), gmax = 0.0;
      for (double ti : ts) {
        const double gg = std::abs(t - ti) / half;
        gmin = std::min(gmin, gg);
        gmax = std::max(gmax, gg);
      }
      worst = std::max(worst, epsilon * (gmax - gmin));
    }
    return worst;
  }

  const IsotropicTransform t = isotropic_transform(hull);
  const GaugeTable table(transform_polygon(hull, t));

  const double ext = std::max(max_x - min_x, max_y - min_y);
  const double pad = span_factor * ext;
  const std::size_t total = static_cast<std::size_t>(grid_n) * grid_n;
  std::vector<double> zx(total), zy(total);
  std::size_t k = 0;
  for (int gy = 0; gy < grid_n; ++gy) {
    const double y = min_y - pad + (max_y - min_y + 2 * pad) * gy / (grid_n - 1);
    for (int gx = 0; gx < grid_n; ++gx, ++k) {
      zx[k] = min_x - pad + (max_x - min_x + 2 * pad) * gx / (grid_n - 1);
      zy[k] = y;
    }
  }
  // Map every z through the forward matrix once.
  const Mat2& f = t.forward();
  const double m[4] = {f.a, f.b, f.c, f.d};
  kernels::ops().affine2(m, 0.0, 0.0, zx.data(), zy.data(), total, zx.data(),
                         zy.data());

  std::vector<double> gmin(total, std::numeric_limits<double>::infinity());
  std::vector<double> gmax(total, 0.0);
  std::vector<double> vx(total), vy(total), g(total);
  for (const auto& cand : candidates) {
    const PlanarPoint ciso{f.a * cand.x + f.b * cand.y,
                           f.c * cand.x + f.d * cand.y};
    for (std::size_t i = 0; i < total; ++i) {
      vx[i] = zx[i] - ciso.x;
      vy[i] = zy[i] - ciso.y;
    }
    table.eval_batch(vx.data(), vy.data(), total, g.data());
    for (std::size_t i = 0; i < total; ++i) {
      gmin[i] = std::min(gmin[i], g[i]);
      gmax[i] = std::max(gmax[i], g[i]);
    }
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < total; ++i)
    worst = std::max(worst, epsilon * (gmax[i] - gmin[i]));
  return worst;
}

}  // namespace locpriv
