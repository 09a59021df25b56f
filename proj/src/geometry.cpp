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

#include "locpriv/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "locpriv/kernels/kernels.hpp"

namespace locpriv {
namespace {

// Collinearity tolerance for hull construction. Exact for integer inputs;
// at city scale it only merges vertices that are collinear to rounding.
constexpr double kCrossTol = 1e-12;

bool lex_less(PlanarPoint a, PlanarPoint b) {
  return a.x < b.x || (a.x == b.x && a.y < b.y);
}

std::vector<PlanarPoint> dedup_sorted(std::span<const PlanarPoint> points) {
  std::vector<PlanarPoint> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

// Rotate a CCW vertex ring so it starts at the lexicographically smallest
// vertex; gives hulls a canonical representation.
void canonicalize(std::vector<PlanarPoint>& ring) {
  auto it = std::min_element(ring.begin(), ring.end(), lex_less);
  std::rotate(ring.begin(), it, ring.end());
}

}  // namespace

void validate_point(PlanarPoint p) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y) ||
      std::abs(p.x) >= kMaxCoordinate || std::abs(p.y) >= kMaxCoordinate) {
    throw OutOfRange("coordinate outside the planar frame");
  }
}

Polygon::Polygon(std::vector<PlanarPoint> vertices)
    : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw EmptyInput("polygon needs at least one vertex");
  for (const auto& v : vertices_) validate_point(v);
  if (vertices_.size() == 1) {
    kind_ = PolyKind::point;
    return;
  }
  if (vertices_.size() == 2) {
    if (vertices_[0] == vertices_[1])
      throw DegenerateBody("segment endpoints coincide");
    kind_ = PolyKind::segment;
    return;
  }
  kind_ = PolyKind::proper;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double c = cross(vertices_[i], vertices_[(i + 1) % n],
                           vertices_[(i + 2) % n]);
    if (c <= kCrossTol)
      throw DegenerateBody("vertices not in strictly convex CCW position");
  }
}

bool Polygon::contains(PlanarPoint p, double eps) const {
  switch (kind_) {
    case PolyKind::point:
      return distance(p, vertices_[0]) <= eps;
    case PolyKind::segment: {
      const PlanarPoint a = vertices_[0], b = vertices_[1];
      const PlanarPoint d = b - a;
      const double len2 = dot(d, d);
      const double t = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
      return distance(p, a + t * d) <= eps;
    }
    case PolyKind::proper: {
      const std::size_t n = vertices_.size();
      for (std::size_t i = 0; i < n; ++i) {
        if (cross(vertices_[i], vertices_[(i + 1) % n], p) < -eps) return false;
      }
      return true;
    }
  }
  return false;
}

Polygon convex_hull(std::span<const PlanarPoint> points) {
  if (points.empty()) throw EmptyInput("convex_hull of no points");
  for (const auto& p : points) validate_point(p);
  std::vector<PlanarPoint> pts = dedup_sorted(points);
  const std::size_t n = pts.size();
  if (n == 1) return Polygon({pts[0]});
  if (n == 2) return Polygon({pts[0], pts[1]});

  // Andrew's monotone chain; strict turns only, so collinear interior
  // vertices drop out.
  std::vector<PlanarPoint> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= kCrossTol) --k;
    hull[k++] = pts[i];
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = n - 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= kCrossTol)
      --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);  // last point equals the first

  if (hull.size() == 2) return Polygon({hull[0], hull[1]});
  canonicalize(hull);
  return Polygon(std::move(hull));
}

Polygon sensitivity_hull(std::span<const PlanarPoint> locations) {
  if (locations.empty()) throw EmptyInput("sensitivity_hull of no locations");
  std::vector<PlanarPoint> diffs;
  diffs.reserve(locations.size() * locations.size());
  for (const auto& a : locations)
    for (const auto& b : locations) diffs.push_back(a - b);
  return convex_hull(diffs);
}

double polygon_area(const Polygon& poly) {
  if (!poly.proper()) return 0.0;
  const auto& v = poly.vertices();
  const std::size_t n = v.size();
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const PlanarPoint& a = v[i];
    const PlanarPoint& b = v[(i + 1) % n];
    twice += a.x * b.y - b.x * a.y;
  }
  return 0.5 * twice;
}

PlanarPoint polygon_centroid(const Polygon& poly) {
  const auto& v = poly.vertices();
  switch (poly.kind()) {
    case PolyKind::point:
      return v[0];
    case PolyKind::segment:
      return 0.5 * (v[0] + v[1]);
    case PolyKind::proper:
      break;
  }
  const std::size_t n = v.size();
  double twice = 0.0;
  double cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const PlanarPoint& a = v[i];
    const PlanarPoint& b = v[(i + 1) % n];
    const double w = a.x * b.y - b.x * a.y;
    twice += w;
    cx += (a.x + b.x) * w;
    cy += (a.y + b.y) * w;
  }
  return {cx / (3.0 * twice), cy / (3.0 * twice)};
}

Mat2 Mat2::inverse() const {
  const double dt = det();
  if (dt == 0.0) throw DegenerateBody("singular 2x2 matrix");
  return {d / dt, -b / dt, -c / dt, a / dt};
}

IsotropicTransform isotropic_transform(const Polygon& poly) {
  if (!poly.proper())
    throw DegenerateBody("isotropic transform needs a proper polygon");

  const PlanarPoint mu = polygon_centroid(poly);
  const auto& v = poly.vertices();
  const std::size_t n = v.size();

  // Second moment of the uniform distribution about the centroid, aggregated
  // over the fan (v0, vi, vi+1). For a triangle with vertices p, q, r and
  // s = p + q + r, E[xx^T] = (pp^T + qq^T + rr^T + ss^T) / 12.
  double sxx = 0.0, sxy = 0.0, syy = 0.0, total = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const PlanarPoint p = v[0] - mu;
    const PlanarPoint q = v[i] - mu;
    const PlanarPoint r = v[i + 1] - mu;
    const double area = 0.5 * cross(p, q, r);
    const PlanarPoint s = p + q + r;
    const double exx =
        (p.x * p.x + q.x * q.x + r.x * r.x + s.x * s.x) / 12.0;
    const double exy =
        (p.x * p.y + q.x * q.y + r.x * r.y + s.x * s.y) / 12.0;
    const double eyy =
        (p.y * p.y + q.y * q.y + r.y * r.y + s.y * s.y) / 12.0;
    sxx += area * exx;
    sxy += area * exy;
    syy += area * eyy;
    total += area;
  }
  // Vertices were shifted by the centroid, so the mean term vanishes.
  double cxx = sxx / total;
  double cxy = sxy / total;
  double cyy = syy / total;

  const double det_cov = cxx * cyy - cxy * cxy;
  if (!(det_cov > 0.0))
    throw DegenerateBody("covariance not positive definite");

  // sqrt(C) for SPD 2x2: (C + sqrt(det C) I) / sqrt(tr C + 2 sqrt(det C)).
  const double sd = std::sqrt(det_cov);
  const double denom = std::sqrt(cxx + cyy + 2.0 * sd);
  const Mat2 root{(cxx + sd) / denom, cxy / denom, cxy / denom,
                  (cyy + sd) / denom};
  // forward = det(C)^(1/4) * C^(-1/2) has unit determinant: the image is in
  // isotropic position and the area is preserved.
  const double scale = std::sqrt(std::sqrt(det_cov));
  Mat2 inv_root = root.inverse();
  const Mat2 forward{inv_root.a * scale, inv_root.b * scale,
                     inv_root.c * scale, inv_root.d * scale};
  return IsotropicTransform(forward, forward.inverse(), mu);
}

Polygon transform_polygon(const Polygon& poly, const IsotropicTransform& t) {
  std::vector<PlanarPoint> out;
  out.reserve(poly.size());
  for (const auto& v : poly.vertices()) out.push_back(t.to_iso(v));
  if (poly.proper()) {
    // A positive-determinant linear map preserves convexity and orientation.
    canonicalize(out);
  }
  return Polygon(std::move(out));
}

GaugeTable::GaugeTable(const Polygon& poly) {
  if (!poly.proper()) throw DegenerateBody("gauge needs a proper polygon");
  const auto& v = poly.vertices();
  const std::size_t n = v.size();
  double scale = 0.0;
  for (const auto& p : v) scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
  ax_.reserve(n);
  ay_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const PlanarPoint a = v[i];
    const PlanarPoint b = v[(i + 1) % n];
    // Outward normal of the CCW edge a->b.
    const PlanarPoint nrm{b.y - a.y, a.x - b.x};
    const double h = dot(nrm, a);  // support value; positive iff origin inside
    if (!(h > 1e-12 * norm(nrm) * std::max(scale, 1.0)))
      throw OriginOutside("origin not strictly inside the polygon");
    ax_.push_back(nrm.x / h);
    ay_.push_back(nrm.y / h);
  }
}

double GaugeTable::eval(PlanarPoint v) const {
  double g = 0.0;
  for (std::size_t j = 0; j < ax_.size(); ++j) {
    const double s = ax_[j] * v.x + ay_[j] * v.y;
    if (s > g) g = s;
  }
  return g;
}

void GaugeTable::eval_batch(const double* vx, const double* vy, std::size_t n,
                            double* out) const {
  kernels::ops().gauge_max(ax_.data(), ay_.data(), ax_.size(), vx, vy, n, out);
}

double gauge(const Polygon& poly, PlanarPoint v) {
  return GaugeTable(poly).eval(v);
}

PolygonSampler::PolygonSampler(const Polygon& poly) {
  if (!poly.proper())
    throw DegenerateBody("uniform sampling needs a proper polygon");
  vertices_ = poly.vertices();
  const std::size_t n = vertices_.size();
  cumulative_area_.reserve(n - 2);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    total_area_ +=
        0.5 * cross(vertices_[0], vertices_[i], vertices_[i + 1]);
    cumulative_area_.push_back(total_area_);
  }
}

PlanarPoint PolygonSampler::sample(RandomStream& rng) const {
  const double pick = rng.uniform() * total_area_;
  const auto it = std::lower_bound(cumulative_area_.begin(),
                                   cumulative_area_.end(), pick);
  const std::size_t tri = std::min<std::size_t>(
      static_cast<std::size_t>(it - cumulative_area_.begin()),
      cumulative_area_.size() - 1);
  double u = rng.uniform();
  double w = rng.uniform();
  if (u + w > 1.0) {
    u = 1.0 - u;
    w = 1.0 - w;
  }
  const PlanarPoint a = vertices_[0];
  const PlanarPoint b = vertices_[tri + 1];
  const PlanarPoint c = vertices_[tri + 2];
  return a + u * (b - a) + w * (c - a);
}

PlanarPoint sample_uniform(const Polygon& poly, RandomStream& rng) {
  return PolygonSampler(poly).sample(rng);
}

}  // namespace locpriv
