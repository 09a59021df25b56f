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

#ifndef LOCPRIV_GEOMETRY_HPP_
#define LOCPRIV_GEOMETRY_HPP_

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "locpriv/errors.hpp"
#include "locpriv/random.hpp"

namespace locpriv {

// Coordinates live in a local planar frame, in meters. City scale only:
// |x|, |y| < 10^7.
struct PlanarPoint {
  double x = 0.0;
  double y = 0.0;

  friend PlanarPoint operator+(PlanarPoint a, PlanarPoint b) {
    return {a.x + b.x, a.y + b.y};
  }
  friend PlanarPoint operator-(PlanarPoint a, PlanarPoint b) {
    return {a.x - b.x, a.y - b.y};
  }
  friend PlanarPoint operator*(double s, PlanarPoint p) {
    return {s * p.x, s * p.y};
  }
  friend bool operator==(PlanarPoint a, PlanarPoint b) {
    return a.x == b.x && a.y == b.y;
  }
};

inline double dot(PlanarPoint a, PlanarPoint b) { return a.x * b.x + a.y * b.y; }
inline double norm(PlanarPoint p) { return std::hypot(p.x, p.y); }
inline double distance(PlanarPoint a, PlanarPoint b) { return norm(a - b); }

// Cross product of (b - a) x (c - a); positive when a->b->c turns left.
inline double cross(PlanarPoint a, PlanarPoint b, PlanarPoint c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

// Largest coordinate magnitude accepted by the planar frame.
inline constexpr double kMaxCoordinate = 1e7;

void validate_point(PlanarPoint p);  // throws OutOfRange

enum class PolyKind { proper, segment, point };

// Convex polygon (or its degenerate forms). A proper polygon stores
// strictly convex vertices in counter-clockwise order starting from the
// lexicographically smallest; a segment stores its two distinct endpoints;
// a point stores one vertex. Collinear candidate sets are legal inputs
// throughout the library, so the degenerate kinds are first-class values
// rather than errors.
class Polygon {
 public:
  // Degenerate point at the origin.
  Polygon() : vertices_{{0.0, 0.0}}, kind_(PolyKind::point) {}

  // Validates and classifies. Proper input must be strictly convex CCW.
  explicit Polygon(std::vector<PlanarPoint> vertices);

  PolyKind kind() const { return kind_; }
  const std::vector<PlanarPoint>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }

  bool proper() const { return kind_ == PolyKind::proper; }

  // True if p lies inside or on the boundary (proper polygons only;
  // segment/point use a distance tolerance of eps).
  bool contains(PlanarPoint p, double eps = 1e-9) const;

 private:
  std::vector<PlanarPoint> vertices_;
  PolyKind kind_;
};

// Smallest convex set containing the input points. Collinear interior
// vertices are removed; duplicate points are merged. Monotone chain with a
// fixed cross-product tolerance of 1e-12, exact for integer coordinates.
Polygon convex_hull(std::span<const PlanarPoint> points);  // EmptyInput

// Hull of all pairwise differences x_i - x_j (i = j included, so the origin
// is always a member). Origin-symmetric by construction.
Polygon sensitivity_hull(std::span<const PlanarPoint> locations);  // EmptyInput

// Shoelace area; zero for segment and point kinds.
double polygon_area(const Polygon& poly);

PlanarPoint polygon_centroid(const Polygon& poly);

struct Mat2 {
  // Row-major: | a b |
  //            | c d |
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  PlanarPoint apply(PlanarPoint p) const {
    return {a * p.x + b * p.y, c * p.x + d * p.y};
  }
  double det() const { return a * d - b * c; }
  Mat2 inverse() const;
  friend Mat2 operator*(const Mat2& l, const Mat2& r) {
    return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d,
            l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
  }
};

// Affine map p -> forward * (p - center) placing a convex body in isotropic
// position: the uniform distribution over the image has zero mean and scalar
// covariance, and det(forward) = 1 so areas are preserved.
class IsotropicTransform {
 public:
  IsotropicTransform() = default;
  IsotropicTransform(Mat2 forward, Mat2 inverse, PlanarPoint center)
      : forward_(forward), inverse_(inverse), center_(center) {}

  PlanarPoint to_iso(PlanarPoint p) const {
    return forward_.apply(p - center_);
  }
  PlanarPoint from_iso(PlanarPoint q) const {
    return center_ + inverse_.apply(q);
  }

  const Mat2& forward() const { return forward_; }
  const Mat2& inverse() const { return inverse_; }
  PlanarPoint center() const { return center_; }

 private:
  Mat2 forward_;
  Mat2 inverse_;
  PlanarPoint center_;
};

// Built from the exact second-moment matrix of the uniform distribution over
// the polygon (closed-form per-triangle moments over a fan triangulation).
IsotropicTransform isotropic_transform(const Polygon& poly);  // DegenerateBody

Polygon transform_polygon(const Polygon& poly, const IsotropicTransform& t);

// Minkowski gauge of a proper polygon containing the origin strictly in its
// interior: gauge(v) = min{r >= 0 : v in r*poly}. Precomputes the
// support-normalized edge functionals once; evaluation is a batched kernel.
class GaugeTable {
 public:
  explicit GaugeTable(const Polygon& poly);  // OriginOutside, DegenerateBody

  double eval(PlanarPoint v) const;
  void eval_batch(const double* vx, const double* vy, std::size_t n,
                  double* out) const;

  std::size_t edge_count() const { return ax_.size(); }

 private:
  std::vector<double> ax_;
  std::vector<double> ay_;
};

double gauge(const Polygon& poly, PlanarPoint v);

// Uniform sampling over a proper polygon: area-weighted fan-triangle
// selection followed by barycentric sampling. Three stream draws per point.
class PolygonSampler {
 public:
  explicit PolygonSampler(const Polygon& poly);  // DegenerateBody

  PlanarPoint sample(RandomStream& rng) const;
  double area() const { return total_area_; }

 private:
  std::vector<PlanarPoint> vertices_;
  std::vector<double> cumulative_area_;
  double total_area_ = 0.0;
};

PlanarPoint sample_uniform(const Polygon& poly, RandomStream& rng);

}  // namespace locpriv

#endif  // LOCPRIV_GEOMETRY_HPP_
