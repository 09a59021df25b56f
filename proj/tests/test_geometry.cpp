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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "doctest.h"
#include "locpriv/geometry.hpp"
#include "support/oracles.hpp"

using namespace locpriv;

namespace {

std::set<std::pair<double, double>> vertex_set(
    const std::vector<PlanarPoint>& vs) {
  std::set<std::pair<double, double>> out;
  for (const auto& v : vs) out.insert({v.x, v.y});
  return out;
}

std::vector<PlanarPoint> random_int_points(RandomStream& rng, std::size_t n) {
  std::vector<PlanarPoint> pts;
  for (std::size_t i = 0; i < n; ++i) {
    pts.push_back({static_cast<double>(rng.uniform_index(21)) - 10.0,
                   static_cast<double>(rng.uniform_index(21)) - 10.0});
  }
  return pts;
}

Polygon square(double half) {
  return convex_hull(std::vector<PlanarPoint>{
      {-half, -half}, {half, -half}, {half, half}, {-half, half}});
}

}  // namespace

TEST_CASE("convex_hull examples") {
  SUBCASE("already convex triangle") {
    const auto hull =
        convex_hull(std::vector<PlanarPoint>{{0, 0}, {1, 0}, {0, 1}});
    CHECK(hull.kind() == PolyKind::proper);
    CHECK(hull.size() == 3);
    CHECK(vertex_set(hull.vertices()) ==
          vertex_set({{0, 0}, {1, 0}, {0, 1}}));
  }
  SUBCASE("interior point dropped") {
    const auto hull = convex_hull(
        std::vector<PlanarPoint>{{0, 0}, {2, 0}, {2, 2}, {0, 2}, {1, 1}});
    CHECK(hull.size() == 4);
    CHECK(vertex_set(hull.vertices()) ==
          vertex_set({{0, 0}, {2, 0}, {2, 2}, {0, 2}}));
    CHECK(polygon_area(hull) == doctest::Approx(4.0));
  }
  SUBCASE("collinear points become a segment") {
    const auto hull =
        convex_hull(std::vector<PlanarPoint>{{0, 0}, {1, 1}, {2, 2}});
    CHECK(hull.kind() == PolyKind::segment);
    CHECK(vertex_set(hull.vertices()) == vertex_set({{0, 0}, {2, 2}}));
  }
  SUBCASE("empty input") {
    CHECK_THROWS_AS(convex_hull(std::vector<PlanarPoint>{}), EmptyInput);
  }
  SUBCASE("coordinates out of frame") {
    CHECK_THROWS_AS(convex_hull(std::vector<PlanarPoint>{{1e8, 0}}),
                    OutOfRange);
  }
}

TEST_CASE("hull idempotence") {
  RandomStream rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    const auto pts = random_int_points(rng, 2 + rng.uniform_index(7));
    const auto hull = convex_hull(pts);
    const auto again = convex_hull(hull.vertices());
    CHECK(hull.kind() == again.kind());
    CHECK(vertex_set(hull.vertices()) == vertex_set(again.vertices()));
  }
}

TEST_CASE("hull matches the brute-force oracle on integer sets") {
  RandomStream rng(22);
  for (int rep = 0; rep < 120; ++rep) {
    const auto pts = random_int_points(rng, 1 + rng.uniform_index(8));
    const auto hull = convex_hull(pts);
    const auto oracle = testsupport::brute_hull(pts);
    CHECK(hull.kind() == oracle.kind);
    CHECK(vertex_set(hull.vertices()) == vertex_set(oracle.vertices));
    if (hull.kind() == PolyKind::proper)
      CHECK(polygon_area(hull) == doctest::Approx(oracle.area).epsilon(1e-12));
  }
}

TEST_CASE("sensitivity_hull examples") {
  SUBCASE("single location is a point at the origin") {
    const auto hull = sensitivity_hull(std::vector<PlanarPoint>{{3, 4}});
    CHECK(hull.kind() == PolyKind::point);
    CHECK(hull.vertices()[0] == PlanarPoint{0, 0});
  }
  SUBCASE("two locations give a symmetric segment") {
    const auto hull =
        sensitivity_hull(std::vector<PlanarPoint>{{0, 0}, {1, 0}});
    CHECK(hull.kind() == PolyKind::segment);
    CHECK(vertex_set(hull.vertices()) == vertex_set({{-1, 0}, {1, 0}}));
  }
  SUBCASE("right triangle gives the area-3 hexagon") {
    const auto hull =
        sensitivity_hull(std::vector<PlanarPoint>{{0, 0}, {1, 0}, {0, 1}});
    CHECK(hull.kind() == PolyKind::proper);
    CHECK(vertex_set(hull.vertices()) ==
          vertex_set({{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}}));
    // Oracle: enumerate the 9 differences and take the brute hull.
    std::vector<PlanarPoint> diffs;
    const std::vector<PlanarPoint> locs{{0, 0}, {1, 0}, {0, 1}};
    for (const auto& a : locs)
      for (const auto& b : locs) diffs.push_back(a - b);
    const auto oracle = testsupport::brute_hull(diffs);
    CHECK(vertex_set(hull.vertices()) == vertex_set(oracle.vertices));
    CHECK(polygon_area(hull) == doctest::Approx(3.0));
    CHECK(oracle.area == doctest::Approx(3.0));
  }
}

TEST_CASE("sensitivity hull is origin-symmetric") {
  RandomStream rng(33);
  for (int rep = 0; rep < 50; ++rep) {
    const auto pts = random_int_points(rng, 1 + rng.uniform_index(6));
    const auto hull = sensitivity_hull(pts);
    const auto vs = vertex_set(hull.vertices());
    for (const auto& [x, y] : vs) {
      CHECK(vs.count({-x, -y}) == 1);
    }
    CHECK(hull.contains({0, 0}));
  }
}

TEST_CASE("sensitivity hull matches the oracle on difference sets") {
  RandomStream rng(44);
  for (int rep = 0; rep < 60; ++rep) {
    const auto pts = random_int_points(rng, 1 + rng.uniform_index(8));
    std::vector<PlanarPoint> diffs;
    for (const auto& a : pts)
      for (const auto& b : pts) diffs.push_back(a - b);
    const auto oracle = testsupport::brute_hull(diffs);
    const auto hull = sensitivity_hull(pts);
    CHECK(hull.kind() == oracle.kind);
    CHECK(vertex_set(hull.vertices()) == vertex_set(oracle.vertices));
  }
}

TEST_CASE("polygon_area") {
  CHECK(polygon_area(square(0.5)) == doctest::Approx(1.0));
  const auto seg = convex_hull(std::vector<PlanarPoint>{{0, 0}, {2, 2}});
  CHECK(polygon_area(seg) == 0.0);
  const auto pt = convex_hull(std::vector<PlanarPoint>{{1, 1}});
  CHECK(polygon_area(pt) == 0.0);
}

TEST_CASE("isotropic transform of a regular 64-gon is the identity scale") {
  std::vector<PlanarPoint> pts;
  for (int k = 0; k < 64; ++k) {
    const double a = 2.0 * std::numbers::pi * k / 64;
    pts.push_back({std::cos(a), std::sin(a)});
  }
  const auto t = isotropic_transform(convex_hull(pts));
  const Mat2& f = t.forward();
  CHECK(std::abs(f.b) < 1e-6);
  CHECK(std::abs(f.c) < 1e-6);
  CHECK(f.a == doctest::Approx(f.d).epsilon(1e-9));
  CHECK(f.det() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("isotropic transform of a 4:1 rectangle balances the axes") {
  // Closed form: covariance diag(w^2, h^2)/12, so the unit-determinant
  // whitening is diag(sqrt(h/w), sqrt(w/h)).
  const double w = 8.0, h = 2.0;
  const auto poly = convex_hull(std::vector<PlanarPoint>{
      {-w / 2, -h / 2}, {w / 2, -h / 2}, {w / 2, h / 2}, {-w / 2, h / 2}});
  const auto t = isotropic_transform(poly);
  const Mat2& f = t.forward();
  CHECK(std::abs(f.b) < 1e-9);
  CHECK(std::abs(f.c) < 1e-9);
  CHECK(f.a == doctest::Approx(std::sqrt(h / w)).epsilon(1e-9));
  CHECK(f.d == doctest::Approx(std::sqrt(w / h)).epsilon(1e-9));
  CHECK(f.d / f.a == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("transformed rotated rectangle has scalar sampled covariance") {
  // Rotate a 6:1 rectangle by 30 degrees, transform, then check the sampled
  // covariance of the image is isotropic within 2%.
  const double c30 = std::cos(std::numbers::pi / 6);
  const double s30 = std::sin(std::numbers::pi / 6);
  std::vector<PlanarPoint> pts;
  for (const auto& p : std::vector<PlanarPoint>{
           {-3, -0.5}, {3, -0.5}, {3, 0.5}, {-3, 0.5}}) {
    pts.push_back({c30 * p.x - s30 * p.y, s30 * p.x + c30 * p.y});
  }
  const auto poly = convex_hull(pts);
  const auto t = isotropic_transform(poly);
  const auto iso = transform_polygon(poly, t);

  RandomStream rng(7);
  PolygonSampler sampler(iso);
  const int n = 100000;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    const auto p = sampler.sample(rng);
    sx += p.x;
    sy += p.y;
    sxx += p.x * p.x;
    sxy += p.x * p.y;
    syy += p.y * p.y;
  }
  const double mx = sx / n, my = sy / n;
  const double cxx = sxx / n - mx * mx;
  const double cxy = sxy / n - mx * my;
  const double cyy = syy / n - my * my;
  CHECK(cxx == doctest::Approx(cyy).epsilon(0.02));
  CHECK(std::abs(cxy) < 0.02 * cxx);
}

TEST_CASE("transform round trip") {
  RandomStream rng(55);
  const auto poly = convex_hull(std::vector<PlanarPoint>{
      {0, 0}, {400, 50}, {500, 400}, {100, 500}, {-100, 200}});
  const auto t = isotropic_transform(poly);
  for (int i = 0; i < 100; ++i) {
    const PlanarPoint p{rng.uniform(-1000, 1000), rng.uniform(-1000, 1000)};
    const auto q = t.from_iso(t.to_iso(p));
    CHECK(distance(p, q) < 1e-9 * std::max(1.0, norm(p)));
  }
  CHECK_THROWS_AS(
      isotropic_transform(convex_hull(std::vector<PlanarPoint>{{0, 0}, {1, 1}})),
      DegenerateBody);
}

TEST_CASE("gauge examples") {
  const auto sq = square(1.0);
  CHECK(gauge(sq, {2, 0}) == doctest::Approx(2.0));
  CHECK(gauge(sq, {1, 1}) == doctest::Approx(1.0));
  CHECK(gauge(sq, {0, 0}) == 0.0);

  const auto hex = sensitivity_hull(
      std::vector<PlanarPoint>{{0, 0}, {1, 0}, {0, 1}});
  const PlanarPoint v{0.5, 0.5};
  CHECK(gauge(hex, v) ==
        doctest::Approx(testsupport::gauge_bisect(hex, v)).epsilon(1e-9));
}

TEST_CASE("gauge is positively homogeneous") {
  RandomStream rng(66);
  const auto hex =
      sensitivity_hull(std::vector<PlanarPoint>{{0, 0}, {3, 1}, {1, 4}});
  const GaugeTable table(hex);
  for (int i = 0; i < 200; ++i) {
    const PlanarPoint v{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const double t = rng.uniform(0, 4);
    CHECK(table.eval({t * v.x, t * v.y}) ==
          doctest::Approx(t * table.eval(v)).epsilon(1e-9));
  }
}

TEST_CASE("gauge matches the bisection oracle on random bodies") {
  RandomStream rng(77);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<PlanarPoint> pts;
    for (int i = 0; i < 5; ++i)
      pts.push_back({rng.uniform(-10, 10), rng.uniform(-10, 10)});
    const auto body = sensitivity_hull(pts);
    if (!body.proper()) continue;
    const GaugeTable table(body);
    for (int i = 0; i < 20; ++i) {
      const PlanarPoint v{rng.uniform(-30, 30), rng.uniform(-30, 30)};
      CHECK(table.eval(v) ==
            doctest::Approx(testsupport::gauge_bisect(body, v))
                .epsilon(1e-9));
    }
  }
}

TEST_CASE("gauge rejects bodies without the origin inside") {
  const auto off = convex_hull(
      std::vector<PlanarPoint>{{1, 1}, {2, 1}, {2, 2}, {1, 2}});
  CHECK_THROWS_AS(gauge(off, {1.5, 1.5}), OriginOutside);
  const auto seg = convex_hull(std::vector<PlanarPoint>{{-1, 0}, {1, 0}});
  CHECK_THROWS_AS(gauge(seg, {0, 0}), DegenerateBody);
}

TEST_CASE("uniform polygon sampling") {
  SUBCASE("unit square mean") {
    const auto sq = convex_hull(std::vector<PlanarPoint>{
        {0, 0}, {1, 0}, {1, 1}, {0, 1}});
    RandomStream rng(88);
    PolygonSampler sampler(sq);
    double sx = 0, sy = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
      const auto p = sampler.sample(rng);
      sx += p.x;
      sy += p.y;
    }
    CHECK(std::abs(sx / n - 0.5) < 0.01);
    CHECK(std::abs(sy / n - 0.5) < 0.01);
  }
  SUBCASE("triangle membership") {
    const auto tri =
        convex_hull(std::vector<PlanarPoint>{{0, 0}, {4, 0}, {0, 3}});
    RandomStream rng(99);
    PolygonSampler sampler(tri);
    for (int i = 0; i < 2000; ++i) {
      CHECK(tri.contains(sampler.sample(rng), 1e-12));
    }
  }
  SUBCASE("deterministic under a fixed seed") {
    const auto sq = square(2.0);
    RandomStream a(123), b(123);
    PolygonSampler sampler(sq);
    for (int i = 0; i < 100; ++i) {
      const auto pa = sampler.sample(a);
      const auto pb = sampler.sample(b);
      CHECK(pa == pb);
    }
  }
  SUBCASE("degenerate bodies are rejected") {
    const auto seg = convex_hull(std::vector<PlanarPoint>{{0, 0}, {1, 0}});
    RandomStream rng(1);
    CHECK_THROWS_AS(sample_uniform(seg, rng), DegenerateBody);
  }
}
