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
#include <cmath>
#include <vector>

#include "doctest.h"
#include "locpriv/accounting.hpp"
#include "support/soundness.hpp"

using namespace locpriv;

TEST_CASE("location_bound") {
  CHECK(location_bound(0.1, 0.2, 0.8) ==
        doctest::Approx(0.1 * std::exp(0.2) / 0.8).epsilon(1e-12));
  CHECK(location_bound(0.1, 0.2, 0.8) == doctest::Approx(0.152675).epsilon(1e-5));
  CHECK(location_bound(0.37, 0.0, 1.0) == doctest::Approx(0.37));
  CHECK(location_bound(0.0, 1.0, 0.5) == 0.0);
  CHECK_THROWS_AS(location_bound(1.2, 0.1, 0.8), InvalidParams);
  CHECK_THROWS_AS(location_bound(0.5, -0.1, 0.8), InvalidParams);
  CHECK_THROWS_AS(location_bound(0.5, 0.1, 0.0), InvalidParams);
}

TEST_CASE("theta_slack") {
  CHECK(theta_slack(std::vector<double>{0.3, 0.9}, 1.0) == 0.0);
  CHECK(theta_slack(std::vector<double>{0.2, 0.5}, 0.8) ==
        doctest::Approx(-0.04).epsilon(1e-12));
  CHECK(theta_slack(std::vector<double>{0.0, 0.0}, 0.6) == 0.0);
  CHECK(theta_slack(std::vector<double>{}, 0.6) == 0.0);
  CHECK_THROWS_AS(theta_slack(std::vector<double>{1.5}, 0.8), InvalidParams);
}

TEST_CASE("target_bound") {
  CHECK(target_bound(0.3, {0.2, 0.8, -0.04}) ==
        doctest::Approx(0.3 * std::exp(0.2) / 0.8 - 0.04).epsilon(1e-12));
  CHECK(target_bound(0.3, {0.2, 0.8, -0.04}) ==
        doctest::Approx(0.418026).epsilon(1e-5));
  CHECK(target_bound(0.4, {0.0, 1.0, 0.0}) == doctest::Approx(0.4));
  CHECK(target_bound(0.0, {0.5, 0.9, 0.0}) == 0.0);
}

TEST_CASE("compose") {
  SUBCASE("single step") {
    const auto c = compose(std::vector<PrivacyParams>{{0.3, 0.8, -0.1}});
    CHECK(c.epsilon_sum == doctest::Approx(0.3));
    CHECK(c.delta_multiplier == doctest::Approx(1.0 / 0.8));
    CHECK(c.theta == doctest::Approx(-0.1));
  }
  SUBCASE("two equal steps") {
    const auto c = compose(
        std::vector<PrivacyParams>{{0.1, 0.8, 0.0}, {0.1, 0.8, 0.0}});
    CHECK(c.epsilon_sum == doctest::Approx(0.2));
    CHECK(c.delta_multiplier == doctest::Approx(1.5625).epsilon(1e-12));
    CHECK(c.theta == 0.0);
  }
  SUBCASE("theta recursion") {
    const auto c = compose(
        std::vector<PrivacyParams>{{0.3, 0.9, -0.04}, {0.1, 0.8, -0.02}});
    const double expected = -0.02 + (-0.04) * (1.0 / 0.8) * std::exp(0.1);
    CHECK(c.theta == doctest::Approx(expected).epsilon(1e-12));
    CHECK(c.theta == doctest::Approx(-0.0752585).epsilon(1e-5));
  }
  SUBCASE("empty list") {
    CHECK_THROWS_AS(compose(std::vector<PrivacyParams>{}), EmptyList);
  }
  SUBCASE("theta stays non-positive under composition") {
    RandomStream rng(3);
    for (int rep = 0; rep < 100; ++rep) {
      std::vector<PrivacyParams> steps;
      const int n = 1 + static_cast<int>(rng.uniform_index(6));
      for (int i = 0; i < n; ++i) {
        const double delta = rng.uniform(0.3, 1.0);
        const double min_w = rng.uniform(0.0, 1.0);
        steps.push_back(
            {rng.uniform(0.0, 2.0), delta, (delta - 1.0) * min_w});
      }
      CHECK(compose(steps).theta <= 1e-15);
    }
  }
}

TEST_CASE("trivial sequential bound") {
  CHECK(trivial_sequential_bound(0.4, std::vector<double>{0.0}) ==
        doctest::Approx(0.4));
  CHECK(trivial_sequential_bound(0.25, std::vector<double>{0.1, 0.2}) ==
        doctest::Approx(0.25 * std::exp(0.3)).epsilon(1e-12));
  CHECK_THROWS_AS(trivial_sequential_bound(0.25, std::vector<double>{-0.1}),
                  InvalidParams);

  // Composition with every delta = 1 and theta = 0 degenerates to the same
  // exponential factor.
  const std::vector<double> eps{0.2, 0.45, 0.05};
  std::vector<PrivacyParams> steps;
  for (double e : eps) steps.push_back({e, 1.0, 0.0});
  const auto c = compose(steps);
  CHECK(c.delta_multiplier == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(c.theta == 0.0);
  CHECK(c.bound(0.25) ==
        doctest::Approx(trivial_sequential_bound(0.25, eps)).epsilon(1e-12));
}

TEST_CASE("error lower bound and its inversion") {
  const std::vector<PlanarPoint> tri{{0, 0}, {1, 0}, {0, 1}};  // hull area 3
  SUBCASE("hand value") {
    const auto r = error_lower_bound(tri, 0.5);
    CHECK_FALSE(r.degenerate);
    CHECK(r.meters == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-12));
  }
  SUBCASE("singleton degenerates to zero with a flag") {
    const auto r = error_lower_bound(std::vector<PlanarPoint>{{5, 5}}, 1.0);
    CHECK(r.degenerate);
    CHECK(r.meters == 0.0);
  }
  SUBCASE("doubling epsilon halves the bound") {
    CHECK(error_lower_bound(tri, 1.0).meters ==
          doctest::Approx(2.0 * error_lower_bound(tri, 2.0).meters));
  }
  SUBCASE("coordinate scaling scales the bound linearly") {
    std::vector<PlanarPoint> scaled;
    for (const auto& p : tri) scaled.push_back(7.0 * p);
    CHECK(error_lower_bound(scaled, 0.7).meters ==
          doctest::Approx(7.0 * error_lower_bound(tri, 0.7).meters)
              .epsilon(1e-9));
  }
  SUBCASE("inversion") {
    CHECK(solve_epsilon_for_error(tri, 1.0) ==
          doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
    const double target = 123.0;
    const double eps = solve_epsilon_for_error(tri, target);
    CHECK(error_lower_bound(tri, eps).meters ==
          doctest::Approx(target).epsilon(1e-9));
    CHECK(solve_epsilon_for_error(tri, 10.0) <
          solve_epsilon_for_error(tri, 1.0));
    CHECK_THROWS_AS(
        solve_epsilon_for_error(std::vector<PlanarPoint>{{0, 0}, {1, 0}}, 1.0),
        DegenerateBody);
  }
}

TEST_CASE("steps_until_identifiable") {
  CHECK(steps_until_identifiable(std::vector<double>{0.4, 0.9, 1.2}) == 3);
  CHECK_FALSE(
      steps_until_identifiable(std::vector<double>{0.2, 0.4, 0.99}).has_value());
  // Geometric stream engineered to cross at the ninth release.
  std::vector<double> stream;
  for (int t = 1; t <= 12; ++t) stream.push_back(0.05 * std::pow(1.45, t));
  CHECK(steps_until_identifiable(stream) == 9);
}

TEST_CASE("link weights storage") {
  auto dense = LinkWeights::dense(LinkWeights::Kind::trajectory, 4, 2);
  dense.set(3, 1, 0.5);
  CHECK(dense.at(3, 1) == 0.5);
  CHECK(dense.at(0, 0) == 0.0);
  CHECK_THROWS_AS(dense.set(0, 0, 1.5), InvalidParams);
  CHECK_THROWS_AS(dense.at(4, 0), OutOfRange);

  const auto b =
      LinkWeights::broadcast(LinkWeights::Kind::poi, {0.2, 0.3, 0.5});
  CHECK(b.at(0, 1) == 0.3);
  CHECK(b.at(99, 1) == 0.3);
  CHECK(b.is_broadcast());
  const auto col = b.column(std::vector<std::uint32_t>{0, 7}, 2);
  CHECK(col == std::vector<double>{0.5, 0.5});
}

TEST_CASE("ledger keeps the composed value in sync") {
  PrivacyLedger ledger{LinkWeights::Kind::trajectory, "T1", {}, {}};
  ledger.append({0.1, 0.8, 0.0});
  ledger.append({0.1, 0.8, 0.0});
  CHECK(ledger.cumulative.epsilon_sum == doctest::Approx(0.2));
  CHECK(ledger.cumulative.delta_multiplier == doctest::Approx(1.5625));
  const auto direct = compose(ledger.per_step);
  CHECK(ledger.cumulative.bound(0.5) == doctest::Approx(direct.bound(0.5)));
}

TEST_CASE("single-release soundness on small instances") {
  RandomStream rng(2026);
  for (int rep = 0; rep < 8; ++rep) {
    const std::uint32_t nx = 2 + static_cast<std::uint32_t>(rng.uniform_index(2));
    const std::uint32_t ny = 2 + static_cast<std::uint32_t>(rng.uniform_index(2));
    const LocationGrid grid({0, 0}, nx, ny, 400);
    std::vector<double> p(grid.size());
    double sum = 0;
    for (auto& v : p) {
      v = rng.uniform(0.02, 1.0);
      sum += v;
    }
    for (auto& v : p) v /= sum;
    const BeliefState prior{0, p};
    const double delta = rng.uniform(0.4, 0.95);
    const double eps = rng.uniform(0.2, 1.2);
    const auto true_cell =
        static_cast<std::uint32_t>(rng.uniform_index(grid.size()));

    auto fork = rng.fork(rep);
    const auto loc_result = testsupport::location_bound_soundness(
        grid, prior, delta, eps, true_cell, fork, 13);
    CHECK(loc_result.max_violation <= 1e-9);
    CHECK(loc_result.max_out_of_set == 0.0);

    // Explicit link weights over up to 4 targets.
    const std::size_t targets = 1 + rng.uniform_index(4);
    auto weights = LinkWeights::dense(LinkWeights::Kind::trajectory,
                                      grid.size(), targets);
    for (std::uint32_t c = 0; c < grid.size(); ++c)
      for (std::size_t t = 0; t < targets; ++t)
        weights.set(c, t, rng.uniform(0.0, 1.0));
    auto fork2 = rng.fork(1000 + rep);
    const double violation = testsupport::target_bound_soundness(
        grid, prior, delta, eps, true_cell, weights, fork2, 13);
    CHECK(violation <= 1e-9);
  }
}

TEST_CASE("sequential composition soundness on a 6-cell grid") {
  RandomStream rng(31415);
  const LocationGrid grid({0, 0}, 3, 2, 400);
  for (int rep = 0; rep < 4; ++rep) {
    // Trajectories over 3 steps between adjacent cells.
    std::vector<std::vector<std::uint32_t>> trajs{
        {0, 1, 2}, {0, 1, 4}, {3, 4, 5}, {1, 4, 3}, {2, 1, 0}};
    std::vector<double> prior(trajs.size());
    double sum = 0;
    for (auto& v : prior) {
      v = rng.uniform(0.05, 1.0);
      sum += v;
    }
    for (auto& v : prior) v /= sum;
    const std::vector<double> epsilons{rng.uniform(0.2, 0.8),
                                       rng.uniform(0.2, 0.8),
                                       rng.uniform(0.2, 0.8)};
    const auto true_target = rng.uniform_index(trajs.size());
    auto fork = rng.fork(rep);
    const double violation = testsupport::sequential_bound_soundness(
        grid, trajs, prior, true_target, epsilons, 0.8, fork, 9);
    CHECK(violation <= 1e-9);
  }
}
