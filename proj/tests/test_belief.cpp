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
#include "locpriv/belief.hpp"
#include "locpriv/mechanism.hpp"

using namespace locpriv;

namespace {

void check_distribution(const BeliefState& b) {
  double sum = 0.0;
  for (double p : b.probs) {
    CHECK(p >= 0.0);
    sum += p;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

}  // namespace

TEST_CASE("grid construction and lookup") {
  const LocationGrid grid({0, 0}, 3, 2, 500);
  CHECK(grid.size() == 6);
  CHECK(grid.center(0) == PlanarPoint{0, 0});
  CHECK(grid.center(4) == PlanarPoint{500, 500});
  CHECK(grid.nearest_cell({510, 480}) == 4);
  // Equidistant between cells 0 and 1: lowest id wins.
  CHECK(grid.nearest_cell({250, 0}) == 0);
}

TEST_CASE("propagate_prior") {
  SUBCASE("identity transition leaves the belief unchanged") {
    const auto model = MobilityModel::identity(3);
    const BeliefState b{0, {0.2, 0.5, 0.3}};
    const auto next = propagate_prior(b, model);
    CHECK(next.timestep == 1);
    for (int i = 0; i < 3; ++i)
      CHECK(next.probs[i] == doctest::Approx(b.probs[i]));
  }
  SUBCASE("symmetric swap keeps the uniform belief") {
    const auto model = MobilityModel::from_matrix(2, {0, 1, 1, 0});
    const auto next = propagate_prior(uniform_belief(2), model);
    CHECK(next.probs[0] == doctest::Approx(0.5));
    CHECK(next.probs[1] == doctest::Approx(0.5));
  }
  SUBCASE("hand-computed matrix product") {
    const auto model = MobilityModel::from_matrix(2, {0.7, 0.3, 0.4, 0.6});
    const auto next = propagate_prior(BeliefState{0, {1.0, 0.0}}, model);
    CHECK(next.probs[0] == doctest::Approx(0.7));
    CHECK(next.probs[1] == doctest::Approx(0.3));
  }
  SUBCASE("dimension mismatch") {
    const auto model = MobilityModel::identity(3);
    CHECK_THROWS_AS(propagate_prior(BeliefState{0, {0.5, 0.5}}, model),
                    DimensionMismatch);
  }
}

TEST_CASE("posterior_update") {
  SUBCASE("hand Bayes on two cells") {
    const auto post =
        posterior_update(uniform_belief(2), std::vector<double>{0.8, 0.2});
    CHECK(post.probs[0] == doctest::Approx(0.8));
    CHECK(post.probs[1] == doctest::Approx(0.2));
  }
  SUBCASE("degenerate prior is a fixed point") {
    const auto post = posterior_update(BeliefState{0, {1.0, 0.0}},
                                       std::vector<double>{0.3, 0.7});
    CHECK(post.probs[0] == doctest::Approx(1.0));
    CHECK(post.probs[1] == 0.0);
  }
  SUBCASE("uninformative evidence returns the prior") {
    const BeliefState prior{0, {0.25, 0.35, 0.4}};
    const auto post =
        posterior_update(prior, std::vector<double>{2.0, 2.0, 2.0});
    for (int i = 0; i < 3; ++i)
      CHECK(post.probs[i] == doctest::Approx(prior.probs[i]));
  }
  SUBCASE("zero evidence throws") {
    CHECK_THROWS_AS(posterior_update(BeliefState{0, {1.0, 0.0}},
                                     std::vector<double>{0.0, 5.0}),
                    ZeroEvidence);
  }
}

TEST_CASE("posterior matches full-enumeration Bayes") {
  RandomStream rng(5);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 2 + rng.uniform_index(9);
    std::vector<double> p(n), like(n);
    double sum = 0.0;
    for (auto& v : p) {
      v = rng.uniform(0.01, 1.0);
      sum += v;
    }
    for (auto& v : p) v /= sum;
    for (auto& v : like) v = rng.uniform(0.0, 2.0);
    BeliefState prior{0, p};
    // Independent long-double enumeration.
    long double evidence = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      evidence += static_cast<long double>(p[i]) * like[i];
    if (evidence <= 0.0) continue;
    const auto post = posterior_update(prior, like);
    check_distribution(post);
    for (std::size_t i = 0; i < n; ++i) {
      const double expected =
          static_cast<double>(static_cast<long double>(p[i]) * like[i] /
                              evidence);
      CHECK(std::abs(post.probs[i] - expected) < 1e-12);
    }
  }
}

TEST_CASE("posterior matches enumeration under real release densities") {
  // Likelihoods from the mechanism's own law over an enumerated output grid,
  // compared cell by cell against a long-double Bayes enumeration.
  RandomStream rng(50);
  for (int rep = 0; rep < 10; ++rep) {
    const std::uint32_t nx = 2 + static_cast<std::uint32_t>(rng.uniform_index(3));
    const std::uint32_t ny = 1 + static_cast<std::uint32_t>(rng.uniform_index(2));
    const LocationGrid grid({0, 0}, nx, ny, 400);
    std::vector<double> p(grid.size());
    double sum = 0;
    for (auto& v : p) {
      v = rng.uniform(0.05, 1.0);
      sum += v;
    }
    for (auto& v : p) v /= sum;
    const BeliefState prior{0, p};

    ObfuscationSet set;
    for (std::uint32_t i = 0; i < grid.size(); ++i) set.cell_ids.push_back(i);
    set.achieved_delta = 1.0;
    set.requested_delta = 1.0;
    auto fork = rng.fork(rep);
    const auto rec =
        pim_release(grid.center(0), set, grid, rng.uniform(0.3, 1.2), fork);
    const ReleaseDensity density(rec);

    for (int gz = 0; gz < 9; ++gz) {
      const PlanarPoint z{rng.uniform(-1500, 1500), rng.uniform(-1500, 1500)};
      (void)gz;
      std::vector<double> like(grid.size());
      for (std::uint32_t i = 0; i < grid.size(); ++i)
        like[i] = density.at(z, grid.center(i));
      long double evidence = 0.0;
      for (std::size_t i = 0; i < like.size(); ++i)
        evidence += static_cast<long double>(p[i]) * like[i];
      const auto post = posterior_update(prior, like);
      for (std::size_t i = 0; i < like.size(); ++i) {
        const double expected = static_cast<double>(
            static_cast<long double>(p[i]) * like[i] / evidence);
        CHECK(std::abs(post.probs[i] - expected) < 1e-12);
      }
    }
  }
}

TEST_CASE("restrict_to_set") {
  SUBCASE("full set is a no-op") {
    const BeliefState b{0, {0.5, 0.3, 0.2}};
    const auto r =
        restrict_to_set(b, std::vector<std::uint32_t>{0, 1, 2});
    for (int i = 0; i < 3; ++i)
      CHECK(r.probs[i] == doctest::Approx(b.probs[i]));
  }
  SUBCASE("renormalizes by the achieved mass") {
    const BeliefState b{0, {0.5, 0.3, 0.2}};
    const auto r = restrict_to_set(b, std::vector<std::uint32_t>{0, 1});
    CHECK(r.probs[0] == doctest::Approx(0.625));
    CHECK(r.probs[1] == doctest::Approx(0.375));
    CHECK(r.probs[2] == 0.0);
  }
  SUBCASE("singleton set concentrates") {
    const BeliefState b{0, {0.5, 0.3, 0.2}};
    const auto r = restrict_to_set(b, std::vector<std::uint32_t>{2});
    CHECK(r.probs[2] == doctest::Approx(1.0));
  }
  SUBCASE("massless set throws") {
    const BeliefState b{0, {1.0, 0.0}};
    CHECK_THROWS_AS(restrict_to_set(b, std::vector<std::uint32_t>{1}),
                    EmptySet);
  }
}

TEST_CASE("conditioning commutes with the Bayes update inside the set") {
  RandomStream rng(6);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 3 + rng.uniform_index(8);
    std::vector<double> p(n), like(n);
    double sum = 0.0;
    for (auto& v : p) {
      v = rng.uniform(0.01, 1.0);
      sum += v;
    }
    for (auto& v : p) v /= sum;
    for (auto& v : like) v = rng.uniform(0.05, 2.0);
    std::vector<std::uint32_t> cells;
    for (std::uint32_t i = 0; i < n; ++i)
      if (rng.uniform() < 0.6) cells.push_back(i);
    if (cells.empty()) cells.push_back(0);

    const BeliefState prior{0, p};
    const auto a = posterior_update(restrict_to_set(prior, cells), like);
    const auto b = restrict_to_set(posterior_update(prior, like), cells);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(std::abs(a.probs[i] - b.probs[i]) < 1e-12);
  }
}

TEST_CASE("mobility model validation and construction") {
  CHECK_THROWS_AS(MobilityModel::from_matrix(2, {0.5, 0.6, 0.5, 0.5}),
                  InvalidParams);
  CHECK_THROWS_AS(MobilityModel::from_matrix(2, {1.0, 0.0, 0.0}),
                  DimensionMismatch);

  const LocationGrid grid({0, 0}, 2, 2, 100);
  const auto model = MobilityModel::gaussian_kernel(grid, 150);
  for (std::size_t i = 0; i < 4; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < 4; ++j) sum += model.at(i, j);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(model.at(i, i) > model.at(i, 3 - i));  // self beats the far corner
  }

  // Transition counts with add-one smoothing keep every move possible.
  const std::vector<std::vector<std::uint32_t>> seqs{{0, 1, 1, 2}, {0, 1}};
  const auto counted = MobilityModel::from_transition_counts(3, seqs);
  CHECK(counted.at(0, 1) == doctest::Approx((2.0 + 1.0) / (2.0 + 3.0)));
  CHECK(counted.at(2, 0) > 0.0);
}
