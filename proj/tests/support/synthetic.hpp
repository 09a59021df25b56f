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

#ifndef LOCPRIV_TESTS_SUPPORT_SYNTHETIC_HPP_
#define LOCPRIV_TESTS_SUPPORT_SYNTHETIC_HPP_

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "locpriv/mobility.hpp"
#include "locpriv/random.hpp"

namespace testsupport {

struct Plant {
  locpriv::PlanarPoint center;
  double duration_s;
};

// Synthetic check-in stream: dwell episodes at the planted centers joined by
// travel legs fast enough (400 m/min, 30 s spacing) that no spurious stay
// can accumulate.
inline std::vector<locpriv::TimedPoint> planted_trace(
    std::span<const Plant> plants, locpriv::RandomStream& rng,
    double jitter_radius_m) {
  std::vector<locpriv::TimedPoint> pts;
  std::int64_t t = 1700000000;
  locpriv::PlanarPoint prev{0, 0};
  for (const auto& plant : plants) {
    const double d = locpriv::distance(prev, plant.center);
    const int travel_steps = std::max(2, static_cast<int>(d / 200.0));
    for (int i = 0; i < travel_steps; ++i) {
      const double f = static_cast<double>(i) / travel_steps;
      pts.push_back({t, prev + f * (plant.center - prev)});
      t += 30;
    }
    const int dwell_steps = static_cast<int>(plant.duration_s / 180.0);
    for (int i = 0; i <= dwell_steps; ++i) {
      const double a = rng.uniform(0, 2 * 3.14159265358979);
      const double r = jitter_radius_m * std::sqrt(rng.uniform());
      pts.push_back({t, plant.center + locpriv::PlanarPoint{
                                           r * std::cos(a), r * std::sin(a)}});
      t += 180;
    }
    prev = plant.center;
  }
  for (int i = 1; i <= 5; ++i) {
    pts.push_back({t, prev + locpriv::PlanarPoint{i * 400.0, 0}});
    t += 60;
  }
  return pts;
}

}  // namespace testsupport

#endif  // LOCPRIV_TESTS_SUPPORT_SYNTHETIC_HPP_
