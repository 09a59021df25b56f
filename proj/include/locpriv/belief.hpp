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

#ifndef LOCPRIV_BELIEF_HPP_
#define LOCPRIV_BELIEF_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "locpriv/geometry.hpp"

namespace locpriv {

// Discrete candidate-location set: square cells over a rectangular extent,
// ids dense in [0, size). Cell id = iy * nx + ix.
class LocationGrid {
 public:
  LocationGrid(PlanarPoint lower_left_center, std::uint32_t nx,
               std::uint32_t ny, double cell_size_m);

  // Grid that covers the bounding box of the given points.
  static LocationGrid covering(std::span<const PlanarPoint> points,
                               double cell_size_m);

  std::size_t size() const { return xs_.size(); }
  std::uint32_t nx() const { return nx_; }
  std::uint32_t ny() const { return ny_; }
  double cell_size() const { return cell_size_; }

  PlanarPoint center(std::uint32_t id) const { return {xs_[id], ys_[id]}; }
  std::uint32_t nearest_cell(PlanarPoint p) const;

  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }
  std::vector<PlanarPoint> centers() const;

 private:
  std::uint32_t nx_, ny_;
  double cell_size_;
  std::vector<double> xs_, ys_;  // SoA for the argmin kernel
};

// Probability distribution over grid cells at one timestep. Values are
// non-negative and sum to 1 within 1e-9.
struct BeliefState {
  int timestep = 0;
  std::vector<double> probs;

  void validate() const;  // InvalidParams
};

BeliefState uniform_belief(std::size_t cells, int timestep = 0);
BeliefState point_belief(std::size_t cells, std::uint32_t cell,
                         int timestep = 0);

// First-order Markov model over grid cells; each row is a distribution over
// successor cells.
class MobilityModel {
 public:
  static MobilityModel identity(std::size_t cells);
  static MobilityModel uniform(std::size_t cells);

  // Row-stochastic matrix given row-major; validated.
  static MobilityModel from_matrix(std::size_t cells,
                                   std::vector<double> row_major);

  // Transition kernel p(i -> j) proportional to exp(-d_ij^2 / (2 range^2)).
  static MobilityModel gaussian_kernel(const LocationGrid& grid,
                                       double range_m);

  // Transition counts from observed cell sequences, add-one smoothed so the
  // model stays fully supported off the observed transitions.
  static MobilityModel from_transition_counts(
      std::size_t cells, std::span<const std::vector<std::uint32_t>> sequences);

  std::size_t size() const { return n_; }
  double at(std::size_t i, std::size_t j) const { return rows_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const {
    return {rows_.data() + i * n_, n_};
  }

 private:
  MobilityModel(std::size_t n, std::vector<double> rows);
  std::size_t n_ = 0;
  std::vector<double> rows_;
};

// Next-timestep prior: belief^T * transition, renormalized.
BeliefState propagate_prior(const BeliefState& belief,
                            const MobilityModel& model);  // DimensionMismatch

// Bayes update with a per-cell likelihood of the observed release.
BeliefState posterior_update(const BeliefState& prior,
                             std::span<const double> likelihood);
// ZeroEvidence if every prior*likelihood product is zero.

// Condition on membership in a cell set: zero outside, renormalize inside.
BeliefState restrict_to_set(const BeliefState& belief,
                            std::span<const std::uint32_t> cells);  // EmptySet

}  // namespace locpriv

#endif  // LOCPRIV_BELIEF_HPP_
