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

#include "locpriv/belief.hpp"

#include <algorithm>
#include <cmath>

#include "locpriv/kernels/kernels.hpp"

namespace locpriv {

LocationGrid::LocationGrid(PlanarPoint lower_left_center, std::uint32_t nx,
                           std::uint32_t ny, double cell_size_m)
    : nx_(nx), ny_(ny), cell_size_(cell_size_m) {
  if (nx == 0 || ny == 0) throw InvalidParams("grid dimensions must be > 0");
  if (!(cell_size_m > 0)) throw InvalidParams("cell size must be > 0");
  xs_.reserve(static_cast<std::size_t>(nx) * ny);
  ys_.reserve(static_cast<std::size_t>(nx) * ny);
  for (std::uint32_t iy = 0; iy < ny; ++iy) {
    for (std::uint32_t ix = 0; ix < nx; ++ix) {
      const PlanarPoint c{lower_left_center.x + ix * cell_size_m,
                          lower_left_center.y + iy * cell_size_m};
      validate_point(c);
      xs_.push_back(c.x);
      ys_.push_back(c.y);
    }
  }
}

LocationGrid LocationGrid::covering(std::span<const PlanarPoint> points,
                                    double cell_size_m) {
  if (points.empty()) throw EmptyInput("no points to cover");
  double min_x = points[0].x, max_x = points[0].x;
  double min_y = points[0].y, max_y = points[0].y;
  for (const auto& p : points) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  const auto cells_for = [cell_size_m](double lo, double hi) {
    return static_cast<std::uint32_t>(
               std::floor((hi - lo) / cell_size_m)) + 1;
  };
  const PlanarPoint lower_left{min_x + cell_size_m / 2.0,
                               min_y + cell_size_m / 2.0};
  return LocationGrid(lower_left, cells_for(min_x, max_x),
                      cells_for(min_y, max_y), cell_size_m);
}

std::uint32_t LocationGrid::nearest_cell(PlanarPoint p) const {
  double d2 = 0.0;
  return static_cast<std::uint32_t>(kernels::ops().argmin_dist2(
      xs_.data(), ys_.data(), xs_.size(), p.x, p.y, &d2));
}

std::vector<PlanarPoint> LocationGrid::centers() const {
  std::vector<PlanarPoint> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i)
    out.push_back({xs_[i], ys_[i]});
  return out;
}

void BeliefState::validate() const {
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p))
      throw InvalidParams("belief probabilities must be finite and >= 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw InvalidParams("belief probabilities must sum to 1");
}

BeliefState uniform_belief(std::size_t cells, int timestep) {
  if (cells == 0) throw EmptyInput("belief over zero cells");
  return {timestep, std::vector<double>(cells, 1.0 / cells)};
}

BeliefState point_belief(std::size_t cells, std::uint32_t cell, int timestep) {
  if (cell >= cells) throw OutOfRange("cell id outside grid");
  std::vector<double> p(cells, 0.0);
  p[cell] = 1.0;
  return {timestep, std::move(p)};
}

MobilityModel::MobilityModel(std::size_t n, std::vector<double> rows)
    : n_(n), rows_(std::move(rows)) {
  for (std::size_t i = 0; i < n_; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      const double v = rows_[i * n_ + j];
      if (!(v >= 0.0)) throw InvalidParams("transition entries must be >= 0");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw InvalidParams("transition rows must sum to 1");
  }
}

MobilityModel MobilityModel::identity(std::size_t cells) {
  std::vector<double> rows(cells * cells, 0.0);
  for (std::size_t i = 0; i < cells; ++i) rows[i * cells + i] = 1.0;
  return MobilityModel(cells, std::move(rows));
}

MobilityModel MobilityModel::uniform(std::size_t cells) {
  std::vector<double> rows(cells * cells, 1.0 / cells);
  return MobilityModel(cells, std::move(rows));
}

MobilityModel MobilityModel::from_matrix(std::size_t cells,
                                         std::vector<double> row_major) {
  if (row_major.size() != cells * cells)
    throw DimensionMismatch("matrix size does not match cell count");
  return MobilityModel(cells, std::move(row_major));
}

MobilityModel MobilityModel::gaussian_kernel(const LocationGrid& grid,
                                             double range_m) {
  if (!(range_m > 0)) throw InvalidParams("mobility range must be > 0");
  const std::size_t n = grid.size();
  std::vector<double> rows(n * n, 0.0);
  const double inv = 1.0 / (2.0 * range_m * range_m);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    const PlanarPoint a = grid.center(static_cast<std::uint32_t>(i));
    for (std::size_t j = 0; j < n; ++j) {
      const PlanarPoint b = grid.center(static_cast<std::uint32_t>(j));
      const double d = distance(a, b);
      const double w = std::exp(-d * d * inv);
      rows[i * n + j] = w;
      sum += w;
    }
    for (std::size_t j = 0; j < n; ++j) rows[i * n + j] /= sum;
  }
  return MobilityModel(n, std::move(rows));
}

MobilityModel MobilityModel::from_transition_counts(
    std::size_t cells, std::span<const std::vector<std::uint32_t>> sequences) {
  std::vector<double> rows(cells * cells, 1.0);  // add-one smoothing
  for (const auto& seq : sequences) {
    for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
      if (seq[k] >= cells || seq[k + 1] >= cells)
        throw OutOfRange("cell id outside grid in sequence");
      rows[static_cast<std::size_t>(seq[k]) * cells + seq[k + 1]] += 1.0;
    }
  }
  for (std::size_t i = 0; i < cells; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < cells; ++j) sum += rows[i * cells + j];
    for (std::size_t j = 0; j < cells; ++j) rows[i * cells + j] /= sum;
  }
  return MobilityModel(cells, std::move(rows));
}

BeliefState propagate_prior(const BeliefState& belief,
                            const MobilityModel& model) {
  if (belief.probs.size() != model.size())
    throw DimensionMismatch("belief and mobility model sizes differ");
  const std::size_t n = model.size();
  std::vector<double> next(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = belief.probs[i];
    if (w == 0.0) continue;
    const auto row = model.row(i);
    for (std::size_t j = 0; j < n; ++j) next[j] += w * row[j];
  }
  double sum = 0.0;
  for (double v : next) sum += v;
  kernels::ops().scale(next.data(), n, 1.0 / sum);
  return {belief.timestep + 1, std::move(next)};
}

BeliefState posterior_update(const BeliefState& prior,
                             std::span<const double> likelihood) {
  if (likelihood.size() != prior.probs.size())
    throw DimensionMismatch("likelihood and prior sizes differ");
  std::vector<double> post(prior.probs.size());
  const double evidence = kernels::ops().mul_sum(
      prior.probs.data(), likelihood.data(), post.size(), post.data());
  if (!(evidence > 0.0))
    throw ZeroEvidence("all prior*likelihood products are zero");
  kernels::ops().scale(post.data(), post.size(), 1.0 / evidence);
  return {prior.timestep, std::move(post)};
}

BeliefState restrict_to_set(const BeliefState& belief,
                            std::span<const std::uint32_t> cells) {
  std::vector<double> out(belief.probs.size(), 0.0);
  double mass = 0.0;
  for (std::uint32_t id : cells) {
    if (id >= belief.probs.size()) throw OutOfRange("cell id outside belief");
    out[id] = belief.probs[id];
    mass += belief.probs[id];
  }
  if (!(mass > 0.0)) throw EmptySet("set carries no belief mass");
  kernels::ops().scale(out.data(), out.size(), 1.0 / mass);
  return {belief.timestep, std::move(out)};
}

}  // namespace locpriv
