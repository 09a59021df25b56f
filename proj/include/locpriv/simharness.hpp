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

#ifndef LOCPRIV_SIMHARNESS_HPP_
#define LOCPRIV_SIMHARNESS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "locpriv/accounting.hpp"
#include "locpriv/belief.hpp"
#include "locpriv/mechanism.hpp"
#include "locpriv/mobility.hpp"

namespace locpriv {

// Deterministic desk-scale experiment: a Markov walker releases perturbed
// locations while the strong Bayesian adversary (exact release density,
// known delta sets) tracks it; per-step and cumulative privacy bounds are
// recorded alongside the realized utility.
struct ExperimentConfig {
  std::uint64_t seed = 1;

  std::uint32_t grid_nx = 10;
  std::uint32_t grid_ny = 10;
  double cell_size_m = 500.0;
  PlanarPoint grid_origin;  // lower-left cell center

  enum class Mobility { gaussian, identity, traces };
  Mobility mobility = Mobility::gaussian;
  double mobility_range_m = 750.0;
  std::string mobility_traces_path;

  enum class InitialBelief { uniform, point };
  InitialBelief initial_belief = InitialBelief::uniform;
  std::uint32_t belief_start_cell = 0;

  enum class Policy { fixed, target_error };
  Policy policy = Policy::fixed;
  double epsilon = 1.0;  // fixed policy; also the point-hull fallback budget
  double target_error_m = 1000.0;
  double delta = 0.8;

  int steps = 12;
  std::optional<std::uint32_t> true_start_cell;  // default: center cell

  std::vector<std::uint32_t> trajectory_destinations;  // cell ids
  std::string poi_table_path;
  double poi_gap_min = 45.0;
  double poi_speed_m_per_min = 400.0;
  double poi_tau_min = 5.0;

  std::string output_path = "report.csv";
  std::string kernel_backend = "auto";

  // Flat key = value file; '#' comments. Relative paths are resolved
  // against the config file's directory. Unknown keys are errors.
  static ExperimentConfig load(const std::string& path);
  void validate() const;  // InvalidParams
};

struct StepReport {
  int timestep = 0;
  std::uint32_t true_cell = 0;
  double achieved_delta = 0.0;
  double epsilon = 0.0;
  double err_m = 0.0;
  double hull_area_m2 = 0.0;
  bool hull_degenerate = false;
  bool surrogate_used = false;
  double location_bound_max = 0.0;
  std::vector<double> trajectory_bounds;  // cumulative, aligned with ids
  std::vector<double> poi_bounds;
};

struct ExperimentResult {
  std::vector<std::string> trajectory_target_ids;
  std::vector<std::string> poi_target_ids;
  std::vector<StepReport> rows;

  std::string csv_header() const;
  std::vector<std::string> csv_lines() const;
};

// Markov walk over grid cells; element t is one transition past element
// t-1, starting from start_cell's row.
std::vector<std::uint32_t> generate_synthetic_trace(const LocationGrid& grid,
                                                    const MobilityModel& model,
                                                    int steps,
                                                    std::uint64_t seed,
                                                    std::uint32_t start_cell);

ExperimentResult run_experiment(const ExperimentConfig& config);

struct AuditOptions {
  int scaffold_bins = 128;  // fine counting grid the adaptive bins aggregate
  long min_hits = 1000;     // a bin qualifies when both candidates reach this
  long stable_hits = 8000;  // target per-candidate mass of an adaptive bin
  int shards = 8;           // fixed shard count keeps results thread-invariant
  int threads = 0;          // 0 = hardware concurrency
  double span_factor = 3.0; // plane extent in hull extents
};

// Empirical indistinguishability audit at the mechanism-output level: runs
// `trials` releases per candidate in the set, bins the output plane over
// 3x the hull extent, and returns the largest log frequency ratio over
// qualifying bins and candidate pairs. The grid adapts to the sample mass:
// fine scaffold counts are aggregated into equal-mass column/row stripes
// sized so each carries about stable_hits per candidate, so no qualifying
// ratio is dominated by thin-bin sampling noise. Zero for singleton sets.
// InsufficientSamples when no bin qualifies.
double monte_carlo_ldp_audit(std::span<const PlanarPoint> set_centers,
                             double epsilon, long trials, std::uint64_t seed,
                             const AuditOptions& options = {});

// CSV with a fixed column order, 9 significant digits, LF endings.
void emit_report(const ExperimentResult& result, const std::string& path);
ExperimentResult read_report(const std::string& path);

}  // namespace locpriv

#endif  // LOCPRIV_SIMHARNESS_HPP_
