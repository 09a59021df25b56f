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

#include "locpriv/simharness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <limits>
#include <mutex>
#include <thread>

#include "locpriv/csvio.hpp"
#include "locpriv/kernels/kernels.hpp"

namespace locpriv {
namespace {

std::optional<double> to_double(const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<long long> to_int(const std::string& s) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  std::size_t e = s.find_last_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

}  // namespace

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  const auto lines = csvio::read_lines(path);
  const auto dir = std::filesystem::path(path).parent_path();
  const auto resolve = [&](const std::string& p) {
    const std::filesystem::path q(p);
    return q.is_absolute() ? q.string() : (dir / q).string();
  };

  ExperimentConfig cfg;
  for (const auto& raw : lines) {
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw FormatError("config line without '=': " + raw);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    const auto num = [&](const char* what) {
      const auto v = to_double(value);
      if (!v) throw FormatError(std::string("bad number for ") + what);
      return *v;
    };
    const auto integer = [&](const char* what) {
      const auto v = to_int(value);
      if (!v) throw FormatError(std::string("bad integer for ") + what);
      return *v;
    };

    if (key == "seed") cfg.seed = static_cast<std::uint64_t>(integer("seed"));
    else if (key == "grid.nx") cfg.grid_nx = static_cast<std::uint32_t>(integer(key.c_str()));
    else if (key == "grid.ny") cfg.grid_ny = static_cast<std::uint32_t>(integer(key.c_str()));
    else if (key == "grid.cell_size_m") cfg.cell_size_m = num(key.c_str());
    else if (key == "grid.origin_x_m") cfg.grid_origin.x = num(key.c_str());
    else if (key == "grid.origin_y_m") cfg.grid_origin.y = num(key.c_str());
    else if (key == "mobility") {
      if (value == "gaussian") cfg.mobility = Mobility::gaussian;
      else if (value == "identity") cfg.mobility = Mobility::identity;
      else if (value == "traces") cfg.mobility = Mobility::traces;
      else throw FormatError("unknown mobility: " + value);
    } else if (key == "mobility.range_m") cfg.mobility_range_m = num(key.c_str());
    else if (key == "mobility.traces") cfg.mobility_traces_path = resolve(value);
    else if (key == "initial_belief") {
      if (value == "uniform") cfg.initial_belief = InitialBelief::uniform;
      else if (value.rfind("point:", 0) == 0) {
        cfg.initial_belief = InitialBelief::point;
        const auto v = to_int(value.substr(6));
        if (!v) throw FormatError("bad initial_belief cell: " + value);
        cfg.belief_start_cell = static_cast<std::uint32_t>(*v);
      } else throw FormatError("unknown initial_belief: " + value);
    } else if (key == "true_start") {
      if (value == "center") cfg.true_start_cell.reset();
      else cfg.true_start_cell = static_cast<std::uint32_t>(integer(key.c_str()));
    } else if (key == "policy") {
      if (value == "fixed") cfg.policy = Policy::fixed;
      else if (value == "target_error") cfg.policy = Policy::target_error;
      else throw FormatError("unknown policy: " + value);
    } else if (key == "policy.epsilon") cfg.epsilon = num(key.c_str());
    else if (key == "policy.target_error_m") cfg.target_error_m = num(key.c_str());
    else if (key == "policy.delta") cfg.delta = num(key.c_str());
    else if (key == "steps") cfg.steps = static_cast<int>(integer(key.c_str()));
    else if (key == "targets.trajectory") {
      cfg.trajectory_destinations.clear();
      for (const auto& tok : csvio::split(value, ';')) {
        const auto v = to_int(trim(tok));
        if (!v) throw FormatError("bad trajectory destination: " + tok);
        cfg.trajectory_destinations.push_back(static_cast<std::uint32_t>(*v));
      }
    } else if (key == "poi.table") cfg.poi_table_path = resolve(value);
    else if (key == "poi.gap_min") cfg.poi_gap_min = num(key.c_str());
    else if (key == "poi.speed_m_per_min") cfg.poi_speed_m_per_min = num(key.c_str());
    else if (key == "poi.tau_min") cfg.poi_tau_min = num(key.c_str());
    else if (key == "output") cfg.output_path = resolve(value);
    else if (key == "kernel_backend") cfg.kernel_backend = value;
    else throw FormatError("unknown config key: " + key);
  }
  cfg.validate();
  return cfg;
}

void ExperimentConfig::validate() const {
  if (steps < 1) throw InvalidParams("steps must be >= 1");
  if (grid_nx == 0 || grid_ny == 0) throw InvalidParams("grid must be non-empty");
  if (!(cell_size_m > 0)) throw InvalidParams("cell size must be > 0");
  if (!(delta > 0.0) || delta > 1.0) throw InvalidParams("delta must be in (0, 1]");
  if (policy == Policy::fixed && !(epsilon > 0.0))
    throw InvalidParams("fixed policy needs epsilon > 0");
  if (policy == Policy::target_error && !(target_error_m > 0.0))
    throw InvalidParams("target_error policy needs a positive target");
  if (mobility == Mobility::traces && mobility_traces_path.empty())
    throw InvalidParams("mobility=traces needs mobility.traces");
}

std::vector<std::uint32_t> generate_synthetic_trace(const LocationGrid& grid,
                                                    const MobilityModel& model,
                                                    int steps,
                                                    std::uint64_t seed,
                                                    std::uint32_t start_cell) {
  if (steps < 1) throw InvalidParams("steps must be >= 1");
  if (model.size() != grid.size())
    throw DimensionMismatch("model does not match grid");
  if (start_cell >= grid.size()) throw OutOfRange("start cell outside grid");
  RandomStream rng = RandomStream(seed).fork(0x7261636bull);  // trace stream
  std::vector<std::uint32_t> trace;
  trace.reserve(steps);
  std::uint32_t cur = start_cell;
  for (int t = 0; t < steps; ++t) {
    const auto row = model.row(cur);
    const double u = rng.uniform();
    double acc = 0.0;
    std::uint32_t next = static_cast<std::uint32_t>(model.size() - 1);
    for (std::size_t j = 0; j < row.size(); ++j) {
      acc += row[j];
      if (u < acc) {
        next = static_cast<std::uint32_t>(j);
        break;
      }
    }
    cur = next;
    trace.push_back(cur);
  }
  return trace;
}

namespace {

MobilityModel build_model(const ExperimentConfig& cfg,
                          const LocationGrid& grid) {
  switch (cfg.mobility) {
    case ExperimentConfig::Mobility::identity:
      return MobilityModel::identity(grid.size());
    case ExperimentConfig::Mobility::gaussian:
      return MobilityModel::gaussian_kernel(grid, cfg.mobility_range_m);
    case ExperimentConfig::Mobility::traces: {
      const auto trajectories = read_trajectories(cfg.mobility_traces_path);
      std::vector<std::vector<std::uint32_t>> seqs;
      seqs.reserve(trajectories.size());
      for (const auto& t : trajectories) {
        std::vector<std::uint32_t> seq;
        seq.reserve(t.points.size());
        for (const auto& p : t.points) seq.push_back(grid.nearest_cell(p.pos));
        seqs.push_back(std::move(seq));
      }
      return MobilityModel::from_transition_counts(grid.size(), seqs);
    }
  }
  throw InvalidParams("unhandled mobility kind");
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  if (!kernels::set_backend_by_name(cfg.kernel_backend))
    throw InvalidParams("unknown kernel backend: " + cfg.kernel_backend);

  const LocationGrid grid(cfg.grid_origin, cfg.grid_nx, cfg.grid_ny,
                          cfg.cell_size_m);
  const MobilityModel model = build_model(cfg, grid);

  const std::uint32_t start_cell =
      cfg.true_start_cell.value_or(static_cast<std::uint32_t>(
          (cfg.grid_ny / 2) * cfg.grid_nx + cfg.grid_nx / 2));
  if (start_cell >= grid.size()) throw OutOfRange("true start outside grid");

  const std::vector<std::uint32_t> trace = generate_synthetic_trace(
      grid, model, cfg.steps, cfg.seed, start_cell);
  RandomStream release_rng = RandomStream(cfg.seed).fork(0x72656c65ull);

  BeliefState belief =
      cfg.initial_belief == ExperimentConfig::InitialBelief::uniform
          ? uniform_belief(grid.size())
          : point_belief(grid.size(), cfg.belief_start_cell);

  ExperimentResult result;

  // Trajectory targets: shortest grid paths from the walker's start cell.
  std::optional<TrajectoryPaths> traj;
  std::vector<PrivacyLedger> traj_ledgers;
  std::vector<double> traj_priors;
  if (!cfg.trajectory_destinations.empty()) {
    std::vector<PlanarPoint> dests;
    for (std::uint32_t id : cfg.trajectory_destinations) {
      if (id >= grid.size()) throw OutOfRange("destination outside grid");
      dests.push_back(grid.center(id));
    }
    traj = trajectory_link_weights(grid, grid.center(start_cell), dests);
    const std::size_t k = traj->paths.size();
    for (std::size_t i = 0; i < k; ++i) {
      const std::string id = "T" + std::to_string(cfg.trajectory_destinations[i]);
      result.trajectory_target_ids.push_back(id);
      traj_ledgers.push_back(
          {LinkWeights::Kind::trajectory, id, {}, ComposedBound{}});
      traj_priors.push_back(1.0 / static_cast<double>(k));
    }
  }

  std::vector<PoiRecord> pois;
  std::vector<PrivacyLedger> poi_ledgers;
  std::vector<double> poi_priors;
  if (!cfg.poi_table_path.empty()) {
    pois = read_pois(cfg.poi_table_path);
    for (const auto& p : pois) {
      result.poi_target_ids.push_back(p.poi_id);
      poi_ledgers.push_back({LinkWeights::Kind::poi, p.poi_id, {}, ComposedBound{}});
      poi_priors.push_back(1.0 / static_cast<double>(pois.size()));
    }
  }

  std::vector<std::uint32_t> all_cells(grid.size());
  for (std::size_t i = 0; i < all_cells.size(); ++i)
    all_cells[i] = static_cast<std::uint32_t>(i);

  std::uint32_t prev_true = start_cell;
  for (int t = 1; t <= cfg.steps; ++t) {
    const BeliefState prior = propagate_prior(belief, model);
    const ObfuscationSet set = build_delta_set(prior, cfg.delta);
    const std::uint32_t true_cell = trace[t - 1];
    const PlanarPoint true_loc = grid.center(true_cell);
    const PlanarPoint loc = surrogate(true_loc, set, grid);

    std::vector<PlanarPoint> hull_pts;
    hull_pts.reserve(set.cell_ids.size() + 1);
    for (std::uint32_t id : set.cell_ids) hull_pts.push_back(grid.center(id));
    hull_pts.push_back(loc);
    const Polygon hull = sensitivity_hull(hull_pts);

    double eps = cfg.epsilon;
    bool degenerate = !hull.proper();
    if (cfg.policy == ExperimentConfig::Policy::target_error) {
      switch (hull.kind()) {
        case PolyKind::proper:
          eps = solve_epsilon_for_error(hull_pts, cfg.target_error_m);
          break;
        case PolyKind::segment:
          // 1-D fallback: mean displacement of the segment release is
          // half-length / epsilon.
          eps = 0.5 * distance(hull.vertices()[0], hull.vertices()[1]) /
                cfg.target_error_m;
          break;
        case PolyKind::point:
          eps = cfg.epsilon;
          break;
      }
    }

    const ReleaseSampler sampler(loc, set, grid, eps);
    const ReleaseRecord rec = sampler.release(release_rng, t);

    StepReport row;
    row.timestep = t;
    row.true_cell = true_cell;
    row.achieved_delta = set.achieved_delta;
    row.epsilon = eps;
    row.err_m = distance(true_loc, rec.z);
    row.hull_area_m2 = polygon_area(rec.hull);
    row.hull_degenerate = degenerate;
    row.surrogate_used = !(loc == true_loc);

    // Strong adversary: condition on the set, then exact Bayes with the
    // release density.
    const BeliefState restricted = restrict_to_set(prior, set);
    const ReleaseDensity density(rec);
    std::vector<double> like(grid.size(), 0.0);
    {
      std::vector<PlanarPoint> cands;
      cands.reserve(set.cell_ids.size());
      for (std::uint32_t id : set.cell_ids) cands.push_back(grid.center(id));
      std::vector<double> vals(cands.size());
      density.at_batch(rec.z, cands, vals);
      for (std::size_t i = 0; i < cands.size(); ++i)
        like[set.cell_ids[i]] = vals[i];
    }
    belief = posterior_update(restricted, like);

    double bound_max = 0.0;
    for (std::uint32_t id : set.cell_ids)
      bound_max = std::max(
          bound_max, location_bound(prior.probs[id], eps, set.achieved_delta));
    row.location_bound_max = bound_max;

    std::vector<std::uint32_t> excluded;
    excluded.reserve(grid.size() - set.cell_ids.size());
    std::set_difference(all_cells.begin(), all_cells.end(),
                        set.cell_ids.begin(), set.cell_ids.end(),
                        std::back_inserter(excluded));

    if (traj) {
      for (std::size_t k = 0; k < traj_ledgers.size(); ++k) {
        const double th = theta_slack(traj->weights.column(excluded, k),
                                      set.achieved_delta);
        traj_ledgers[k].append({eps, set.achieved_delta, th});
        row.trajectory_bounds.push_back(
            traj_ledgers[k].cumulative.bound(traj_priors[k]));
      }
    }
    if (!pois.empty()) {
      const double gap = cfg.poi_gap_min;
      const double travel =
          t == 1 ? 0.0
                 : std::min(gap, distance(grid.center(prev_true), true_loc) /
                                     cfg.poi_speed_m_per_min);
      const LinkWeights w =
          poi_link_weights(pois, gap, travel, cfg.poi_tau_min);
      for (std::size_t k = 0; k < poi_ledgers.size(); ++k) {
        const double th =
            theta_slack(w.column(excluded, k), set.achieved_delta);
        poi_ledgers[k].append({eps, set.achieved_delta, th});
        row.poi_bounds.push_back(
            poi_ledgers[k].cumulative.bound(poi_priors[k]));
      }
    }

    result.rows.push_back(std::move(row));
    prev_true = true_cell;
  }
  return result;
}

std::string ExperimentResult::csv_header() const {
  std::string h =
      "timestep,true_cell,achieved_delta,epsilon,err_m,hull_area_m2,"
      "hull_degenerate,surrogate_used,location_bound_max,"
      "location_bound_max_clip";
  for (const auto& id : trajectory_target_ids)
    h += ",traj_bound_" + id + ",traj_bound_" + id + "_clip";
  for (const auto& id : poi_target_ids)
    h += ",poi_bound_" + id + ",poi_bound_" + id + "_clip";
  return h;
}

std::vector<std::string> ExperimentResult::csv_lines() const {
  std::vector<std::string> lines;
  lines.reserve(rows.size() + 1);
  lines.push_back(csv_header());
  const auto clip = [](double v) { return std::clamp(v, 0.0, 1.0); };
  for (const auto& r : rows) {
    std::string line = std::to_string(r.timestep);
    line += "," + std::to_string(r.true_cell);
    line += "," + csvio::g9(r.achieved_delta);
    line += "," + csvio::g9(r.epsilon);
    line += "," + csvio::g9(r.err_m);
    line += "," + csvio::g9(r.hull_area_m2);
    line += r.hull_degenerate ? ",1" : ",0";
    line += r.surrogate_used ? ",1" : ",0";
    line += "," + csvio::g9(r.location_bound_max);
    line += "," + csvio::g9(clip(r.location_bound_max));
    for (double b : r.trajectory_bounds)
      line += "," + csvio::g9(b) + "," + csvio::g9(clip(b));
    for (double b : r.poi_bounds)
      line += "," + csvio::g9(b) + "," + csvio::g9(clip(b));
    lines.push_back(std::move(line));
  }
  return lines;
}

void emit_report(const ExperimentResult& result, const std::string& path) {
  csvio::write_lines(path, result.csv_lines());
}

ExperimentResult read_report(const std::string& path) {
  const auto lines = csvio::read_lines(path);
  if (lines.empty()) throw FormatError("empty report " + path);
  const auto header = csvio::split(lines[0], ',');
  ExperimentResult result;
  for (const auto& col : header) {
    if (col.rfind("traj_bound_", 0) == 0 &&
        col.rfind("_clip") != col.size() - 5)
      result.trajectory_target_ids.push_back(col.substr(11));
    if (col.rfind("poi_bound_", 0) == 0 && col.rfind("_clip") != col.size() - 5)
      result.poi_target_ids.push_back(col.substr(10));
  }
  const std::size_t nt = result.trajectory_target_ids.size();
  const std::size_t np = result.poi_target_ids.size();
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = csvio::split(lines[i], ',');
    if (f.size() != 10 + 2 * nt + 2 * np)
      throw FormatError("bad report row in " + path);
    StepReport r;
    const auto d = [&](std::size_t k) {
      const auto v = to_double(f[k]);
      if (!v) throw FormatError("bad number in report " + path);
      return *v;
    };
    r.timestep = static_cast<int>(d(0));
    r.true_cell = static_cast<std::uint32_t>(d(1));
    r.achieved_delta = d(2);
    r.epsilon = d(3);
    r.err_m = d(4);
    r.hull_area_m2 = d(5);
    r.hull_degenerate = f[6] == "1";
    r.surrogate_used = f[7] == "1";
    r.location_bound_max = d(8);
    for (std::size_t k = 0; k < nt; ++k)
      r.trajectory_bounds.push_back(d(10 + 2 * k));
    for (std::size_t k = 0; k < np; ++k)
      r.poi_bounds.push_back(d(10 + 2 * nt + 2 * k));
    result.rows.push_back(std::move(r));
  }
  return result;
}

namespace {

struct BinGrid {
  double min_x, min_y, step_x, step_y;
  int bins;

  std::optional<std::size_t> index(PlanarPoint p) const {
    const int bx = static_cast<int>(std::floor((p.x - min_x) / step_x));
    const int by = static_cast<int>(std::floor((p.y - min_y) / step_y));
    if (bx < 0 || by < 0 || bx >= bins || by >= bins) return std::nullopt;
    return static_cast<std::size_t>(by) * bins + bx;
  }
};

}  // namespace

double monte_carlo_ldp_audit(std::span<const PlanarPoint> set_centers,
                             double epsilon, long trials, std::uint64_t seed,
                             const AuditOptions& options) {
  if (set_centers.empty()) throw EmptySet("empty candidate set");
  if (trials < 1) throw InvalidParams("trials must be >= 1");
  if (set_centers.size() == 1) return 0.0;

  const Polygon hull = sensitivity_hull(set_centers);
  if (hull.kind() == PolyKind::point) return 0.0;

  double min_x = set_centers[0].x, max_x = set_centers[0].x;
  double min_y = set_centers[0].y, max_y = set_centers[0].y;
  for (const auto& c : set_centers) {
    min_x = std::min(min_x, c.x);
    max_x = std::max(max_x, c.x);
    min_y = std::min(min_y, c.y);
    max_y = std::max(max_y, c.y);
  }

  double hull_min_x = 0, hull_max_x = 0, hull_min_y = 0, hull_max_y = 0;
  for (const auto& v : hull.vertices()) {
    hull_min_x = std::min(hull_min_x, v.x);
    hull_max_x = std::max(hull_max_x, v.x);
    hull_min_y = std::min(hull_min_y, v.y);
    hull_max_y = std::max(hull_max_y, v.y);
  }
  const double ext =
      std::max(hull_max_x - hull_min_x, hull_max_y - hull_min_y);
  const double pad = 0.5 * options.span_factor * ext;
  const int scaffold = std::max(8, options.scaffold_bins);
  const BinGrid grid{min_x - pad, min_y - pad,
                     (max_x - min_x + 2 * pad) / scaffold,
                     (max_y - min_y + 2 * pad) / scaffold, scaffold};

  const std::size_t n_cand = set_centers.size();
  const std::size_t n_bins =
      static_cast<std::size_t>(scaffold) * scaffold;
  std::vector<std::vector<long>> counts(n_cand,
                                        std::vector<long>(n_bins, 0));

  // One sampler per candidate; all share the same hull geometry since every
  // candidate is a set member. Samplers are read-only across threads; each
  // (candidate, shard) task owns a forked stream, so the result does not
  // depend on the thread count.
  std::vector<ReleaseSampler> samplers;
  samplers.reserve(n_cand);
  for (std::size_t c = 0; c < n_cand; ++c)
    samplers.emplace_back(set_centers[c], set_centers, epsilon);

  const int shards = std::max(1, options.shards);
  struct Task {
    std::size_t cand;
    int shard;
  };
  std::vector<Task> tasks;
  for (std::size_t c = 0; c < n_cand; ++c)
    for (int s = 0; s < shards; ++s) tasks.push_back({c, s});

  std::atomic<std::size_t> next{0};
  std::mutex merge_mutex;
  const auto worker = [&]() {
    std::vector<long> local(n_bins, 0);
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= tasks.size()) break;
      const Task task = tasks[k];
      std::fill(local.begin(), local.end(), 0);
      RandomStream rng = RandomStream(seed).fork(
          static_cast<std::uint64_t>(task.cand) * 1000003ull + task.shard);
      const long base = trials / shards;
      const long mine = base + (task.shard == 0 ? trials % shards : 0);
      for (long t = 0; t < mine; ++t) {
        const PlanarPoint z = samplers[task.cand].draw(rng);
        const auto idx = grid.index(z);
        if (idx) ++local[*idx];
      }
      std::lock_guard<std::mutex> lock(merge_mutex);
      auto& dst = counts[task.cand];
      for (std::size_t b = 0; b < n_bins; ++b) dst[b] += local[b];
    }
  };

  int threads = options.threads > 0
                    ? options.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min<int>(threads, static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  // Adaptive readout: aggregate the scaffold into equal-mass stripes, sized
  // so each carries about stable_hits per candidate (candidate masses in one
  // region differ by at most e^eps). A pointwise ratio bound survives
  // aggregation over any region.
  const long stable = std::max(options.stable_hits, options.min_hits);
  long in_box_min = 0;
  for (std::size_t c = 0; c < n_cand; ++c) {
    long total = 0;
    for (long v : counts[c]) total += v;
    in_box_min = c == 0 ? total : std::min(in_box_min, total);
  }
  const long target_regions = std::clamp<long>(
      static_cast<long>(in_box_min * std::exp(-epsilon) / stable), 4, 400);
  const int cols = std::max(
      2, static_cast<int>(std::floor(std::sqrt(
             static_cast<double>(target_regions)))));
  const int rows_per_col =
      std::max(2, static_cast<int>(target_regions / cols));

  // Column cuts at mass quantiles of the pooled sample.
  std::vector<long> col_mass(scaffold, 0);
  long mixture_total = 0;
  for (std::size_t c = 0; c < n_cand; ++c) {
    for (int by = 0; by < scaffold; ++by)
      for (int bx = 0; bx < scaffold; ++bx)
        col_mass[bx] += counts[c][static_cast<std::size_t>(by) * scaffold + bx];
  }
  for (long v : col_mass) mixture_total += v;
  if (mixture_total == 0)
    throw InsufficientSamples("no samples fell inside the audited plane");

  std::vector<int> col_edge{0};  // scaffold x-index where each column starts
  long acc = 0;
  for (int bx = 0; bx < scaffold; ++bx) {
    acc += col_mass[bx];
    const long next_cut = mixture_total *
                          static_cast<long>(col_edge.size()) / cols;
    if (acc >= next_cut && static_cast<int>(col_edge.size()) < cols &&
        bx + 1 < scaffold) {
      col_edge.push_back(bx + 1);
    }
  }
  col_edge.push_back(scaffold);

  double worst = -1.0;
  std::vector<long> region(n_cand);
  for (std::size_t ci = 0; ci + 1 < col_edge.size(); ++ci) {
    const int x0 = col_edge[ci], x1 = col_edge[ci + 1];
    // Row cuts at mass quantiles within this column.
    std::vector<long> row_mass(scaffold, 0);
    long col_total = 0;
    for (std::size_t c = 0; c < n_cand; ++c)
      for (int by = 0; by < scaffold; ++by)
        for (int bx = x0; bx < x1; ++bx)
          row_mass[by] +=
              counts[c][static_cast<std::size_t>(by) * scaffold + bx];
    for (long v : row_mass) col_total += v;
    if (col_total == 0) continue;

    std::vector<int> row_edge{0};
    long racc = 0;
    for (int by = 0; by < scaffold; ++by) {
      racc += row_mass[by];
      const long next_cut = col_total *
                            static_cast<long>(row_edge.size()) / rows_per_col;
      if (racc >= next_cut &&
          static_cast<int>(row_edge.size()) < rows_per_col &&
          by + 1 < scaffold) {
        row_edge.push_back(by + 1);
      }
    }
    row_edge.push_back(scaffold);

    for (std::size_t ri = 0; ri + 1 < row_edge.size(); ++ri) {
      std::fill(region.begin(), region.end(), 0);
      for (std::size_t c = 0; c < n_cand; ++c)
        for (int by = row_edge[ri]; by < row_edge[ri + 1]; ++by)
          for (int bx = x0; bx < x1; ++bx)
            region[c] +=
                counts[c][static_cast<std::size_t>(by) * scaffold + bx];
      for (std::size_t i = 0; i < n_cand; ++i) {
        if (region[i] < options.min_hits) continue;
        for (std::size_t j = i + 1; j < n_cand; ++j) {
          if (region[j] < options.min_hits) continue;
          worst = std::max(worst,
                           std::abs(std::log(static_cast<double>(region[i]) /
                                             region[j])));
        }
      }
    }
  }
  if (worst < 0.0)
    throw InsufficientSamples("no output bin reached the hit threshold");
  return worst;
}

}  // namespace locpriv
