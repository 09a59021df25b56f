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

// Command-line front end: ingestion, POI extraction, simulation, the
// Monte-Carlo indistinguishability audit, and ledger quantification.
//
// Exit codes: 0 success, 2 IO/format error, 3 invalid parameters.

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "locpriv/accounting.hpp"
#include "locpriv/csvio.hpp"
#include "locpriv/mobility.hpp"
#include "locpriv/simharness.hpp"

namespace {

using locpriv::csvio::g9;

constexpr int kExitOk = 0;
constexpr int kExitIo = 2;
constexpr int kExitParams = 3;

std::pair<double, double> parse_lat_lon(const std::string& text) {
  const auto parts = locpriv::csvio::split(text, ',');
  if (parts.size() != 2)
    throw locpriv::InvalidParams("expected lat,lon: " + text);
  try {
    return {std::stod(parts[0]), std::stod(parts[1])};
  } catch (const std::exception&) {
    throw locpriv::InvalidParams("expected lat,lon: " + text);
  }
}

std::vector<locpriv::PlanarPoint> parse_point_list(const std::string& text) {
  std::vector<locpriv::PlanarPoint> out;
  for (const auto& tok : locpriv::csvio::split(text, ';')) {
    const auto xy = locpriv::csvio::split(tok, ',');
    if (xy.size() != 2)
      throw locpriv::InvalidParams("expected x,y;x,y;...: " + text);
    try {
      out.push_back({std::stod(xy[0]), std::stod(xy[1])});
    } catch (const std::exception&) {
      throw locpriv::InvalidParams("bad coordinate: " + tok);
    }
  }
  return out;
}

int run_ingest(const std::string& input, const std::string& origin,
               const std::string& out, int min_visits, long max_gap) {
  const auto [lat0, lon0] = parse_lat_lon(origin);
  const locpriv::GeoReference geo(lat0, lon0);

  locpriv::ParseStats stats;
  auto traces = locpriv::parse_checkins(input, &stats);

  // Venue frequency filter over the parsed rows.
  std::map<std::string, int> venue_count;
  for (const auto& trace : traces)
    for (const auto& p : trace.points) ++venue_count[p.venue_id];
  std::size_t dropped_rare = 0;
  for (auto& trace : traces) {
    std::vector<locpriv::CheckinPoint> kept;
    kept.reserve(trace.points.size());
    for (auto& p : trace.points) {
      if (venue_count[p.venue_id] >= min_visits) {
        kept.push_back(std::move(p));
      } else {
        ++dropped_rare;
      }
    }
    trace.points = std::move(kept);
  }

  std::vector<locpriv::Trajectory> all;
  std::size_t users = 0;
  std::size_t points = 0;
  for (const auto& trace : traces) {
    if (trace.points.empty()) continue;
    ++users;
    auto segs = locpriv::segment_trajectories(trace, geo, max_gap);
    for (auto& s : segs) {
      points += s.points.size();
      all.push_back(std::move(s));
    }
  }
  locpriv::write_trajectories(out, all);
  std::printf(
      "summary: users=%zu trajectories=%zu points=%zu skipped=%zu "
      "dropped_rare=%zu\n",
      users, all.size(), points, stats.skipped_rows, dropped_rare);
  return kExitOk;
}

int run_extract_pois(const std::string& traces_path, double min_time,
                     double max_dist, int min_pts, const std::string& out) {
  const auto trajectories = locpriv::read_trajectories(traces_path);

  // Per-user time-ordered streams.
  std::map<std::string, std::vector<locpriv::TimedPoint>> by_user;
  for (const auto& t : trajectories) {
    auto& dst = by_user[t.user_id];
    dst.insert(dst.end(), t.points.begin(), t.points.end());
  }

  std::vector<locpriv::PoiRecord> pois;
  for (auto& [user, points] : by_user) {
    std::stable_sort(points.begin(), points.end(),
                     [](const auto& a, const auto& b) {
                       return a.timestamp < b.timestamp;
                     });
    auto found = locpriv::extract_pois(points, min_time, max_dist, min_pts);
    for (auto& p : found) {
      p.poi_id = user + ":" + p.poi_id;
      pois.push_back(std::move(p));
    }
  }
  locpriv::write_pois(out, pois);
  std::printf("summary: users=%zu pois=%zu\n", by_user.size(), pois.size());
  return kExitOk;
}

int run_simulate(const std::string& config_path, const std::string& out) {
  auto cfg = locpriv::ExperimentConfig::load(config_path);
  if (!out.empty()) cfg.output_path = out;
  const auto result = locpriv::run_experiment(cfg);
  locpriv::emit_report(result, cfg.output_path);
  std::printf("summary: steps=%d rows=%zu out=%s\n", cfg.steps,
              result.rows.size(), cfg.output_path.c_str());
  return kExitOk;
}

int run_audit(const std::string& set_spec, double epsilon, long trials,
              std::uint64_t seed, int bins, long min_hits, int threads) {
  const auto centers = parse_point_list(set_spec);
  locpriv::AuditOptions opts;
  opts.scaffold_bins = bins;
  opts.min_hits = min_hits;
  opts.threads = threads;
  const double ratio =
      locpriv::monte_carlo_ldp_audit(centers, epsilon, trials, seed, opts);
  std::printf(
      "summary: max_log_ratio=%s trials=%ld candidates=%zu epsilon=%s\n",
      g9(ratio).c_str(), trials, centers.size(), g9(epsilon).c_str());
  return kExitOk;
}

int run_quantify(const std::string& ledger_path, const std::string& target,
                 double prior, bool have_prior) {
  const auto lines = locpriv::csvio::read_lines(ledger_path);
  if (lines.empty() ||
      lines[0] != "kind,target_id,timestep,epsilon,delta,theta")
    throw locpriv::FormatError(
        "ledger must start with kind,target_id,timestep,epsilon,delta,theta");

  std::string want_kind, want_id;
  if (!target.empty()) {
    const auto colon = target.find(':');
    if (colon == std::string::npos)
      throw locpriv::InvalidParams("target must be kind:id");
    want_kind = target.substr(0, colon);
    want_id = target.substr(colon + 1);
  }

  struct Row {
    long timestep;
    locpriv::PrivacyParams params;
  };
  std::vector<Row> rows;
  std::string seen_kind, seen_id;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = locpriv::csvio::split(lines[i], ',');
    if (f.size() != 6)
      throw locpriv::FormatError("bad ledger row: " + lines[i]);
    if (!want_kind.empty() && (f[0] != want_kind || f[1] != want_id)) continue;
    if (want_kind.empty()) {
      if (seen_kind.empty()) {
        seen_kind = f[0];
        seen_id = f[1];
      } else if (seen_kind != f[0] || seen_id != f[1]) {
        throw locpriv::InvalidParams(
            "ledger holds several targets; pick one with --target kind:id");
      }
    }
    try {
      rows.push_back({std::stol(f[2]),
                      {std::stod(f[3]), std::stod(f[4]), std::stod(f[5])}});
    } catch (const std::exception&) {
      throw locpriv::FormatError("bad ledger row: " + lines[i]);
    }
  }
  if (rows.empty()) throw locpriv::InvalidParams("no ledger rows matched");

  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return a.timestep < b.timestep;
  });
  std::vector<locpriv::PrivacyParams> steps;
  for (const auto& r : rows) {
    std::printf("step t=%ld epsilon=%s delta=%s theta=%s\n", r.timestep,
                g9(r.params.epsilon).c_str(), g9(r.params.delta).c_str(),
                g9(r.params.theta).c_str());
    steps.push_back(r.params);
  }
  const auto composed = locpriv::compose(steps);
  std::string line = "summary: steps=" + std::to_string(steps.size()) +
                     " epsilon=" + g9(composed.epsilon_sum) +
                     " delta_multiplier=" + g9(composed.delta_multiplier) +
                     " theta=" + g9(composed.theta);
  if (have_prior) {
    line += " prior=" + g9(prior) + " bound=" + g9(composed.bound(prior)) +
            " bound_clip=" + g9(composed.bound_clipped(prior));
  }
  std::printf("%s\n", line.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"location privacy accounting and release mechanisms"};
  app.require_subcommand(1);

  auto* ingest =
      app.add_subcommand("ingest", "project, filter and segment check-ins");
  std::string in_input, in_origin, in_out;
  int in_min_visits = 10;
  long in_max_gap = 3600;
  ingest->add_option("--input", in_input, "tab-separated check-in file")
      ->required();
  ingest->add_option("--origin", in_origin, "projection origin lat,lon")
      ->required();
  ingest->add_option("--out", in_out, "output trajectory CSV")->required();
  ingest->add_option("--min-visits", in_min_visits,
                     "drop venues visited fewer times than this");
  ingest->add_option("--max-gap", in_max_gap,
                     "trajectory split gap in seconds");

  auto* extract = app.add_subcommand(
      "extract-pois", "stay-point extraction over trajectories");
  std::string ex_traces, ex_out;
  double ex_min_time = 2700.0, ex_max_dist = 250.0;
  int ex_min_pts = 2;
  extract->add_option("--traces", ex_traces, "trajectory CSV from ingest")
      ->required();
  extract->add_option("--min-time", ex_min_time, "minimum stay seconds");
  extract->add_option("--max-dist", ex_max_dist, "maximum stay diameter m");
  extract->add_option("--min-pts", ex_min_pts, "minimum stays per POI");
  extract->add_option("--out", ex_out, "output POI CSV")->required();

  auto* simulate =
      app.add_subcommand("simulate", "run a configured release experiment");
  std::string sim_config, sim_out;
  simulate->add_option("--config", sim_config, "experiment config file")
      ->required();
  simulate->add_option("--out", sim_out, "override the config output path");

  auto* audit = app.add_subcommand(
      "audit", "Monte-Carlo indistinguishability audit of a candidate set");
  std::string au_set;
  double au_epsilon = 1.0;
  long au_trials = 1000000;
  std::uint64_t au_seed = 1;
  int au_bins = 128, au_threads = 0;
  long au_min_hits = 1000;
  audit->add_option("--set", au_set, "candidate centers x,y;x,y;...")
      ->required();
  audit->add_option("--epsilon", au_epsilon, "privacy budget")->required();
  audit->add_option("--trials", au_trials, "releases per candidate");
  audit->add_option("--seed", au_seed, "random seed");
  audit->add_option("--bins", au_bins, "scaffold bins per axis");
  audit->add_option("--min-hits", au_min_hits, "qualifying bin hit count");
  audit->add_option("--threads", au_threads, "worker threads (0 = auto)");

  auto* quantify = app.add_subcommand(
      "quantify", "compose a per-step ledger and print the bound");
  std::string qu_ledger, qu_target;
  double qu_prior = 0.0;
  quantify
      ->add_option("--ledger", qu_ledger,
                   "CSV kind,target_id,timestep,epsilon,delta,theta")
      ->required();
  quantify->add_option("--target", qu_target, "kind:id filter");
  auto* prior_opt =
      quantify->add_option("--prior", qu_prior, "target prior probability");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParams;
  }

  try {
    if (app.got_subcommand(ingest))
      return run_ingest(in_input, in_origin, in_out, in_min_visits,
                        in_max_gap);
    if (app.got_subcommand(extract))
      return run_extract_pois(ex_traces, ex_min_time, ex_max_dist, ex_min_pts,
                              ex_out);
    if (app.got_subcommand(simulate)) return run_simulate(sim_config, sim_out);
    if (app.got_subcommand(audit))
      return run_audit(au_set, au_epsilon, au_trials, au_seed, au_bins,
                       au_min_hits, au_threads);
    if (app.got_subcommand(quantify))
      return run_quantify(qu_ledger, qu_target, qu_prior,
                          prior_opt->count() > 0);
  } catch (const locpriv::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const locpriv::FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const locpriv::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParams;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParams;
  }
  return kExitParams;
}
