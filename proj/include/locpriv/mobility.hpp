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

#ifndef LOCPRIV_MOBILITY_HPP_
#define LOCPRIV_MOBILITY_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "locpriv/accounting.hpp"
#include "locpriv/belief.hpp"
#include "locpriv/geometry.hpp"

namespace locpriv {

struct CheckinPoint {
  std::int64_t timestamp = 0;  // seconds UTC
  double lat = 0.0;
  double lon = 0.0;
  std::string venue_id;
};

// One user's check-in history, timestamps strictly increasing.
struct CheckinTrace {
  std::string user_id;
  std::vector<CheckinPoint> points;
};

struct ParseStats {
  std::size_t total_rows = 0;
  std::size_t skipped_rows = 0;       // unparseable or out-of-range fields
  std::size_t duplicate_points = 0;   // equal timestamps within a user
};

// Tab-separated check-in rows:
//   user_id  venue_id  category  lat  lon  tz_offset_minutes  utc_time
// utc_time accepts epoch seconds, "YYYY-MM-DD[ T]HH:MM:SS[Z]", or
// "Www Mmm dd HH:MM:SS +ZZZZ YYYY". Bad rows are counted and skipped;
// FormatError when more than half of the rows fail, IoError when the file
// cannot be read. Traces come back sorted by user id, each time-sorted.
std::vector<CheckinTrace> parse_checkins(const std::string& path,
                                         ParseStats* stats = nullptr);

// Exposed for fixtures and the CLI.
std::optional<std::int64_t> parse_time_utc(const std::string& text);

// Equirectangular projection around a reference origin; adequate for study
// areas up to ~100 km.
class GeoReference {
 public:
  GeoReference(double lat0_deg, double lon0_deg);  // OutOfRange

  PlanarPoint project(double lat_deg, double lon_deg) const;  // OutOfRange
  std::pair<double, double> unproject(PlanarPoint p) const;   // (lat, lon)

  double lat0() const { return lat0_; }
  double lon0() const { return lon0_; }

 private:
  double lat0_, lon0_, cos_lat0_;
};

inline constexpr double kEarthRadiusM = 6371000.0;

struct TimedPoint {
  std::int64_t timestamp = 0;
  PlanarPoint pos;
};

struct Trajectory {
  std::string user_id;
  std::uint32_t index = 0;  // per-user sequence number
  std::vector<TimedPoint> points;

  bool singleton() const { return points.size() == 1; }
};

// Splits a trace wherever consecutive points are more than max_gap apart.
// Singleton segments are kept (their singleton() flag is derivable).
std::vector<Trajectory> segment_trajectories(const CheckinTrace& trace,
                                             const GeoReference& geo,
                                             std::int64_t max_gap_s = 3600);

struct PoiRecord {
  std::string poi_id;
  PlanarPoint center;
  double mean_dwell_min = 0.0;
  int visit_count = 0;
};

// Stay-point extraction over a time-ordered point stream:
//  - grow a sliding window while the new point stays within max_dist of
//    every window point; when it breaks, emit the window centroid as a stay
//    if it spans at least min_time (last minus first timestamp), else drop
//    the oldest point;
//  - flush the final window the same way;
//  - cluster stays with neighborhood radius max_dist * 0.75 and at least
//    min_pts members, merging overlapping clusters.
// Returns cluster centroids with dwell statistics, ordered by first stay.
std::vector<PoiRecord> extract_pois(std::span<const TimedPoint> points,
                                    double min_time_s, double max_dist_m,
                                    int min_pts);  // EmptyInput, InvalidParams

// Timing-kernel link weights over POIs: with residual = gap - travel, the
// weight of POI i is proportional to exp(-|residual - dwell_i| / tau),
// normalized; a vanishing total falls back to uniform. The row is shared by
// every cell (broadcast).
LinkWeights poi_link_weights(std::span<const PoiRecord> pois, double gap_min,
                             double travel_min,
                             double tau_min = 5.0);  // InvalidTiming

struct TrajectoryPaths {
  std::vector<std::vector<std::uint32_t>> paths;  // cell ids start..dest
  LinkWeights weights;
};

// Candidate trajectories as 4-neighbor shortest grid paths from the start to
// each destination; Pr[l -> T] is 1 on-path, then normalized per cell across
// the trajectories that share it.
TrajectoryPaths trajectory_link_weights(
    const LocationGrid& grid, PlanarPoint start,
    std::span<const PlanarPoint> destinations);  // UnreachableDestination

// CSV round trip for the tables shared with the experiment runner.
// Trajectories: user_id,trajectory,seq,timestamp,x_m,y_m
// POIs:         poi_id,x_m,y_m,mean_dwell_min,visit_count
void write_trajectories(const std::string& path,
                        std::span<const Trajectory> trajectories);
std::vector<Trajectory> read_trajectories(const std::string& path);
void write_pois(const std::string& path, std::span<const PoiRecord> pois);
std::vector<PoiRecord> read_pois(const std::string& path);

}  // namespace locpriv

#endif  // LOCPRIV_MOBILITY_HPP_
