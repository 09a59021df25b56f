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

#include "locpriv/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <set>

#include "locpriv/csvio.hpp"

namespace locpriv {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

// Days since 1970-01-01 for a proleptic Gregorian civil date.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

std::optional<std::int64_t> to_epoch(std::int64_t y, unsigned mo, unsigned d,
                                     unsigned h, unsigned mi, unsigned s) {
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || s > 60)
    return std::nullopt;
  return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + s;
}

bool all_digits(const std::string& s, std::size_t from) {
  if (from >= s.size()) return false;
  for (std::size_t i = from; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

std::optional<int> month_from_name(const std::string& m) {
  static const char* names[] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
  for (int i = 0; i < 12; ++i)
    if (m == names[i]) return i + 1;
  return std::nullopt;
}

std::optional<double> parse_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t pos = 0;
  try {
    const double v = std::stod(s, &pos);
    if (pos != s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<long> parse_long(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t pos = 0;
  try {
    const long v = std::stol(s, &pos);
    if (pos != s.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

std::optional<std::int64_t> parse_time_utc(const std::string& text) {
  if (text.empty()) return std::nullopt;

  // Epoch seconds.
  if (all_digits(text, text[0] == '-' ? 1 : 0)) {
    return parse_long(text).has_value()
               ? std::optional<std::int64_t>(*parse_long(text))
               : std::nullopt;
  }

  // ISO: YYYY-MM-DD[T ]HH:MM:SS[Z]
  if (text.size() >= 19 && text[4] == '-' && text[7] == '-' &&
      (text[10] == 'T' || text[10] == ' ')) {
    std::string s = text;
    if (s.back() == 'Z') s.pop_back();
    if (s.size() != 19 || s[13] != ':' || s[16] != ':') return std::nullopt;
    const auto num = [&](int a, int b) -> std::optional<long> {
      return parse_long(s.substr(a, b));
    };
    const auto y = num(0, 4), mo = num(5, 2), d = num(8, 2), h = num(11, 2),
               mi = num(14, 2), sec = num(17, 2);
    if (!y || !mo || !d || !h || !mi || !sec) return std::nullopt;
    return to_epoch(*y, *mo, *d, *h, *mi, *sec);
  }

  // "Www Mmm dd HH:MM:SS +ZZZZ YYYY"
  const auto tok = csvio::split(text, ' ');
  if (tok.size() == 6 && tok[3].size() == 8) {
    const auto mo = month_from_name(tok[1]);
    const auto d = parse_long(tok[2]);
    const auto h = parse_long(tok[3].substr(0, 2));
    const auto mi = parse_long(tok[3].substr(3, 2));
    const auto sec = parse_long(tok[3].substr(6, 2));
    const auto y = parse_long(tok[5]);
    if (!mo || !d || !h || !mi || !sec || !y) return std::nullopt;
    if (tok[4].size() != 5 || (tok[4][0] != '+' && tok[4][0] != '-'))
      return std::nullopt;
    const auto oh = parse_long(tok[4].substr(1, 2));
    const auto om = parse_long(tok[4].substr(3, 2));
    if (!oh || !om) return std::nullopt;
    const long offset_s =
        (tok[4][0] == '-' ? -1 : 1) * (*oh * 3600 + *om * 60);
    const auto local = to_epoch(*y, *mo, *d, *h, *mi, *sec);
    if (!local) return std::nullopt;
    return *local - offset_s;
  }
  return std::nullopt;
}

std::vector<CheckinTrace> parse_checkins(const std::string& path,
                                         ParseStats* stats) {
  const auto lines = csvio::read_lines(path);
  ParseStats st;
  std::map<std::string, std::vector<CheckinPoint>> by_user;

  for (const auto& line : lines) {
    if (line.empty()) continue;
    ++st.total_rows;
    const auto f = csvio::split(line, '\t');
    if (f.size() != 7) {
      ++st.skipped_rows;
      continue;
    }
    const auto lat = parse_double(f[3]);
    const auto lon = parse_double(f[4]);
    const auto tz = parse_long(f[5]);
    const auto ts = parse_time_utc(f[6]);
    if (f[0].empty() || !lat || !lon || !tz || !ts || *lat < -90.0 ||
        *lat > 90.0 || *lon < -180.0 || *lon > 180.0) {
      ++st.skipped_rows;
      continue;
    }
    by_user[f[0]].push_back({*ts, *lat, *lon, f[1]});
  }
  if (st.total_rows > 0 && st.skipped_rows * 2 > st.total_rows)
    throw FormatError("more than half of the rows are unparseable in " + path);

  std::vector<CheckinTrace> traces;
  traces.reserve(by_user.size());
  for (auto& [user, pts] : by_user) {
    std::stable_sort(pts.begin(), pts.end(),
                     [](const CheckinPoint& a, const CheckinPoint& b) {
                       return a.timestamp < b.timestamp;
                     });
    CheckinTrace trace{user, {}};
    trace.points.reserve(pts.size());
    for (auto& p : pts) {
      if (!trace.points.empty() &&
          p.timestamp == trace.points.back().timestamp) {
        ++st.duplicate_points;
        continue;
      }
      trace.points.push_back(std::move(p));
    }
    traces.push_back(std::move(trace));
  }
  if (stats != nullptr) *stats = st;
  return traces;
}

GeoReference::GeoReference(double lat0_deg, double lon0_deg)
    : lat0_(lat0_deg), lon0_(lon0_deg) {
  if (lat0_deg < -90.0 || lat0_deg > 90.0 || lon0_deg < -180.0 ||
      lon0_deg > 180.0)
    throw OutOfRange("reference origin outside geodetic range");
  cos_lat0_ = std::cos(lat0_deg * kDegToRad);
}

PlanarPoint GeoReference::project(double lat_deg, double lon_deg) const {
  if (lat_deg < -90.0 || lat_deg > 90.0 || lon_deg < -180.0 ||
      lon_deg > 180.0)
    throw OutOfRange("coordinate outside geodetic range");
  return {kEarthRadiusM * (lon_deg - lon0_) * kDegToRad * cos_lat0_,
          kEarthRadiusM * (lat_deg - lat0_) * kDegToRad};
}

std::pair<double, double> GeoReference::unproject(PlanarPoint p) const {
  return {lat0_ + p.y / kEarthRadiusM / kDegToRad,
          lon0_ + p.x / (kEarthRadiusM * cos_lat0_) / kDegToRad};
}

std::vector<Trajectory> segment_trajectories(const CheckinTrace& trace,
                                             const GeoReference& geo,
                                             std::int64_t max_gap_s) {
  std::vector<Trajectory> out;
  Trajectory cur{trace.user_id, 0, {}};
  for (const auto& p : trace.points) {
    const TimedPoint tp{p.timestamp, geo.project(p.lat, p.lon)};
    if (!cur.points.empty() &&
        tp.timestamp - cur.points.back().timestamp > max_gap_s) {
      out.push_back(std::move(cur));
      cur = Trajectory{trace.user_id,
                       static_cast<std::uint32_t>(out.size()), {}};
    }
    cur.points.push_back(tp);
  }
  if (!cur.points.empty()) out.push_back(std::move(cur));
  return out;
}

std::vector<PoiRecord> extract_pois(std::span<const TimedPoint> points,
                                    double min_time_s, double max_dist_m,
                                    int min_pts) {
  if (points.empty()) throw EmptyInput("no points for POI extraction");
  if (!(min_time_s > 0) || !(max_dist_m > 0) || min_pts < 1)
    throw InvalidParams("need min_time > 0, max_dist > 0, min_pts >= 1");

  struct Stay {
    PlanarPoint centroid;
    double dwell_s;
  };
  std::vector<Stay> stays;

  // The candidate window is a contiguous index range [lo, i).
  const auto elapsed = [&](std::size_t lo, std::size_t hi_excl) {
    return static_cast<double>(points[hi_excl - 1].timestamp -
                               points[lo].timestamp);
  };
  const auto centroid_of = [&](std::size_t lo, std::size_t hi_excl) {
    PlanarPoint c{0, 0};
    for (std::size_t k = lo; k < hi_excl; ++k) c = c + points[k].pos;
    return (1.0 / static_cast<double>(hi_excl - lo)) * c;
  };
  const auto emit = [&](std::size_t lo, std::size_t hi_excl) {
    stays.push_back({centroid_of(lo, hi_excl), elapsed(lo, hi_excl)});
  };

  std::size_t lo = 0, i = 0;
  const std::size_t n = points.size();
  while (i < n) {
    double diameter = 0.0;
    for (std::size_t k = lo; k < i; ++k)
      diameter = std::max(diameter, distance(points[i].pos, points[k].pos));
    if (diameter <= max_dist_m) {
      ++i;
    } else if (elapsed(lo, i) >= min_time_s) {
      emit(lo, i);
      lo = i;  // window cleared; the current point is reconsidered next
    } else {
      ++lo;
    }
  }
  if (lo < n && elapsed(lo, n) >= min_time_s) emit(lo, n);

  // Density clustering of stays; overlapping neighborhoods merge.
  const double radius = max_dist_m * 0.75;
  std::vector<std::set<std::size_t>> clusters;
  for (std::size_t s = 0; s < stays.size(); ++s) {
    std::set<std::size_t> neighborhood;
    for (std::size_t k = 0; k < stays.size(); ++k) {
      if (distance(stays[k].centroid, stays[s].centroid) <= radius)
        neighborhood.insert(k);
    }
    if (neighborhood.size() < static_cast<std::size_t>(min_pts)) continue;
    std::vector<std::set<std::size_t>> kept;
    for (auto& cluster : clusters) {
      const bool overlaps =
          std::any_of(cluster.begin(), cluster.end(), [&](std::size_t m) {
            return neighborhood.count(m) > 0;
          });
      if (overlaps) {
        neighborhood.insert(cluster.begin(), cluster.end());
      } else {
        kept.push_back(std::move(cluster));
      }
    }
    kept.push_back(std::move(neighborhood));
    clusters = std::move(kept);
  }

  std::sort(clusters.begin(), clusters.end(),
            [](const auto& a, const auto& b) { return *a.begin() < *b.begin(); });

  std::vector<PoiRecord> pois;
  pois.reserve(clusters.size());
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    PlanarPoint center{0, 0};
    double dwell_s = 0.0;
    for (std::size_t m : clusters[c]) {
      center = center + stays[m].centroid;
      dwell_s += stays[m].dwell_s;
    }
    const double k = static_cast<double>(clusters[c].size());
    pois.push_back({"P" + std::to_string(c), (1.0 / k) * center,
                    dwell_s / k / 60.0, static_cast<int>(clusters[c].size())});
  }
  return pois;
}

LinkWeights poi_link_weights(std::span<const PoiRecord> pois, double gap_min,
                             double travel_min, double tau_min) {
  if (pois.empty()) throw EmptyInput("no POIs");
  if (!(travel_min >= 0.0) || !(gap_min >= travel_min))
    throw InvalidTiming("need gap >= travel >= 0");
  if (!(tau_min > 0.0)) throw InvalidParams("tau must be positive");

  const double residual = gap_min - travel_min;
  std::vector<double> row;
  row.reserve(pois.size());
  double sum = 0.0;
  for (const auto& poi : pois) {
    const double w = std::exp(-std::abs(residual - poi.mean_dwell_min) / tau_min);
    row.push_back(w);
    sum += w;
  }
  if (sum > 0.0) {
    for (double& w : row) w /= sum;
  } else {
    std::fill(row.begin(), row.end(), 1.0 / static_cast<double>(row.size()));
  }
  return LinkWeights::broadcast(LinkWeights::Kind::poi, std::move(row));
}

TrajectoryPaths trajectory_link_weights(
    const LocationGrid& grid, PlanarPoint start,
    std::span<const PlanarPoint> destinations) {
  if (destinations.empty()) throw EmptyInput("no destinations");
  const std::size_t n = grid.size();
  const std::uint32_t start_cell = grid.nearest_cell(start);

  // Breadth-first over the 4-neighbor grid graph, fixed neighbor order for
  // deterministic parents.
  constexpr std::uint32_t kUnset = UINT32_MAX;
  std::vector<std::uint32_t> parent(n, kUnset);
  std::deque<std::uint32_t> queue;
  parent[start_cell] = start_cell;
  queue.push_back(start_cell);
  const std::uint32_t nx = grid.nx();
  while (!queue.empty()) {
    const std::uint32_t c = queue.front();
    queue.pop_front();
    const std::uint32_t ix = c % nx;
    const std::uint32_t neighbors[4] = {
        c >= nx ? c - nx : kUnset,            // south
        ix > 0 ? c - 1 : kUnset,              // west
        ix + 1 < nx ? c + 1 : kUnset,         // east
        c + nx < n ? c + nx : kUnset,         // north
    };
    for (std::uint32_t nb : neighbors) {
      if (nb != kUnset && parent[nb] == kUnset) {
        parent[nb] = c;
        queue.push_back(nb);
      }
    }
  }

  TrajectoryPaths out{
      {}, LinkWeights::dense(LinkWeights::Kind::trajectory, n,
                             destinations.size())};
  std::vector<std::uint32_t> on_path_count(n, 0);
  for (const auto& dest : destinations) {
    const std::uint32_t dest_cell = grid.nearest_cell(dest);
    if (parent[dest_cell] == kUnset)
      throw UnreachableDestination("destination cell unreachable");
    std::vector<std::uint32_t> path;
    for (std::uint32_t c = dest_cell;; c = parent[c]) {
      path.push_back(c);
      if (c == start_cell) break;
    }
    std::reverse(path.begin(), path.end());
    for (std::uint32_t c : path) ++on_path_count[c];
    out.paths.push_back(std::move(path));
  }
  for (std::size_t t = 0; t < out.paths.size(); ++t) {
    for (std::uint32_t c : out.paths[t]) {
      out.weights.set(c, t, 1.0 / on_path_count[c]);
    }
  }
  return out;
}

void write_trajectories(const std::string& path,
                        std::span<const Trajectory> trajectories) {
  std::vector<std::string> lines;
  lines.push_back("user_id,trajectory,seq,timestamp,x_m,y_m");
  for (const auto& t : trajectories) {
    for (std::size_t s = 0; s < t.points.size(); ++s) {
      const auto& p = t.points[s];
      lines.push_back(t.user_id + "," + std::to_string(t.index) + "," +
                      std::to_string(s) + "," + std::to_string(p.timestamp) +
                      "," + csvio::g9(p.pos.x) + "," + csvio::g9(p.pos.y));
    }
  }
  csvio::write_lines(path, lines);
}

std::vector<Trajectory> read_trajectories(const std::string& path) {
  const auto lines = csvio::read_lines(path);
  std::vector<Trajectory> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = csvio::split(lines[i], ',');
    if (f.size() != 6) throw FormatError("bad trajectory row in " + path);
    const auto idx = parse_long(f[1]);
    const auto seq = parse_long(f[2]);
    const auto ts = parse_long(f[3]);
    const auto x = parse_double(f[4]);
    const auto y = parse_double(f[5]);
    if (!idx || !seq || !ts || !x || !y)
      throw FormatError("bad trajectory row in " + path);
    const std::uint32_t index = static_cast<std::uint32_t>(*idx);
    if (out.empty() || out.back().user_id != f[0] ||
        out.back().index != index) {
      out.push_back(Trajectory{f[0], index, {}});
    }
    out.back().points.push_back({*ts, {*x, *y}});
  }
  return out;
}

void write_pois(const std::string& path, std::span<const PoiRecord> pois) {
  std::vector<std::string> lines;
  lines.push_back("poi_id,x_m,y_m,mean_dwell_min,visit_count");
  for (const auto& p : pois) {
    lines.push_back(p.poi_id + "," + csvio::g9(p.center.x) + "," +
                    csvio::g9(p.center.y) + "," + csvio::g9(p.mean_dwell_min) +
                    "," + std::to_string(p.visit_count));
  }
  csvio::write_lines(path, lines);
}

std::vector<PoiRecord> read_pois(const std::string& path) {
  const auto lines = csvio::read_lines(path);
  std::vector<PoiRecord> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = csvio::split(lines[i], ',');
    if (f.size() != 5) throw FormatError("bad POI row in " + path);
    const auto x = parse_double(f[1]);
    const auto y = parse_double(f[2]);
    const auto dwell = parse_double(f[3]);
    const auto visits = parse_long(f[4]);
    if (!x || !y || !dwell || !visits)
      throw FormatError("bad POI row in " + path);
    out.push_back({f[0], {*x, *y}, *dwell, static_cast<int>(*visits)});
  }
  return out;
}

}  // namespace locpriv
