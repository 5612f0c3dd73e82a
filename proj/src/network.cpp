#include "mecsweep/network.hpp"

#include <algorithm>
#include <stdexcept>

namespace mecsweep {
namespace net {

std::string to_string(const StationId& id) {
  return id.operator_name + "/" + id.cell_id + "/" + id.lac;
}

double LoadSeries::peak() const {
  double p = 0.0;
  for (const double b : bins) p = std::max(p, b);
  return p;
}

double LoadSeries::average() const {
  if (bins.empty()) return 0.0;
  double s = 0.0;
  for (const double b : bins) s += b;
  return s / static_cast<double>(bins.size());
}

HourRange span_of(std::span<const trace::TraceRecord> records) {
  if (records.empty()) return {};
  std::int64_t lo = hour_of(records.front().timestamp);
  std::int64_t hi = lo;
  for (const auto& r : records) {
    const std::int64_t h = hour_of(r.timestamp);
    lo = std::min(lo, h);
    hi = std::max(hi, h);
  }
  return {lo, static_cast<std::size_t>(hi - lo + 1)};
}

geo::GeoRef mean_reference(std::span<const trace::TraceRecord> records) {
  if (records.empty()) {
    throw std::invalid_argument("mean_reference: no records");
  }
  double lat = 0.0, lon = 0.0;
  for (const auto& r : records) {
    lat += r.lat;
    lon += r.lon;
  }
  const double n = static_cast<double>(records.size());
  return {lat / n, lon / n};
}

std::vector<Station> reconstruct_stations(
    std::span<const trace::TraceRecord> records, const geo::GeoRef& ref) {
  struct CellObs {
    std::vector<geo::PlanePoint> points;
    std::vector<double> weights;
  };
  std::map<StationId, CellObs> cells;
  for (const auto& r : records) {
    auto& obs = cells[{r.operator_name, r.cell_id, r.lac}];
    obs.points.push_back(geo::project_to_plane(r.lat, r.lon, ref));
    obs.weights.push_back(static_cast<double>(r.total_bytes()));
  }

  std::vector<Station> stations;
  stations.reserve(cells.size());
  for (auto& [id, obs] : cells) {
    Station st;
    st.id = id;
    st.observation_count = obs.points.size();
    st.coverage = geo::convex_hull(obs.points);
    const bool any_weight =
        std::any_of(obs.weights.begin(), obs.weights.end(),
                    [](double w) { return w > 0.0; });
    if (any_weight) {
      st.position = geo::weighted_centroid(obs.points, obs.weights);
    } else {
      const std::vector<double> ones(obs.points.size(), 1.0);
      st.position = geo::weighted_centroid(obs.points, ones);
    }
    stations.push_back(std::move(st));
  }
  return stations;  // map iteration keeps them sorted by id
}

LoadBuildResult build_load_series(std::span<const trace::TraceRecord> records,
                                  std::span<const Station> stations,
                                  trace::AppCategory filter,
                                  const HourRange& hours) {
  LoadBuildResult result;
  for (const auto& st : stations) {
    result.series.emplace(
        st.id, LoadSeries{hours.origin_hour,
                          std::vector<double>(hours.n_hours, 0.0)});
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    auto it = result.series.find({r.operator_name, r.cell_id, r.lac});
    if (it == result.series.end()) {
      result.diagnostics.push_back(
          {i, "unknown cell " +
                  to_string({r.operator_name, r.cell_id, r.lac})});
      continue;
    }
    if (!trace::category_matches(filter, trace::categorize(r.app))) continue;
    const std::int64_t h = hour_of(r.timestamp) - hours.origin_hour;
    if (h < 0 || static_cast<std::size_t>(h) >= hours.n_hours) {
      result.diagnostics.push_back({i, "timestamp outside the hour range"});
      continue;
    }
    it->second.bins[static_cast<std::size_t>(h)] +=
        static_cast<double>(r.total_bytes());
  }
  return result;
}

std::vector<trace::Diagnostic> attach_loads(
    std::vector<Station>& stations,
    std::span<const trace::TraceRecord> records, const HourRange& hours) {
  std::map<StationId, std::size_t> index;
  for (std::size_t i = 0; i < stations.size(); ++i) {
    index.emplace(stations[i].id, i);
    for (auto& series : stations[i].loads) {
      series.origin_hour = hours.origin_hour;
      series.bins.assign(hours.n_hours, 0.0);
    }
  }

  std::vector<trace::Diagnostic> diagnostics;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    auto it = index.find({r.operator_name, r.cell_id, r.lac});
    if (it == index.end()) {
      diagnostics.push_back(
          {i, "unknown cell " +
                  to_string({r.operator_name, r.cell_id, r.lac})});
      continue;
    }
    const std::int64_t h = hour_of(r.timestamp) - hours.origin_hour;
    if (h < 0 || static_cast<std::size_t>(h) >= hours.n_hours) {
      diagnostics.push_back({i, "timestamp outside the hour range"});
      continue;
    }
    const auto bytes = static_cast<double>(r.total_bytes());
    auto& st = stations[it->second];
    const auto cat = static_cast<int>(trace::categorize(r.app));
    const auto bin = static_cast<std::size_t>(h);
    st.loads[cat].bins[bin] += bytes;
    st.loads[static_cast<int>(trace::AppCategory::kTotal)].bins[bin] += bytes;
  }
  return diagnostics;
}

std::vector<LoadSeries> series_for(std::span<const Station> stations,
                                   trace::AppCategory filter) {
  std::vector<LoadSeries> out;
  out.reserve(stations.size());
  for (const auto& st : stations) {
    out.push_back(st.series(filter));
  }
  return out;
}

}  // namespace net
}  // namespace mecsweep
