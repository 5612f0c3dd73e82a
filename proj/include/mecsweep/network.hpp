#ifndef MECSWEEP_NETWORK_HPP
#define MECSWEEP_NETWORK_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mecsweep/geo.hpp"
#include "mecsweep/trace.hpp"

namespace mecsweep {
namespace net {

// Cells are keyed by (cell_id, lac) within an operator; cell_id alone is
// never assumed globally unique.
struct StationId {
  std::string operator_name;
  std::string cell_id;
  std::string lac;

  auto operator<=>(const StationId&) const = default;
};

std::string to_string(const StationId& id);

// Hourly byte counts over a dense, aligned hour range. Missing hours are
// explicit zeros.
struct LoadSeries {
  std::int64_t origin_hour = 0;  // epoch hour index (timestamp / 3600)
  std::vector<double> bins;

  double peak() const;
  double average() const;  // sum(bins) / bins.size()

  friend bool operator==(const LoadSeries&, const LoadSeries&) = default;
};

// The aligned hour range shared by every station of a trace, so cluster
// series can be added bin-wise with no alignment logic downstream.
struct HourRange {
  std::int64_t origin_hour = 0;
  std::size_t n_hours = 0;
};

inline std::int64_t hour_of(std::int64_t timestamp) {
  // Floor division; timestamps are positive in valid records anyway.
  return timestamp >= 0 ? timestamp / 3600 : (timestamp - 3599) / 3600;
}

// Smallest hour range covering all records. Zero-length for empty input.
HourRange span_of(std::span<const trace::TraceRecord> records);

// A reconstructed base station: traffic-weighted position, convex coverage
// hull of its observations, and one load series per app category plus the
// total.
struct Station {
  StationId id;
  geo::PlanePoint position;
  geo::Hull coverage;
  std::size_t observation_count = 0;
  std::array<LoadSeries, trace::kNumAppCategories + 1>
      loads;  // indexed by AppCategory

  const LoadSeries& series(trace::AppCategory cat) const {
    return loads[static_cast<int>(cat)];
  }
};

// Mean lat/lon across records; the canonical projection reference for a
// trace. Throws std::invalid_argument on empty input.
geo::GeoRef mean_reference(std::span<const trace::TraceRecord> records);

// Builds one Station per distinct (cell_id, lac), sorted by id. Coverage is
// the convex hull of all observation points of the cell; position is the
// centroid of observation points weighted by (bytes_up + bytes_down),
// falling back to the unweighted centroid when every weight is zero. Load
// series are left empty; see attach_loads / build_load_series.
// All records must share one operator.
std::vector<Station> reconstruct_stations(
    std::span<const trace::TraceRecord> records, const geo::GeoRef& ref);

struct LoadBuildResult {
  std::map<StationId, LoadSeries> series;
  std::vector<trace::Diagnostic> diagnostics;  // line = record index
};

// bin[h] = sum of (bytes_up + bytes_down) over records matching the filter
// whose timestamp falls in hour h. Records referencing a cell absent from
// `stations` yield a diagnostic and are skipped.
LoadBuildResult build_load_series(std::span<const trace::TraceRecord> records,
                                  std::span<const Station> stations,
                                  trace::AppCategory filter,
                                  const HourRange& hours);

// Fills every station's per-category and total series in one pass.
// Returns diagnostics for records referencing unknown cells.
std::vector<trace::Diagnostic> attach_loads(
    std::vector<Station>& stations,
    std::span<const trace::TraceRecord> records, const HourRange& hours);

// Extracts one category's series per station, in station order.
std::vector<LoadSeries> series_for(std::span<const Station> stations,
                                   trace::AppCategory filter);

}  // namespace net
}  // namespace mecsweep

#endif  // MECSWEEP_NETWORK_HPP
