#ifndef MECSWEEP_EXPORTS_HPP
#define MECSWEEP_EXPORTS_HPP

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "json.hpp"

#include "mecsweep/clustering.hpp"
#include "mecsweep/metrics.hpp"
#include "mecsweep/network.hpp"

namespace mecsweep {
namespace exports {

// GeoJSON geometry (Point / LineString / Polygon) with plane coordinates
// converted back to lon/lat. Polygon rings are closed and
// counter-clockwise.
nlohmann::json hull_geometry(const geo::Hull& hull, const geo::GeoRef& ref);

// FeatureCollection with one Point feature per station; the coverage hull
// and total-load statistics ride along as properties.
nlohmann::json stations_geojson(std::span<const net::Station> stations,
                                const geo::GeoRef& ref);

// FeatureCollection of per-cluster convex hulls of member positions.
nlohmann::json partition_geojson(const cluster::MergeTree& tree,
                                 const cluster::Partition& partition,
                                 std::span<const net::Station> stations,
                                 const geo::GeoRef& ref);

// Plain cluster membership: cluster index -> station ids.
nlohmann::json partition_json(const cluster::MergeTree& tree,
                              const cluster::Partition& partition);

std::string sweep_csv(std::span<const metrics::SweepRow> rows);

// Two-column value/cdf table; `value_column` names the first column.
std::string distribution_csv(const metrics::DistributionSummary& dist,
                             std::string_view value_column);

// Fixed-precision float for CSV output; NaN prints as "nan".
std::string format_number(double v);

// Writes via a temp file in the same directory plus a rename.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content);

}  // namespace exports
}  // namespace mecsweep

#endif  // MECSWEEP_EXPORTS_HPP
