#include "mecsweep/exports.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace mecsweep {
namespace exports {

namespace {

nlohmann::json lonlat(const geo::PlanePoint& p, const geo::GeoRef& ref) {
  const auto deg = geo::to_lat_lon(p, ref);
  return nlohmann::json::array({deg.lon, deg.lat});
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

nlohmann::json hull_geometry(const geo::Hull& hull, const geo::GeoRef& ref) {
  nlohmann::json g;
  switch (hull.kind) {
    case geo::Hull::Kind::kPoint:
      g["type"] = "Point";
      g["coordinates"] = lonlat(hull.vertices[0], ref);
      break;
    case geo::Hull::Kind::kSegment:
      g["type"] = "LineString";
      g["coordinates"] = {lonlat(hull.vertices[0], ref),
                          lonlat(hull.vertices[1], ref)};
      break;
    case geo::Hull::Kind::kPolygon: {
      g["type"] = "Polygon";
      nlohmann::json ring = nlohmann::json::array();
      for (const auto& v : hull.vertices) ring.push_back(lonlat(v, ref));
      ring.push_back(lonlat(hull.vertices[0], ref));  // close the ring
      g["coordinates"] = nlohmann::json::array({ring});
      break;
    }
  }
  return g;
}

nlohmann::json stations_geojson(std::span<const net::Station> stations,
                                const geo::GeoRef& ref) {
  nlohmann::json features = nlohmann::json::array();
  for (const auto& st : stations) {
    const auto& total = st.series(trace::AppCategory::kTotal);
    nlohmann::json props{
        {"operator", st.id.operator_name},
        {"cell_id", st.id.cell_id},
        {"lac", st.id.lac},
        {"observations", st.observation_count},
        {"coverage", hull_geometry(st.coverage, ref)},
    };
    if (!total.bins.empty() && total.peak() > 0.0) {
      props["avg_load"] = total.average();
      props["peak_load"] = total.peak();
      props["efficiency"] = total.average() / total.peak();
    } else {
      props["avg_load"] = 0.0;
      props["peak_load"] = 0.0;
      props["efficiency"] = nullptr;
    }
    features.push_back({
        {"type", "Feature"},
        {"geometry",
         nlohmann::json{{"type", "Point"},
                        {"coordinates", lonlat(st.position, ref)}}},
        {"properties", std::move(props)},
    });
  }
  return nlohmann::json{{"type", "FeatureCollection"},
                        {"features", std::move(features)}};
}

nlohmann::json partition_geojson(const cluster::MergeTree& tree,
                                 const cluster::Partition& partition,
                                 std::span<const net::Station> stations,
                                 const geo::GeoRef& ref) {
  if (stations.size() != tree.size()) {
    throw std::invalid_argument("partition_geojson: station/leaf mismatch");
  }
  nlohmann::json features = nlohmann::json::array();
  for (std::size_t c = 0; c < partition.clusters.size(); ++c) {
    std::vector<geo::PlanePoint> members;
    members.reserve(partition.clusters[c].size());
    for (const auto leaf : partition.clusters[c]) {
      members.push_back(stations[leaf].position);
    }
    features.push_back({
        {"type", "Feature"},
        {"geometry", hull_geometry(geo::convex_hull(members), ref)},
        {"properties",
         nlohmann::json{{"cluster", c},
                        {"n_stations", partition.clusters[c].size()}}},
    });
  }
  return nlohmann::json{{"type", "FeatureCollection"},
                        {"features", std::move(features)}};
}

nlohmann::json partition_json(const cluster::MergeTree& tree,
                              const cluster::Partition& partition) {
  nlohmann::json clusters = nlohmann::json::array();
  const auto ids = cluster_station_ids(tree, partition);
  for (std::size_t c = 0; c < ids.size(); ++c) {
    nlohmann::json members = nlohmann::json::array();
    for (const auto& id : ids[c]) {
      members.push_back({{"operator", id.operator_name},
                         {"cell_id", id.cell_id},
                         {"lac", id.lac}});
    }
    clusters.push_back({{"cluster", c}, {"stations", std::move(members)}});
  }
  return nlohmann::json{{"d_max", partition.d_max},
                        {"clusters", std::move(clusters)}};
}

std::string sweep_csv(std::span<const metrics::SweepRow> rows) {
  std::string out =
      "d_max,n_clusters,mean_bs_per_cluster,mean_efficiency,"
      "weighted_efficiency,zero_peak_clusters\n";
  for (const auto& r : rows) {
    out += format_number(r.d_max);
    out += ',';
    out += std::to_string(r.n_clusters);
    out += ',';
    out += format_number(r.mean_bs_per_cluster);
    out += ',';
    out += format_number(r.mean_efficiency);
    out += ',';
    out += format_number(r.weighted_efficiency);
    out += ',';
    out += std::to_string(r.zero_peak_clusters);
    out += '\n';
  }
  return out;
}

std::string distribution_csv(const metrics::DistributionSummary& dist,
                             std::string_view value_column) {
  std::string out(value_column);
  out += ",cdf\n";
  for (std::size_t i = 0; i < dist.count(); ++i) {
    out += format_number(dist.values[i]);
    out += ',';
    out += format_number(dist.cdf(i));
    out += '\n';
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) {
      throw std::runtime_error("cannot open " + tmp + " for writing");
    }
    f.write(content.data(),
            static_cast<std::streamsize>(content.size()));
    if (!f.good()) {
      throw std::runtime_error("write failed for " + tmp);
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace exports
}  // namespace mecsweep
