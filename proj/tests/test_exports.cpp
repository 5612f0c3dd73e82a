#include "mecsweep/exports.hpp"

#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "doctest.h"

using namespace mecsweep;
using exports::format_number;

namespace {

const geo::GeoRef kRef{0.0, 0.0};

net::Station make_station(const std::string& cell,
                          std::vector<geo::PlanePoint> pts,
                          std::vector<double> total_bins) {
  net::Station st;
  st.id = {"OP", cell, "L"};
  st.coverage = geo::convex_hull(pts);
  st.position = pts[0];
  st.observation_count = pts.size();
  for (auto& s : st.loads) {
    s = {0, std::vector<double>(total_bins.size(), 0.0)};
  }
  st.loads[static_cast<int>(trace::AppCategory::kTotal)] = {0,
                                                            std::move(total_bins)};
  return st;
}

}  // namespace

TEST_CASE("hull geometries map to the three GeoJSON types") {
  const auto point = exports::hull_geometry(
      geo::Hull{geo::Hull::Kind::kPoint, {{0, 0}}}, kRef);
  CHECK(point["type"] == "Point");
  CHECK(point["coordinates"].size() == 2);

  const auto segment = exports::hull_geometry(
      geo::Hull{geo::Hull::Kind::kSegment, {{0, 0}, {100, 0}}}, kRef);
  CHECK(segment["type"] == "LineString");
  CHECK(segment["coordinates"].size() == 2);

  const auto polygon = exports::hull_geometry(
      geo::convex_hull(std::vector<geo::PlanePoint>{
          {0, 0}, {100, 0}, {100, 100}, {0, 100}}),
      kRef);
  CHECK(polygon["type"] == "Polygon");
  const auto& ring = polygon["coordinates"][0];
  REQUIRE(ring.size() == 5);       // closed: first repeated at the end
  CHECK(ring.front() == ring.back());
}

TEST_CASE("station features carry position, coverage, and load stats") {
  const std::vector<net::Station> stations{
      make_station("c1", {{0, 0}, {100, 0}, {50, 80}}, {10, 0, 5}),
      make_station("c2", {{500, 500}}, {0, 0, 0}),
  };
  const auto fc = exports::stations_geojson(stations, kRef);
  CHECK(fc["type"] == "FeatureCollection");
  REQUIRE(fc["features"].size() == 2);

  const auto& f1 = fc["features"][0];
  CHECK(f1["geometry"]["type"] == "Point");
  CHECK(f1["properties"]["cell_id"] == "c1");
  CHECK(f1["properties"]["peak_load"] == 10.0);
  CHECK(f1["properties"]["avg_load"] == 5.0);
  CHECK(f1["properties"]["efficiency"] == 0.5);
  CHECK(f1["properties"]["coverage"]["type"] == "Polygon");

  // Stations without traffic keep a null efficiency.
  CHECK(fc["features"][1]["properties"]["efficiency"].is_null());
}

TEST_CASE("partition exports list members per cluster") {
  const std::vector<geo::PlanePoint> positions{{0, 0}, {100, 0}, {5000, 0}};
  std::vector<net::StationId> ids{
      {"OP", "c0", "L"}, {"OP", "c1", "L"}, {"OP", "c2", "L"}};
  const auto tree = cluster::build_merge_tree(positions, ids);
  const auto part = cluster::cut_at_threshold(tree, 200.0);

  const auto pj = exports::partition_json(tree, part);
  CHECK(pj["d_max"] == 200.0);
  REQUIRE(pj["clusters"].size() == 2);
  CHECK(pj["clusters"][0]["stations"].size() == 2);
  CHECK(pj["clusters"][0]["stations"][0]["cell_id"] == "c0");

  const std::vector<net::Station> stations{
      make_station("c0", {{0, 0}}, {1}),
      make_station("c1", {{100, 0}}, {1}),
      make_station("c2", {{5000, 0}}, {1}),
  };
  const auto gj = exports::partition_geojson(tree, part, stations, kRef);
  REQUIRE(gj["features"].size() == 2);
  CHECK(gj["features"][0]["geometry"]["type"] == "LineString");
  CHECK(gj["features"][1]["geometry"]["type"] == "Point");
  CHECK(gj["features"][0]["properties"]["n_stations"] == 2);
}

TEST_CASE("sweep CSV has the documented columns and handles NaN") {
  std::vector<metrics::SweepRow> rows(2);
  rows[0] = {0.0, 10, 1.0, 0.25, 0.2, 0};
  rows[1] = {100.0, 5, 2.0, std::numeric_limits<double>::quiet_NaN(),
             std::numeric_limits<double>::quiet_NaN(), 5};
  const auto csv = exports::sweep_csv(rows);
  CHECK(csv.find("d_max,n_clusters,mean_bs_per_cluster,mean_efficiency,"
                 "weighted_efficiency,zero_peak_clusters\n") == 0);
  CHECK(csv.find("0,10,1,0.25,0.2,0\n") != std::string::npos);
  CHECK(csv.find("100,5,2,nan,nan,5\n") != std::string::npos);
}

TEST_CASE("distribution CSV pairs values with their CDF") {
  metrics::DistributionSummary dist;
  dist.values = {1.0, 4.0};
  const auto csv = exports::distribution_csv(dist, "peak_load");
  CHECK(csv == "peak_load,cdf\n1,0.5\n4,1\n");
}

TEST_CASE("atomic writes land complete files and replace old content") {
  const auto dir = std::filesystem::temp_directory_path() / "mecsweep_exports";
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.txt";

  exports::write_file_atomic(path, "first");
  exports::write_file_atomic(path, "second");

  std::ifstream f(path);
  std::string content((std::istreambuf_iterator<char>(f)),
                      std::istreambuf_iterator<char>());
  CHECK(content == "second");
  CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("format_number keeps integers terse") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(50.0) == "50");
  CHECK(format_number(0.15) == "0.15");
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
}
