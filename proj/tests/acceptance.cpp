// Acceptance suite: one check per criterion, one PASS/FAIL line each.
// Usage: acceptance [path-to-mecsweep-binary]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mecsweep/cli.hpp"
#include "mecsweep/clustering.hpp"
#include "mecsweep/exports.hpp"
#include "mecsweep/metrics.hpp"
#include "mecsweep/network.hpp"
#include "mecsweep/synthgen.hpp"
#include "mecsweep/trace.hpp"
#include "support/oracles.hpp"

using namespace mecsweep;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("[%s] criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", number,
              name.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double elapsed_s(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Clustering oracle equivalence

void criterion_1() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(0xC1);
  std::size_t checked = 0;
  bool ok = true;

  for (int instance = 0; instance < 200 && ok; ++instance) {
    const std::size_t n = 2 + rng() % 39;  // n <= 40
    std::vector<geo::PlanePoint> points;
    std::vector<net::StationId> ids;
    for (std::size_t i = 0; i < n; ++i) {
      points.push_back({5000.0 * u01(rng), 5000.0 * u01(rng)});
      ids.push_back({"OP", std::to_string(i), "L"});
    }
    const auto tree = cluster::build_merge_tree(points, ids);

    for (int t = 0; t < 10 && ok; ++t) {
      double threshold;
      if (t == 0) {
        threshold = 0.0;
      } else if (t == 1) {
        threshold = tree.merges[rng() % tree.merges.size()].distance;
      } else if (t == 2) {
        threshold = 1e9;
      } else {
        threshold = 8000.0 * u01(rng);
      }
      const auto mine = cluster::cut_at_threshold(tree, threshold).clusters;
      const auto naive = oracles::naive_threshold_clusters(points, threshold);
      ok = mine == naive;
      ++checked;
    }
  }

  const double secs = elapsed_s(start);
  report(1, "clustering matches the naive bottom-up loop exactly",
         ok && secs < 10.0,
         std::to_string(checked) + " cuts, " + fmt(secs) + " s");
}

// ---------------------------------------------------------------------------
// Shared synthetic instance for criteria 2, 5, 6, 8

struct SynthAnalysis {
  synth::SynthResult generated;
  std::vector<net::Station> stations;
  cluster::MergeTree tree;
  std::vector<double> grid;
  std::vector<metrics::SweepRow> real_rows;
  std::vector<metrics::SweepRow> random_rows;
};

SynthAnalysis analyze_synth_instance() {
  synth::SynthConfig config;
  config.seed = 20161212;
  config.n_stations = 220;
  config.area_width_km = 12.0;
  config.area_height_km = 12.0;
  config.duration_hours = 168;
  config.peak_scale_sigma = 2.5;
  config.peak_alignment = 0.8;
  config.users_per_station = 6;

  SynthAnalysis a;
  a.generated = synth::generate_trace(config);

  const auto ref = net::mean_reference(a.generated.records);
  a.stations = net::reconstruct_stations(a.generated.records, ref);
  net::attach_loads(a.stations, a.generated.records,
                    net::span_of(a.generated.records));

  a.tree = cluster::build_merge_tree(a.stations);
  a.grid = cli::default_dmax_grid();

  const auto series = net::series_for(a.stations, trace::AppCategory::kTotal);
  a.real_rows = metrics::sweep(a.tree, series, a.grid,
                               trace::AppCategory::kTotal);
  const auto randomized = metrics::randomize_loads(series, 1);
  a.random_rows = metrics::sweep(a.tree, randomized, a.grid,
                                 trace::AppCategory::kTotal);
  return a;
}

// ---------------------------------------------------------------------------
// 2. Monotonicity of cluster counts and sizes over every sweep

void criterion_2(const SynthAnalysis& a) {
  bool ok = true;
  const auto check_rows = [&](const std::vector<metrics::SweepRow>& rows) {
    for (std::size_t i = 1; i < rows.size(); ++i) {
      ok = ok && rows[i].n_clusters <= rows[i - 1].n_clusters;
      ok = ok && rows[i].mean_bs_per_cluster >= rows[i - 1].mean_bs_per_cluster;
    }
  };
  check_rows(a.real_rows);
  check_rows(a.random_rows);

  // An unrelated random instance swept over its own grid.
  std::mt19937_64 rng(0xC2);
  std::vector<geo::PlanePoint> points;
  std::vector<net::StationId> ids;
  std::vector<net::LoadSeries> loads;
  for (int i = 0; i < 120; ++i) {
    points.push_back({20000.0 * u01(rng), 20000.0 * u01(rng)});
    ids.push_back({"OP", std::to_string(i), "L"});
    std::vector<double> bins(24);
    for (auto& b : bins) b = static_cast<double>(rng() % 1000);
    loads.push_back({0, std::move(bins)});
  }
  const auto tree = cluster::build_merge_tree(points, ids);
  const auto rows = metrics::sweep(tree, loads, cli::default_dmax_grid(),
                                   trace::AppCategory::kTotal);
  check_rows(rows);

  report(2, "cluster count falls and cluster size grows with d_max", ok, "");
}

// ---------------------------------------------------------------------------
// 3. The merged-15% vs separate-21% instance

void criterion_3() {
  const auto start = std::chrono::steady_clock::now();

  std::vector<double> yellow(20, 0.0);
  yellow[0] = 58.0;
  std::vector<double> small(20, 0.0);
  for (int h = 1; h <= 5; ++h) small[static_cast<std::size_t>(h)] = 10.0;
  small[6] = 8.0;
  const std::vector<net::LoadSeries> loads{
      {0, yellow}, {0, small}, {0, small}};

  cluster::Partition separate{0.0, {{0}, {1}, {2}}};
  cluster::Partition joined{1e9, {{0, 1, 2}}};

  const auto sep =
      metrics::evaluate_partition(separate, loads, trace::AppCategory::kTotal);
  const auto mer =
      metrics::evaluate_partition(joined, loads, trace::AppCategory::kTotal);

  const bool ok = std::abs(sep.mean_efficiency - 0.21) < 1e-9 &&
                  std::abs(mer.mean_efficiency - 0.15) < 1e-9 &&
                  elapsed_s(start) < 1.0;
  report(3, "spike instance: merged 0.1500 vs separate mean 0.2100", ok,
         "merged " + fmt(mer.mean_efficiency) + ", separate " +
             fmt(sep.mean_efficiency));
}

// ---------------------------------------------------------------------------
// 4. Merge bounds, checked in exact integer arithmetic

void criterion_4() {
  std::mt19937_64 rng(0xC4);
  bool ok = true;

  for (int iter = 0; iter < 500 && ok; ++iter) {
    const std::size_t len = 4 + rng() % 37;
    std::vector<double> a(len), b(len);
    std::int64_t sum_a = 0, sum_b = 0, peak_a = 0, peak_b = 0, peak_m = 0;
    for (std::size_t h = 0; h < len; ++h) {
      const auto va = static_cast<std::int64_t>(rng() % 100000);
      const auto vb = static_cast<std::int64_t>(rng() % 100000);
      a[h] = static_cast<double>(va);
      b[h] = static_cast<double>(vb);
      sum_a += va;
      sum_b += vb;
      peak_a = std::max(peak_a, va);
      peak_b = std::max(peak_b, vb);
      peak_m = std::max(peak_m, va + vb);
    }
    if (peak_a == 0 || peak_b == 0) continue;

    const std::vector<net::LoadSeries> loads{{0, a}, {0, b}};
    cluster::Partition separate{0.0, {{0}, {1}}};
    cluster::Partition joined{1e9, {{0, 1}}};
    const auto sep = metrics::evaluate_partition(separate, loads,
                                                 trace::AppCategory::kTotal);
    const auto mer = metrics::evaluate_partition(joined, loads,
                                                 trace::AppCategory::kTotal);

    // Exact rational comparisons via 128-bit cross multiplication.
    using Wide = __int128;
    const std::int64_t sum_m = sum_a + sum_b;
    const bool ge_min_a = Wide(sum_m) * peak_a >= Wide(sum_a) * peak_m;
    const bool ge_min_b = Wide(sum_m) * peak_b >= Wide(sum_b) * peak_m;
    ok = ok && (ge_min_a || ge_min_b);  // >= min of the two members
    // >= sum(avg)/sum(peak), i.e. peak subadditivity.
    ok = ok && peak_m <= peak_a + peak_b;

    // The implementation's floating-point outputs obey the same bounds,
    // up to one rounding of each division.
    const double slack = 1.0 - 1e-12;
    const double e_merged = mer.per_cluster[0].efficiency;
    const double e_min = std::min(sep.per_cluster[0].efficiency,
                                  sep.per_cluster[1].efficiency);
    ok = ok && e_merged >= e_min * slack;
    ok = ok && e_merged >= sep.weighted_efficiency * slack;
    ok = ok && mer.weighted_efficiency >= sep.weighted_efficiency * slack;
  }
  report(4, "merged efficiency obeys the convexity bounds on 500 pairs", ok,
         "");
}

// ---------------------------------------------------------------------------
// 5 and 6. Sweep shape on the synthetic instance, and the random baseline

void criterion_5(const SynthAnalysis& a, double build_secs) {
  const double at_zero = a.real_rows.front().mean_efficiency;
  const double at_max = a.real_rows.back().mean_efficiency;
  double mid_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < a.real_rows.size(); ++i) {
    mid_min = std::min(mid_min, a.real_rows[i].mean_efficiency);
  }

  const bool ok = at_zero >= 1.2 * mid_min && at_max > mid_min &&
                  build_secs < 60.0;
  report(5, "efficiency dips at mid d_max and recovers at the extremes", ok,
         "eff(0)=" + fmt(at_zero) + ", mid min=" + fmt(mid_min) +
             ", eff(max)=" + fmt(at_max) + ", " + fmt(build_secs) + " s");
}

void criterion_6(const SynthAnalysis& a) {
  std::size_t above = 0;
  for (std::size_t i = 0; i < a.real_rows.size(); ++i) {
    if (a.random_rows[i].mean_efficiency > a.real_rows[i].mean_efficiency) {
      ++above;
    }
  }
  const double fraction =
      static_cast<double>(above) / static_cast<double>(a.real_rows.size());
  report(6, "uniform-random loads beat real loads at 95% of grid points",
         fraction >= 0.95, fmt(100.0 * fraction) + "% of points");
}

// ---------------------------------------------------------------------------
// 7. Geometry oracles

// Containment re-implemented independently of the hull code under test.
bool oracle_contains(const geo::Hull& h, const geo::PlanePoint& p,
                     double tol) {
  const auto& v = h.vertices;
  if (h.kind == geo::Hull::Kind::kPoint) {
    return std::hypot(p.x - v[0].x, p.y - v[0].y) <= tol;
  }
  if (h.kind == geo::Hull::Kind::kSegment) {
    const double vx = v[1].x - v[0].x, vy = v[1].y - v[0].y;
    const double len2 = vx * vx + vy * vy;
    double t = ((p.x - v[0].x) * vx + (p.y - v[0].y) * vy) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p.x - (v[0].x + t * vx), p.y - (v[0].y + t * vy)) <= tol;
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& s = v[i];
    const auto& e = v[(i + 1) % v.size()];
    const double cross =
        (e.x - s.x) * (p.y - s.y) - (e.y - s.y) * (p.x - s.x);
    if (cross < -tol * std::hypot(e.x - s.x, e.y - s.y)) return false;
  }
  return true;
}

void criterion_7() {
  std::mt19937_64 rng(0xC7);
  bool hulls_ok = true;
  for (int iter = 0; iter < 1000 && hulls_ok; ++iter) {
    const std::size_t n = 1 + rng() % 60;
    std::vector<geo::PlanePoint> points;
    for (std::size_t i = 0; i < n; ++i) {
      points.push_back({20000.0 * u01(rng), 20000.0 * u01(rng)});
    }
    const auto hull = geo::convex_hull(points);
    hulls_ok = hulls_ok && geo::convex_hull(hull.vertices) == hull;
    for (const auto& p : points) {
      hulls_ok = hulls_ok && oracle_contains(hull, p, 1e-9);
    }
  }

  bool projection_ok = true;
  double worst = 0.0;
  struct Box {
    double lat, lon, w_km, h_km;
  };
  std::vector<Box> boxes{{33.75, -84.39, 55, 66},
                         {34.05, -118.24, 46, 73},
                         {37.77, -122.42, 14, 11}};
  for (int i = 0; i < 20; ++i) {
    boxes.push_back({30.0 * u01(rng), -150.0 + 300.0 * u01(rng),
                     10.0 + 90.0 * u01(rng), 10.0 + 90.0 * u01(rng)});
  }
  for (const auto& box : boxes) {
    const geo::GeoRef ref{box.lat, box.lon};
    const double dlat = box.h_km / 111.19493;
    const double dlon = box.w_km / (111.19493 * std::cos(box.lat * 0.0174533));
    for (int pair = 0; pair < 200; ++pair) {
      const double lat1 = box.lat + (u01(rng) - 0.5) * dlat;
      const double lon1 = box.lon + (u01(rng) - 0.5) * dlon;
      const double lat2 = box.lat + (u01(rng) - 0.5) * dlat;
      const double lon2 = box.lon + (u01(rng) - 0.5) * dlon;
      const double truth = oracles::haversine_m(lat1, lon1, lat2, lon2);
      if (truth < 50.0) continue;
      const double planar = geo::distance(
          geo::project_to_plane(lat1, lon1, ref),
          geo::project_to_plane(lat2, lon2, ref));
      const double err = std::abs(planar - truth) / truth;
      worst = std::max(worst, err);
      projection_ok = projection_ok && err < 0.005;
    }
  }

  report(7, "hull containment/idempotence and projection accuracy",
         hulls_ok && projection_ok,
         "worst projection error " + fmt(100.0 * worst) + "%");
}

// ---------------------------------------------------------------------------
// 8. Byte conservation and CLI determinism

std::map<std::string, std::string> read_dir(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream f(entry.path(), std::ios::binary);
    out[entry.path().filename().string()] = {
        std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
  }
  return out;
}

void criterion_8(const SynthAnalysis& a, const char* binary) {
  // Conservation: bytes in records equal bytes in the aggregated series.
  double record_bytes = 0.0;
  for (const auto& r : a.generated.records) {
    record_bytes += static_cast<double>(r.total_bytes());
  }
  double series_bytes = 0.0;
  for (const auto& st : a.stations) {
    for (const double b : st.series(trace::AppCategory::kTotal).bins) {
      series_bytes += b;
    }
  }
  const bool conserved = record_bytes == series_bytes;

  // Determinism: every command, run twice into fresh directories, produces
  // byte-identical files.
  const auto root = fs::temp_directory_path() / "mecsweep_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);

  const auto config_path = root / "config.txt";
  {
    std::ofstream cfg(config_path);
    cfg << "seed = 31\nn_stations = 24\nduration_hours = 48\n"
           "users_per_station = 4\narea_width_km = 5\narea_height_km = 5\n";
  }

  bool identical = true;
  const auto synth_a = (root / "synth_a").string();
  const auto synth_b = (root / "synth_b").string();
  identical &= cli::run_synth(config_path.string(), synth_a) == 0;
  identical &= cli::run_synth(config_path.string(), synth_b) == 0;
  identical = identical && read_dir(synth_a) == read_dir(synth_b);

  cli::RunOptions options;
  options.inputs = {(fs::path(synth_a) / "trace.csv").string()};
  options.randomize = true;
  options.seed = 9;
  options.dmax_grid = {0.0, 100.0, 500.0, 2500.0};
  for (const auto& [name, runner] :
       std::vector<std::pair<std::string, int (*)(const cli::RunOptions&)>>{
           {"reconstruct", cli::run_reconstruct},
           {"sweep", cli::run_sweep},
           {"stats", cli::run_stats}}) {
    options.out_dir = (root / (name + "_a")).string();
    identical &= runner(options) == 0;
    options.out_dir = (root / (name + "_b")).string();
    identical &= runner(options) == 0;
    identical = identical &&
                read_dir(root / (name + "_a")) == read_dir(root / (name + "_b"));
  }

  // The installed binary end to end, when its path is provided.
  std::string binary_note = ", binary not exercised";
  if (binary != nullptr) {
    const auto bin_a = root / "bin_a";
    const auto bin_b = root / "bin_b";
    fs::create_directories(bin_a);
    fs::create_directories(bin_b);
    const std::string base = std::string("\"") + binary + "\"";
    const auto run = [&](const std::string& args) {
      return std::system((base + " " + args + " > /dev/null 2>&1").c_str());
    };
    bool bin_ok = true;
    bin_ok &= run("synth -c " + config_path.string() + " -o " +
                  bin_a.string()) == 0;
    bin_ok &= run("synth -c " + config_path.string() + " -o " +
                  bin_b.string()) == 0;
    bin_ok &= run("sweep -i " + bin_a.string() + "/trace.csv -o " +
                  bin_a.string() + "/sweep --randomize --seed 9") == 0;
    bin_ok &= run("sweep -i " + bin_b.string() + "/trace.csv -o " +
                  bin_b.string() + "/sweep --randomize --seed 9") == 0;
    bin_ok = bin_ok && read_dir(bin_a) == read_dir(bin_b);
    bin_ok = bin_ok && read_dir(bin_a / "sweep") == read_dir(bin_b / "sweep");
    identical = identical && bin_ok;
    binary_note = ", binary reruns identical";
  }

  fs::remove_all(root);
  report(8, "byte conservation and rerun determinism",
         conserved && identical,
         "bytes " + fmt(record_bytes) + (conserved ? " conserved" : " LOST") +
             binary_note);
}

// ---------------------------------------------------------------------------
// 9. Monte Carlo expectation of the uniform-load efficiency

void criterion_9() {
  const std::vector<net::LoadSeries> unit{{0, std::vector<double>(24, 1.0)}};
  double sum = 0.0;
  const int kSeeds = 10000;
  for (int seed = 0; seed < kSeeds; ++seed) {
    const auto randomized =
        metrics::randomize_loads(unit, static_cast<std::uint64_t>(seed));
    sum += *metrics::efficiency(randomized[0]);
  }
  const double mean = sum / kSeeds;
  report(9, "24-bin uniform loads average 0.524 +/- 0.02 efficiency",
         std::abs(mean - 0.524) <= 0.02, "mean " + fmt(mean));
}

}  // namespace

int main(int argc, char** argv) {
  const char* binary = argc > 1 ? argv[1] : nullptr;

  criterion_1();

  const auto synth_start = std::chrono::steady_clock::now();
  const auto analysis = analyze_synth_instance();
  const double synth_secs = elapsed_s(synth_start);

  criterion_2(analysis);
  criterion_3();
  criterion_4();
  criterion_5(analysis, synth_secs);
  criterion_6(analysis);
  criterion_7();
  criterion_8(analysis, binary);
  criterion_9();

  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
