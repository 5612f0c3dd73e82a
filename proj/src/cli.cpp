#include "mecsweep/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "mecsweep/clustering.hpp"
#include "mecsweep/exports.hpp"
#include "mecsweep/metrics.hpp"
#include "mecsweep/network.hpp"

namespace mecsweep {
namespace cli {

namespace fs = std::filesystem;

namespace {

std::string sanitize(std::string_view name) {
  std::string out;
  for (const char c : name) {
    out += std::isalnum(static_cast<unsigned char>(c)) || c == '-' ? c : '_';
  }
  return out.empty() ? std::string("_") : out;
}

trace::Format format_for(const fs::path& path) {
  const auto ext = path.extension().string();
  return (ext == ".jsonl" || ext == ".ndjson") ? trace::Format::kJsonl
                                               : trace::Format::kCsv;
}

// Loads and concatenates every input file; returns false (after printing
// the reason) on fatal problems.
bool load_records(const std::vector<std::string>& inputs,
                  std::vector<trace::TraceRecord>* records) {
  if (inputs.empty()) {
    std::cerr << "error: no input files given\n";
    return false;
  }
  for (const auto& input : inputs) {
    std::ifstream f(input, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot open " << input << "\n";
      return false;
    }
    trace::ParseResult parsed;
    try {
      parsed = trace::parse_records(f, format_for(input));
    } catch (const trace::ParseError& e) {
      std::cerr << "error: " << input << ": " << e.what() << "\n";
      return false;
    }
    if (!parsed.diagnostics.empty()) {
      std::cerr << input << ": skipped " << parsed.diagnostics.size()
                << " malformed line(s)\n";
      const std::size_t show = std::min<std::size_t>(
          parsed.diagnostics.size(), 5);
      for (std::size_t i = 0; i < show; ++i) {
        std::cerr << "  line " << parsed.diagnostics[i].line << ": "
                  << parsed.diagnostics[i].message << "\n";
      }
    }
    records->insert(records->end(),
                    std::make_move_iterator(parsed.records.begin()),
                    std::make_move_iterator(parsed.records.end()));
  }
  return true;
}

bool ensure_out_dir(const std::string& out_dir) {
  if (out_dir.empty()) {
    std::cerr << "error: --out is required\n";
    return false;
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    std::cerr << "error: cannot create " << out_dir << ": " << ec.message()
              << "\n";
    return false;
  }
  return true;
}

bool validate_grid(const std::vector<double>& grid) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 0.0 || std::isnan(grid[i])) return false;
    if (i > 0 && grid[i] <= grid[i - 1]) return false;
  }
  return !grid.empty();
}

struct OperatorData {
  std::string name;
  std::vector<trace::TraceRecord> records;
  std::vector<net::Station> stations;
};

// Shared front half of reconstruct/sweep/stats: parse, partition by
// operator, reconstruct stations, attach loads over the trace-wide hour
// range.
std::optional<std::vector<OperatorData>> build_networks(
    const RunOptions& options, geo::GeoRef* ref_out) {
  std::vector<trace::TraceRecord> records;
  if (!load_records(options.inputs, &records)) return std::nullopt;
  if (records.empty()) {
    std::cerr << "error: no records\n";
    return std::nullopt;
  }

  const auto ref = net::mean_reference(records);
  const auto hours = net::span_of(records);
  if (ref_out != nullptr) *ref_out = ref;

  auto by_operator = trace::partition_by_operator(records);
  if (options.operator_filter) {
    if (by_operator.find(*options.operator_filter) == by_operator.end()) {
      std::cerr << "error: operator '" << *options.operator_filter
                << "' not present in the trace\n";
      return std::nullopt;
    }
  }

  std::vector<OperatorData> result;
  for (auto& [name, op_records] : by_operator) {
    if (options.operator_filter && name != *options.operator_filter) continue;
    OperatorData data;
    data.name = name;
    data.stations = net::reconstruct_stations(op_records, ref);
    net::attach_loads(data.stations, op_records, hours);
    data.records = std::move(op_records);
    result.push_back(std::move(data));
  }
  return result;
}

std::string dmax_label(double d) {
  std::string s = exports::format_number(d);
  std::replace(s.begin(), s.end(), '.', 'p');
  return s;
}

}  // namespace

std::vector<double> default_dmax_grid() {
  std::vector<double> grid{0.0};
  constexpr int kSteps = 40;
  const double lo = std::log10(50.0);
  const double hi = std::log10(50000.0);
  for (int i = 0; i < kSteps; ++i) {
    grid.push_back(
        std::pow(10.0, lo + (hi - lo) * static_cast<double>(i) /
                                static_cast<double>(kSteps - 1)));
  }
  return grid;
}

int run_reconstruct(const RunOptions& options) {
  if (!ensure_out_dir(options.out_dir)) return kExitBadInput;
  geo::GeoRef ref;
  const auto networks = build_networks(options, &ref);
  if (!networks) return kExitBadInput;

  nlohmann::json summary;
  summary["operators"] = nlohmann::json::object();
  std::uint64_t grand_total = 0;

  for (const auto& op : *networks) {
    const auto geojson = exports::stations_geojson(op.stations, ref);
    exports::write_file_atomic(
        fs::path(options.out_dir) /
            ("stations_" + sanitize(op.name) + ".geojson"),
        geojson.dump(2) + "\n");

    std::uint64_t total_bytes = 0;
    std::set<std::string> users;
    double min_lat = 90.0, max_lat = -90.0, min_lon = 180.0, max_lon = -180.0;
    for (const auto& r : op.records) {
      total_bytes += r.total_bytes();
      users.insert(r.user_id);
      min_lat = std::min(min_lat, r.lat);
      max_lat = std::max(max_lat, r.lat);
      min_lon = std::min(min_lon, r.lon);
      max_lon = std::max(max_lon, r.lon);
    }
    grand_total += total_bytes;
    const auto hours = net::span_of(op.records);

    const auto sw = geo::project_to_plane(min_lat, min_lon, ref);
    const auto ne = geo::project_to_plane(max_lat, max_lon, ref);
    summary["operators"][op.name] = {
        {"records", op.records.size()},
        {"unique_users", users.size()},
        {"unique_cells", op.stations.size()},
        {"total_bytes", total_bytes},
        {"coverage_box_km",
         {{"width", (ne.x - sw.x) / 1000.0},
          {"height", (ne.y - sw.y) / 1000.0}}},
        {"hour_span",
         {{"origin_hour", hours.origin_hour}, {"n_hours", hours.n_hours}}},
    };
  }
  summary["total_bytes"] = grand_total;
  exports::write_file_atomic(fs::path(options.out_dir) / "summary.json",
                             summary.dump(2) + "\n");
  return kExitOk;
}

int run_sweep(const RunOptions& options) {
  if (!ensure_out_dir(options.out_dir)) return kExitBadInput;
  const auto grid =
      options.dmax_grid.empty() ? default_dmax_grid() : options.dmax_grid;
  if (!validate_grid(grid)) {
    std::cerr << "error: --dmax-grid must be non-negative and strictly "
                 "increasing\n";
    return kExitBadInput;
  }

  geo::GeoRef ref;
  const auto networks = build_networks(options, &ref);
  if (!networks) return kExitBadInput;

  const std::string app = std::string(trace::category_name(options.app));
  for (const auto& op : *networks) {
    cluster::MergeTree tree;
    try {
      tree = cluster::build_merge_tree(op.stations);
    } catch (const std::length_error& e) {
      std::cerr << "error: " << op.name << ": " << e.what() << "\n";
      return kExitBadInput;
    }
    const auto series = net::series_for(op.stations, options.app);
    const auto rows = metrics::sweep(tree, series, grid, options.app);
    const std::string stem = sanitize(op.name) + "_" + app;
    exports::write_file_atomic(
        fs::path(options.out_dir) / ("sweep_" + stem + ".csv"),
        exports::sweep_csv(rows));

    if (options.randomize) {
      try {
        const auto random_series = metrics::randomize_loads(
            series, options.seed, options.per_cell_max);
        const auto random_rows =
            metrics::sweep(tree, random_series, grid, options.app);
        exports::write_file_atomic(
            fs::path(options.out_dir) / ("sweep_" + stem + "_random.csv"),
            exports::sweep_csv(random_rows));
      } catch (const std::invalid_argument& e) {
        std::cerr << "warning: " << op.name
                  << ": randomized baseline skipped: " << e.what() << "\n";
      }
    }

    if (options.emit_clusters) {
      for (const double t : grid) {
        const auto part = cluster::cut_at_threshold(tree, t);
        const std::string label = sanitize(op.name) + "_" + dmax_label(t);
        exports::write_file_atomic(
            fs::path(options.out_dir) / ("clusters_" + label + ".geojson"),
            exports::partition_geojson(tree, part, op.stations, ref).dump(2) +
                "\n");
        exports::write_file_atomic(
            fs::path(options.out_dir) / ("partition_" + label + ".json"),
            exports::partition_json(tree, part).dump(2) + "\n");
      }
    }
  }
  return kExitOk;
}

int run_stats(const RunOptions& options) {
  if (!ensure_out_dir(options.out_dir)) return kExitBadInput;
  geo::GeoRef ref;
  const auto networks = build_networks(options, &ref);
  if (!networks) return kExitBadInput;

  const std::string app = std::string(trace::category_name(options.app));
  nlohmann::json stats;
  stats["operators"] = nlohmann::json::object();

  for (const auto& op : *networks) {
    nlohmann::json entry;
    entry["n_stations"] = op.stations.size();
    try {
      const auto peaks = metrics::peak_load_distribution(op.stations,
                                                         options.app);
      exports::write_file_atomic(
          fs::path(options.out_dir) /
              ("peak_cdf_" + sanitize(op.name) + "_" + app + ".csv"),
          exports::distribution_csv(peaks.distribution, "peak_load"));
      entry["log10_peak_span"] = peaks.log10_span;
      entry["zero_peak_stations"] = peaks.zero_peak_stations;
    } catch (const std::invalid_argument& e) {
      std::cerr << "warning: " << op.name << ": " << e.what() << "\n";
      entry["log10_peak_span"] = nullptr;
      entry["zero_peak_stations"] = op.stations.size();
    }

    const auto neighbors = metrics::neighbor_peak_ratios(op.stations);
    exports::write_file_atomic(
        fs::path(options.out_dir) /
            ("neighbor_ratios_" + sanitize(op.name) + ".csv"),
        exports::distribution_csv(neighbors.ratios, "peak_ratio"));
    entry["neighbor_pairs"] = neighbors.neighbor_pairs;
    entry["per_cell_disparity"] = neighbors.per_cell_disparity;

    stats["operators"][op.name] = std::move(entry);
  }
  exports::write_file_atomic(fs::path(options.out_dir) / "stats.json",
                             stats.dump(2) + "\n");
  return kExitOk;
}

synth::SynthConfig parse_synth_config(const std::string& path,
                                      std::string* format_out) {
  std::ifstream f(path);
  if (!f) {
    throw std::invalid_argument("cannot open config file " + path);
  }

  std::map<std::string, std::string> kv;
  std::vector<std::string> errors;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    const auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(line_no) +
                       ": expected 'key = value'");
      continue;
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }

  synth::SynthConfig config;
  std::string format = "csv";

  const auto take = [&](const char* key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    auto v = it->second;
    kv.erase(it);
    return v;
  };
  const auto parse_f = [&](const char* key, double* dst) {
    if (const auto v = take(key)) {
      try {
        *dst = std::stod(*v);
      } catch (const std::exception&) {
        errors.push_back(std::string("invalid number for '") + key + "'");
      }
    }
  };
  const auto parse_u = [&](const char* key, std::size_t* dst) {
    if (const auto v = take(key)) {
      try {
        *dst = static_cast<std::size_t>(std::stoull(*v));
      } catch (const std::exception&) {
        errors.push_back(std::string("invalid integer for '") + key + "'");
      }
    }
  };

  if (const auto v = take("seed")) {
    try {
      config.seed = std::stoull(*v);
    } catch (const std::exception&) {
      errors.push_back("invalid integer for 'seed'");
    }
  } else {
    errors.push_back("missing required field 'seed'");
  }

  parse_u("n_stations", &config.n_stations);
  parse_f("area_width_km", &config.area_width_km);
  parse_f("area_height_km", &config.area_height_km);
  parse_u("duration_hours", &config.duration_hours);
  parse_f("peak_scale_mu", &config.peak_scale_mu);
  parse_f("peak_scale_sigma", &config.peak_scale_sigma);
  parse_f("peak_alignment", &config.peak_alignment);
  parse_u("users_per_station", &config.users_per_station);
  parse_u("hotspot_count", &config.hotspot_count);
  parse_f("hotspot_spread_km", &config.hotspot_spread_km);
  parse_f("coverage_radius_m", &config.coverage_radius_m);
  parse_f("noise_sigma", &config.noise_sigma);
  if (const auto v = take("operator")) config.operator_name = *v;

  if (const auto v = take("layout")) {
    if (*v == "uniform") {
      config.layout = synth::SynthConfig::Layout::kUniform;
    } else if (*v == "clustered") {
      config.layout = synth::SynthConfig::Layout::kClustered;
    } else {
      errors.push_back("layout must be 'uniform' or 'clustered'");
    }
  }

  if (const auto v = take("diurnal_profile")) {
    std::stringstream ss(*v);
    std::string tok;
    std::vector<double> weights;
    bool ok = true;
    while (std::getline(ss, tok, ',')) {
      try {
        weights.push_back(std::stod(tok));
      } catch (const std::exception&) {
        ok = false;
      }
    }
    if (!ok || weights.size() != 24) {
      errors.push_back("diurnal_profile needs 24 comma-separated weights");
    } else {
      std::copy(weights.begin(), weights.end(),
                config.diurnal_profile.begin());
    }
  }

  if (const auto v = take("app_mix")) {
    // facebook:0.25,youtube:0.35,maps:0.10,other:0.30
    std::stringstream ss(*v);
    std::string tok;
    bool ok = true;
    std::array<double, trace::kNumAppCategories> mix{};
    while (std::getline(ss, tok, ',')) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos) {
        ok = false;
        break;
      }
      try {
        const auto cat = trace::category_from_name(tok.substr(0, colon));
        if (cat == trace::AppCategory::kTotal) {
          ok = false;
          break;
        }
        mix[static_cast<std::size_t>(cat)] = std::stod(tok.substr(colon + 1));
      } catch (const std::exception&) {
        ok = false;
        break;
      }
    }
    if (!ok) {
      errors.push_back(
          "app_mix must look like facebook:0.25,youtube:0.35,...");
    } else {
      config.app_mix = mix;
    }
  }

  if (const auto v = take("format")) {
    if (*v != "csv" && *v != "jsonl") {
      errors.push_back("format must be 'csv' or 'jsonl'");
    } else {
      format = *v;
    }
  }

  for (const auto& [key, value] : kv) {
    errors.push_back("unknown field '" + key + "'");
  }
  for (const auto& e : synth::validate(config)) {
    errors.push_back(e);
  }

  if (!errors.empty()) {
    std::string joined = "invalid synth config:";
    for (const auto& e : errors) joined += "\n  - " + e;
    throw std::invalid_argument(joined);
  }
  if (format_out != nullptr) *format_out = format;
  return config;
}

int run_synth(const std::string& config_path, const std::string& out_dir) {
  if (!ensure_out_dir(out_dir)) return kExitBadInput;

  synth::SynthConfig config;
  std::string format;
  try {
    config = parse_synth_config(config_path, &format);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }

  const auto result = synth::generate_trace(config);

  std::ostringstream trace_out;
  if (format == "jsonl") {
    trace::write_jsonl(trace_out, result.records);
    exports::write_file_atomic(fs::path(out_dir) / "trace.jsonl",
                               trace_out.str());
  } else {
    trace::write_csv(trace_out, result.records);
    exports::write_file_atomic(fs::path(out_dir) / "trace.csv",
                               trace_out.str());
  }
  exports::write_file_atomic(fs::path(out_dir) / "ground_truth.json",
                             synth::ground_truth_json(config, result));

  std::cout << "generated " << result.records.size() << " records for "
            << config.n_stations << " stations\n";
  return kExitOk;
}

}  // namespace cli
}  // namespace mecsweep
