#include "mecsweep/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace mecsweep {
namespace metrics {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// 53-bit uniform in [0, 1); keeps the draw sequence independent of the
// standard library's distribution implementation.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::optional<double> efficiency(const net::LoadSeries& series) {
  if (series.bins.empty()) {
    throw std::invalid_argument("efficiency: empty series");
  }
  const double peak = series.peak();
  if (peak <= 0.0) return std::nullopt;  // zero peak: undefined
  return series.average() / peak;
}

EfficiencyReport evaluate_partition(const cluster::Partition& partition,
                                    std::span<const net::LoadSeries> leaf_series,
                                    trace::AppCategory label) {
  EfficiencyReport report;
  report.d_max = partition.d_max;
  report.app_filter = label;

  double sum_eff = 0.0;
  double sum_avg = 0.0;
  double sum_peak = 0.0;
  for (std::size_t c = 0; c < partition.clusters.size(); ++c) {
    const auto& members = partition.clusters[c];
    net::LoadSeries merged;
    merged.origin_hour = leaf_series[members.front()].origin_hour;
    merged.bins.assign(leaf_series[members.front()].bins.size(), 0.0);
    for (const auto leaf : members) {
      const auto& bins = leaf_series[leaf].bins;
      for (std::size_t h = 0; h < bins.size(); ++h) {
        merged.bins[h] += bins[h];
      }
    }
    const double peak = merged.peak();
    if (peak <= 0.0) {
      ++report.zero_peak_clusters;
      continue;
    }
    const double avg = merged.average();
    const double eff = avg / peak;
    report.per_cluster.push_back({c, avg, peak, eff});
    sum_eff += eff;
    sum_avg += avg;
    sum_peak += peak;
  }

  const std::size_t n = report.per_cluster.size();
  report.mean_efficiency = n > 0 ? sum_eff / static_cast<double>(n) : kNaN;
  report.weighted_efficiency = sum_peak > 0.0 ? sum_avg / sum_peak : kNaN;
  return report;
}

EfficiencyReport evaluate_partition(const cluster::Partition& partition,
                                    std::span<const net::Station> stations,
                                    trace::AppCategory filter) {
  const auto series = net::series_for(stations, filter);
  return evaluate_partition(partition, series, filter);
}

std::vector<SweepRow> sweep(const cluster::MergeTree& tree,
                            std::span<const net::LoadSeries> leaf_series,
                            std::span<const double> d_max_values,
                            trace::AppCategory label) {
  std::vector<double> grid(d_max_values.begin(), d_max_values.end());
  std::sort(grid.begin(), grid.end());

  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (const double t : grid) {
    const auto part = cluster::cut_at_threshold(tree, t);
    const auto report = evaluate_partition(part, leaf_series, label);
    SweepRow row;
    row.d_max = t;
    row.n_clusters = part.clusters.size();
    row.mean_bs_per_cluster = static_cast<double>(tree.size()) /
                              static_cast<double>(part.clusters.size());
    row.mean_efficiency = report.mean_efficiency;
    row.weighted_efficiency = report.weighted_efficiency;
    row.zero_peak_clusters = report.zero_peak_clusters;
    rows.push_back(row);
  }
  return rows;
}

std::vector<SweepRow> sweep(const cluster::MergeTree& tree,
                            std::span<const net::Station> stations,
                            std::span<const double> d_max_values,
                            trace::AppCategory filter) {
  const auto series = net::series_for(stations, filter);
  return sweep(tree, series, d_max_values, filter);
}

double DistributionSummary::quantile(double p) const {
  if (values.empty()) {
    throw std::invalid_argument("quantile: empty distribution");
  }
  p = std::clamp(p, 0.0, 1.0);
  const double pos = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

PeakLoadDistribution peak_load_distribution(
    std::span<const net::Station> stations, trace::AppCategory filter) {
  PeakLoadDistribution out;
  for (const auto& st : stations) {
    const double peak = st.series(filter).peak();
    if (peak > 0.0) {
      out.distribution.values.push_back(peak);
    } else {
      ++out.zero_peak_stations;
    }
  }
  if (out.distribution.values.empty()) {
    throw std::invalid_argument("peak_load_distribution: no nonzero peaks");
  }
  std::sort(out.distribution.values.begin(), out.distribution.values.end());
  out.log10_span = std::log10(out.distribution.values.back() /
                              out.distribution.values.front());
  return out;
}

NeighborStats neighbor_peak_ratios(std::span<const net::Station> stations) {
  NeighborStats out;
  const std::size_t n = stations.size();

  std::vector<double> peaks(n);
  for (std::size_t i = 0; i < n; ++i) {
    peaks[i] = stations[i].series(trace::AppCategory::kTotal).peak();
  }

  std::vector<bool> disparate(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (peaks[i] <= 0.0 || peaks[j] <= 0.0) continue;
      if (!geo::hulls_intersect(stations[i].coverage, stations[j].coverage)) {
        continue;
      }
      const double ratio = std::max(peaks[i], peaks[j]) /
                           std::min(peaks[i], peaks[j]);
      out.ratios.values.push_back(ratio);
      ++out.neighbor_pairs;
      if (ratio >= 100.0) {
        disparate[i] = true;
        disparate[j] = true;
      }
    }
  }
  std::sort(out.ratios.values.begin(), out.ratios.values.end());
  const auto qualifying =
      static_cast<double>(std::count(disparate.begin(), disparate.end(), true));
  out.per_cell_disparity = n > 0 ? qualifying / static_cast<double>(n) : 0.0;
  return out;
}

std::vector<net::LoadSeries> randomize_loads(
    std::span<const net::LoadSeries> loads, std::uint64_t seed,
    bool per_cell_max) {
  double global_max = 0.0;
  for (const auto& s : loads) {
    global_max = std::max(global_max, s.peak());
  }
  if (global_max <= 0.0) {
    throw std::invalid_argument("randomize_loads: undefined maximum");
  }

  std::mt19937_64 rng(seed);
  std::vector<net::LoadSeries> out(loads.begin(), loads.end());
  for (auto& series : out) {
    const double m = per_cell_max ? series.peak() : global_max;
    for (auto& bin : series.bins) {
      bin = uniform01(rng) * m;
    }
  }
  return out;
}

}  // namespace metrics
}  // namespace mecsweep
