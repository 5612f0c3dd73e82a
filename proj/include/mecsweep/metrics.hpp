#ifndef MECSWEEP_METRICS_HPP
#define MECSWEEP_METRICS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mecsweep/clustering.hpp"
#include "mecsweep/network.hpp"

namespace mecsweep {
namespace metrics {

// average / peak hourly load; the server-utilization proxy. Undefined
// (nullopt) for an all-zero series.
std::optional<double> efficiency(const net::LoadSeries& series);

struct ClusterStats {
  std::size_t cluster = 0;  // index into Partition::clusters
  double avg_load = 0.0;    // bytes/hour
  double peak_load = 0.0;   // bytes/hour
  double efficiency = 0.0;  // in (0, 1]
};

// Per-cluster and aggregate efficiency for one cut. Clusters whose
// filtered series never carries traffic are excluded from both statistics
// and counted in zero_peak_clusters. mean_efficiency is the unweighted
// mean over the remaining clusters; weighted_efficiency is
// sum(avg) / sum(peak) over the same clusters. Both are NaN when every
// cluster is zero-peak.
struct EfficiencyReport {
  double d_max = 0.0;
  trace::AppCategory app_filter = trace::AppCategory::kTotal;
  std::vector<ClusterStats> per_cluster;  // nonzero-peak clusters only
  std::size_t zero_peak_clusters = 0;
  double mean_efficiency = 0.0;
  double weighted_efficiency = 0.0;
};

// Cluster series are the bin-wise sums of member series; leaf_series must
// be indexed like the tree leaves and share one aligned hour range.
EfficiencyReport evaluate_partition(const cluster::Partition& partition,
                                    std::span<const net::LoadSeries> leaf_series,
                                    trace::AppCategory label);

EfficiencyReport evaluate_partition(const cluster::Partition& partition,
                                    std::span<const net::Station> stations,
                                    trace::AppCategory filter);

struct SweepRow {
  double d_max = 0.0;
  std::size_t n_clusters = 0;
  double mean_bs_per_cluster = 0.0;
  double mean_efficiency = 0.0;
  double weighted_efficiency = 0.0;
  std::size_t zero_peak_clusters = 0;
};

// One row per threshold (cut + evaluate), sorted by d_max.
std::vector<SweepRow> sweep(const cluster::MergeTree& tree,
                            std::span<const net::LoadSeries> leaf_series,
                            std::span<const double> d_max_values,
                            trace::AppCategory label);

std::vector<SweepRow> sweep(const cluster::MergeTree& tree,
                            std::span<const net::Station> stations,
                            std::span<const double> d_max_values,
                            trace::AppCategory filter);

// Sorted sample with its empirical CDF: cdf(i) = (i+1)/count.
struct DistributionSummary {
  std::vector<double> values;  // ascending

  std::size_t count() const { return values.size(); }
  double cdf(std::size_t i) const {
    return static_cast<double>(i + 1) / static_cast<double>(values.size());
  }
  // Linear-interpolation quantile, p in [0, 1].
  double quantile(double p) const;
};

struct PeakLoadDistribution {
  DistributionSummary distribution;  // per-station nonzero peak loads
  double log10_span = 0.0;           // log10(max peak / min nonzero peak)
  std::size_t zero_peak_stations = 0;
};

// CDF of per-station peak loads under the filter. Throws
// std::invalid_argument when no station has a nonzero peak.
PeakLoadDistribution peak_load_distribution(
    std::span<const net::Station> stations, trace::AppCategory filter);

// Peak-load disparity between neighboring stations (stations whose
// coverage hulls intersect). For each neighbor pair with two nonzero
// peaks the sample is max(p_i, p_j) / min(p_i, p_j);
// per_cell_disparity is the fraction of all stations having at least one
// neighbor with ratio >= 100.
struct NeighborStats {
  DistributionSummary ratios;
  double per_cell_disparity = 0.0;
  std::size_t neighbor_pairs = 0;  // pairs with both peaks nonzero
};

NeighborStats neighbor_peak_ratios(std::span<const net::Station> stations);

// Replaces every bin of every series with an independent uniform draw on
// [0, M]. M is the maximum bin across all input series, or per-series
// when per_cell_max is set. Deterministic given the seed. Throws
// std::invalid_argument when the global input is all zero.
std::vector<net::LoadSeries> randomize_loads(
    std::span<const net::LoadSeries> loads, std::uint64_t seed,
    bool per_cell_max = false);

}  // namespace metrics
}  // namespace mecsweep

#endif  // MECSWEEP_METRICS_HPP
