#ifndef MECSWEEP_CLUSTERING_HPP
#define MECSWEEP_CLUSTERING_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "mecsweep/network.hpp"

namespace mecsweep {
namespace cluster {

// Upper bound on stations clustered in-memory; the quadratic distance
// matrix is the binding constraint.
inline constexpr std::size_t kDefaultStationLimit = 12000;

// One agglomeration step. Cluster indices follow the usual dendrogram
// numbering: 0..n-1 are leaves, n+k is the cluster created by merge k.
// `left` always holds the smaller minimum leaf index of the two.
struct Merge {
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  double distance = 0.0;
};

// Complete-linkage dendrogram over one operator's stations. Merge
// distances are non-decreasing (complete linkage is reducible), which
// build_merge_tree asserts.
struct MergeTree {
  std::vector<net::StationId> leaves;
  std::vector<Merge> merges;  // exactly leaves.size() - 1 entries

  std::size_t size() const { return leaves.size(); }
};

// A cut of the tree at a given threshold: disjoint clusters of leaf
// indices covering all leaves. Members are sorted; clusters are ordered
// by their smallest member.
struct Partition {
  double d_max = 0.0;
  std::vector<std::vector<std::uint32_t>> clusters;
};

// Builds the merge sequence produced by repeatedly merging the pair of
// clusters at minimum complete-linkage distance (maximum pairwise point
// distance). Ties break on the lexicographically smallest pair of
// (min leaf index of one side, min leaf index of the other), smaller
// side first. Leaf order is input order.
// Throws std::invalid_argument on empty input or non-finite positions,
// std::length_error above `station_limit`.
MergeTree build_merge_tree(std::span<const geo::PlanePoint> positions,
                           std::vector<net::StationId> ids,
                           std::size_t station_limit = kDefaultStationLimit);

MergeTree build_merge_tree(std::span<const net::Station> stations,
                           std::size_t station_limit = kDefaultStationLimit);

// Applies, in order, every merge with distance <= d_max. Equivalent to
// running the bottom-up loop with termination threshold d_max.
Partition cut_at_threshold(const MergeTree& tree, double d_max);

// Resolves a partition's leaf indices to station ids.
std::vector<std::vector<net::StationId>> cluster_station_ids(
    const MergeTree& tree, const Partition& partition);

}  // namespace cluster
}  // namespace mecsweep

#endif  // MECSWEEP_CLUSTERING_HPP
