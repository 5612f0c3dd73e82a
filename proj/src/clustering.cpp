#include "mecsweep/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace mecsweep {
namespace cluster {

namespace {

using PairKey = std::pair<std::uint32_t, std::uint32_t>;

// Condensed upper-triangle distance matrix over n slots.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(std::size_t n) : n_(n), data_(n * (n - 1) / 2) {}

  double& at(std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    return data_[i * (2 * n_ - i - 1) / 2 + (j - i - 1)];
  }

 private:
  std::size_t n_;
  std::vector<double> data_;
};

struct RowBest {
  std::uint32_t slot = 0;
  double dist = std::numeric_limits<double>::infinity();
  PairKey key{0, 0};
};

PairKey make_key(std::uint32_t min_leaf_a, std::uint32_t min_leaf_b) {
  return {std::min(min_leaf_a, min_leaf_b), std::max(min_leaf_a, min_leaf_b)};
}

bool better(double dist_a, const PairKey& key_a, double dist_b,
            const PairKey& key_b) {
  if (dist_a != dist_b) return dist_a < dist_b;
  return key_a < key_b;
}

}  // namespace

MergeTree build_merge_tree(std::span<const geo::PlanePoint> positions,
                           std::vector<net::StationId> ids,
                           std::size_t station_limit) {
  const std::size_t n = positions.size();
  if (n == 0) {
    throw std::invalid_argument("build_merge_tree: no stations");
  }
  if (ids.size() != n) {
    throw std::invalid_argument("build_merge_tree: id/position size mismatch");
  }
  if (n > station_limit) {
    throw std::length_error(
        "build_merge_tree: " + std::to_string(n) +
        " stations exceed the in-memory limit of " +
        std::to_string(station_limit));
  }
  for (const auto& p : positions) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw std::invalid_argument("build_merge_tree: non-finite position");
    }
  }

  MergeTree tree;
  tree.leaves = std::move(ids);
  if (n == 1) return tree;

  DistanceMatrix dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      dist.at(i, j) = geo::distance(positions[i], positions[j]);
    }
  }

  std::vector<bool> active(n, true);
  std::vector<std::uint32_t> cluster_index(n);   // dendrogram numbering
  std::vector<std::uint32_t> min_leaf(n);        // smallest member leaf
  std::iota(cluster_index.begin(), cluster_index.end(), 0u);
  std::iota(min_leaf.begin(), min_leaf.end(), 0u);

  std::vector<RowBest> best(n);
  auto recompute_row = [&](std::uint32_t i) {
    RowBest b;
    for (std::uint32_t j = 0; j < n; ++j) {
      if (j == i || !active[j]) continue;
      const double d = dist.at(i, j);
      const PairKey key = make_key(min_leaf[i], min_leaf[j]);
      if (better(d, key, b.dist, b.key)) {
        b = {j, d, key};
      }
    }
    best[i] = b;
  };
  for (std::uint32_t i = 0; i < n; ++i) recompute_row(i);

  tree.merges.reserve(n - 1);
  for (std::size_t step = 0; step + 1 < n; ++step) {
    // Globally closest pair, tie-broken on the min-leaf pair key.
    std::uint32_t a = 0;
    bool found = false;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      if (!found || better(best[i].dist, best[i].key, best[a].dist,
                           best[a].key)) {
        a = i;
        found = true;
      }
    }
    std::uint32_t b = best[a].slot;
    const double d = best[a].dist;

    // Record with the smaller min-leaf side first.
    const std::uint32_t left =
        min_leaf[a] <= min_leaf[b] ? cluster_index[a] : cluster_index[b];
    const std::uint32_t right =
        min_leaf[a] <= min_leaf[b] ? cluster_index[b] : cluster_index[a];
    tree.merges.push_back({left, right, d});

    // Lance-Williams for complete linkage: new distance is the max of the
    // two old ones.
    for (std::uint32_t k = 0; k < n; ++k) {
      if (!active[k] || k == a || k == b) continue;
      dist.at(a, k) = std::max(dist.at(a, k), dist.at(b, k));
    }
    active[b] = false;
    cluster_index[a] = static_cast<std::uint32_t>(n + step);
    min_leaf[a] = std::min(min_leaf[a], min_leaf[b]);

    recompute_row(a);
    for (std::uint32_t k = 0; k < n; ++k) {
      if (!active[k] || k == a) continue;
      if (best[k].slot == a || best[k].slot == b) {
        recompute_row(k);
      } else {
        const double dk = dist.at(k, a);
        const PairKey key = make_key(min_leaf[k], min_leaf[a]);
        if (better(dk, key, best[k].dist, best[k].key)) {
          best[k] = {a, dk, key};
        }
      }
    }
  }

  for (std::size_t k = 1; k < tree.merges.size(); ++k) {
    if (tree.merges[k].distance < tree.merges[k - 1].distance) {
      throw std::logic_error("build_merge_tree: merge distances decreased");
    }
  }
  return tree;
}

MergeTree build_merge_tree(std::span<const net::Station> stations,
                           std::size_t station_limit) {
  std::vector<geo::PlanePoint> positions;
  std::vector<net::StationId> ids;
  positions.reserve(stations.size());
  ids.reserve(stations.size());
  for (const auto& st : stations) {
    positions.push_back(st.position);
    ids.push_back(st.id);
  }
  return build_merge_tree(positions, std::move(ids), station_limit);
}

Partition cut_at_threshold(const MergeTree& tree, double d_max) {
  if (d_max < 0.0 || std::isnan(d_max)) {
    throw std::invalid_argument("cut_at_threshold: d_max must be >= 0");
  }
  const std::size_t n = tree.size();

  std::vector<std::uint32_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };

  // leaf_rep[c] = one leaf inside dendrogram cluster c.
  std::vector<std::uint32_t> leaf_rep(n + tree.merges.size());
  std::iota(leaf_rep.begin(), leaf_rep.begin() + n, 0u);
  for (std::size_t k = 0; k < tree.merges.size(); ++k) {
    const auto& m = tree.merges[k];
    leaf_rep[n + k] = leaf_rep[m.left];
    if (m.distance <= d_max) {
      const std::uint32_t ra = find(leaf_rep[m.left]);
      const std::uint32_t rb = find(leaf_rep[m.right]);
      parent[rb] = ra;
    }
  }

  std::vector<std::vector<std::uint32_t>> groups(n);
  for (std::uint32_t leaf = 0; leaf < n; ++leaf) {
    groups[find(leaf)].push_back(leaf);
  }

  Partition part;
  part.d_max = d_max;
  for (auto& g : groups) {
    if (!g.empty()) part.clusters.push_back(std::move(g));
  }
  std::sort(part.clusters.begin(), part.clusters.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return part;
}

std::vector<std::vector<net::StationId>> cluster_station_ids(
    const MergeTree& tree, const Partition& partition) {
  std::vector<std::vector<net::StationId>> out;
  out.reserve(partition.clusters.size());
  for (const auto& members : partition.clusters) {
    std::vector<net::StationId> ids;
    ids.reserve(members.size());
    for (const auto leaf : members) {
      ids.push_back(tree.leaves[leaf]);
    }
    out.push_back(std::move(ids));
  }
  return out;
}

}  // namespace cluster
}  // namespace mecsweep
