#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pmse/kmeans.hpp"

namespace pmse {

struct KdNode {
  bool leaf = true;
  // Internal nodes: queries with value <= threshold on split_dim go left.
  std::uint32_t split_dim = 0;
  float threshold = 0.0f;
  std::uint64_t left = 0;
  std::uint64_t right = 0;
  // Leaves: centroid indices.
  std::vector<std::uint32_t> indices;

  friend bool operator==(const KdNode&, const KdNode&) = default;
};

/// One tree, nodes stored in pre-order with the root at 0. Child links are
/// positions in `nodes`.
struct KdTree {
  std::vector<KdNode> nodes;

  /// Leaf reached by descending with `query`.
  [[nodiscard]] std::span<const std::uint32_t> leaf_for(std::span<const double> query) const;

  friend bool operator==(const KdTree&, const KdTree&) = default;
};

struct KdForest {
  std::size_t dim = 0;
  std::size_t leaf_size = 0;
  std::vector<KdTree> trees;

  friend bool operator==(const KdForest&, const KdForest&) = default;
};

/// Number of highest-variance dimensions a split dimension is drawn from.
inline constexpr std::size_t kSplitCandidates = 5;

/// Builds `trees` randomized k-d trees over the centroids of `model`.
///
/// At every node the split dimension is drawn uniformly from the (up to)
/// five dimensions with the largest variance among the node's centroids, and
/// the threshold is the lower median of that dimension; values equal to the
/// threshold go left. Nodes with at most `leaf_size` centroids become
/// leaves. A node whose centroids are all identical cannot be split and is
/// kept as an oversized leaf.
KdForest build_kd_forest(const ClusterModel& model, std::size_t trees, std::size_t leaf_size,
                         std::uint64_t seed);

/// Centroid indices in the leaf of tree `tree` that contains `query`.
std::span<const std::uint32_t> kd_leaf_lookup(const KdForest& forest, std::size_t tree,
                                              std::span<const double> query);

}  // namespace pmse
