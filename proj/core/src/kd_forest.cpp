#include "pmse/kd_forest.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

#include "pmse/error.hpp"
#include "pmse/rng.hpp"

namespace pmse {

std::span<const std::uint32_t> KdTree::leaf_for(std::span<const double> query) const {
  std::size_t at = 0;
  while (!nodes[at].leaf) {
    const KdNode& node = nodes[at];
    at = query[node.split_dim] <= static_cast<double>(node.threshold) ? node.left : node.right;
  }
  return nodes[at].indices;
}

namespace {

struct PendingNode {
  std::vector<std::uint32_t> indices;
  std::size_t parent;
  bool is_left;
};

constexpr std::size_t kNoParent = static_cast<std::size_t>(-1);

// Dimensions with positive variance, largest first (ties: lower dimension).
std::vector<std::uint32_t> top_variance_dims(const ClusterModel& model,
                                             const std::vector<std::uint32_t>& indices) {
  const std::size_t d = model.dim();
  std::vector<double> mean(d, 0.0);
  for (auto j : indices) {
    auto c = model.centroid(j);
    for (std::size_t i = 0; i < d; ++i) mean[i] += c[i];
  }
  for (double& m : mean) m /= static_cast<double>(indices.size());
  std::vector<double> var(d, 0.0);
  for (auto j : indices) {
    auto c = model.centroid(j);
    for (std::size_t i = 0; i < d; ++i) {
      const double diff = c[i] - mean[i];
      var[i] += diff * diff;
    }
  }
  std::vector<std::uint32_t> dims(d);
  std::iota(dims.begin(), dims.end(), 0u);
  const std::size_t keep = std::min(kSplitCandidates, d);
  std::partial_sort(dims.begin(), dims.begin() + static_cast<std::ptrdiff_t>(keep), dims.end(),
                    [&](std::uint32_t a, std::uint32_t b) { return var[a] != var[b] ? var[a] > var[b] : a < b; });
  dims.resize(keep);
  std::erase_if(dims, [&](std::uint32_t dim) { return !(var[dim] > 0); });
  return dims;
}

KdTree build_tree(const ClusterModel& model, std::size_t leaf_size, Engine& rng) {
  KdTree tree;
  std::vector<std::uint32_t> all(model.size());
  std::iota(all.begin(), all.end(), 0u);
  std::vector<PendingNode> stack;
  stack.push_back({std::move(all), kNoParent, false});

  while (!stack.empty()) {
    PendingNode pending = std::move(stack.back());
    stack.pop_back();
    const std::size_t at = tree.nodes.size();
    tree.nodes.emplace_back();
    if (pending.parent != kNoParent) {
      auto& parent = tree.nodes[pending.parent];
      (pending.is_left ? parent.left : parent.right) = at;
    }

    auto& indices = pending.indices;
    std::vector<std::uint32_t> dims;
    if (indices.size() > leaf_size) dims = top_variance_dims(model, indices);
    if (dims.empty()) {
      tree.nodes[at].indices = std::move(indices);
      continue;
    }

    const std::uint32_t dim = dims[static_cast<std::size_t>(uniform_index(rng, dims.size()))];
    auto value = [&](std::uint32_t j) { return model.centroid(j)[dim]; };
    std::sort(indices.begin(), indices.end(), [&](std::uint32_t a, std::uint32_t b) {
      return value(a) != value(b) ? value(a) < value(b) : a < b;
    });
    const std::size_t n = indices.size();
    float threshold = value(indices[(n - 1) / 2]);
    if (value(indices[n - 1]) <= threshold) {
      // Upper half all equal to the median: split just below the maximum.
      const float top = value(indices[n - 1]);
      auto first_top = std::find_if(indices.begin(), indices.end(),
                                    [&](std::uint32_t j) { return value(j) == top; });
      threshold = value(*std::prev(first_top));
    }
    const auto split = std::upper_bound(indices.begin(), indices.end(), threshold,
                                        [&](float t, std::uint32_t j) { return t < value(j); });

    KdNode& node = tree.nodes[at];
    node.leaf = false;
    node.split_dim = dim;
    node.threshold = threshold;
    std::vector<std::uint32_t> left(indices.begin(), split);
    std::vector<std::uint32_t> right(split, indices.end());
    // Right is pushed first so the left subtree is emitted next (pre-order).
    stack.push_back({std::move(right), at, false});
    stack.push_back({std::move(left), at, true});
  }
  return tree;
}

}  // namespace

KdForest build_kd_forest(const ClusterModel& model, std::size_t trees, std::size_t leaf_size,
                         std::uint64_t seed) {
  if (model.empty()) fail(ErrorCode::kInvalidArgument, "k-d forest: empty cluster model");
  if (trees == 0) fail(ErrorCode::kInvalidArgument, "k-d forest needs at least one tree");
  if (leaf_size == 0) fail(ErrorCode::kInvalidArgument, "k-d forest leaf size must be at least 1");
  KdForest forest{model.dim(), leaf_size, {}};
  forest.trees.reserve(trees);
  for (std::size_t t = 0; t < trees; ++t) {
    Engine rng(derive_seed(seed, {0x6b64, t}));
    forest.trees.push_back(build_tree(model, leaf_size, rng));
  }
  return forest;
}

std::span<const std::uint32_t> kd_leaf_lookup(const KdForest& forest, std::size_t tree,
                                              std::span<const double> query) {
  if (tree >= forest.trees.size()) {
    fail(ErrorCode::kInvalidArgument, "k-d forest has no tree " + std::to_string(tree));
  }
  if (query.size() != forest.dim) {
    fail(ErrorCode::kDimensionMismatch, "k-d lookup: query has dimension " + std::to_string(query.size()) +
                                            ", forest expects " + std::to_string(forest.dim));
  }
  return forest.trees[tree].leaf_for(query);
}

}  // namespace pmse
