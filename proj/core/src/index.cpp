#include "pmse/index.hpp"

#include <string>
#include <vector>

#include "pmse/error.hpp"
#include "pmse/rng.hpp"

namespace pmse {

namespace {

[[noreturn]] void inconsistent(const std::string& what) { fail(ErrorCode::kInconsistentIndex, what); }

void validate_tree(const KdTree& tree, std::size_t t, std::size_t n_c, std::size_t dim) {
  const std::string where = "tree " + std::to_string(t) + ": ";
  if (tree.nodes.empty()) inconsistent(where + "no nodes");
  std::vector<char> seen(n_c, 0);
  std::vector<char> reached(tree.nodes.size(), 0);
  std::vector<std::uint64_t> stack{0};
  while (!stack.empty()) {
    const auto at = stack.back();
    stack.pop_back();
    if (reached[at]) inconsistent(where + "node reached twice");
    reached[at] = 1;
    const KdNode& node = tree.nodes[at];
    if (node.leaf) {
      for (auto j : node.indices) {
        if (j >= n_c) inconsistent(where + "leaf index out of range");
        if (seen[j]) inconsistent(where + "centroid " + std::to_string(j) + " in two leaves");
        seen[j] = 1;
      }
      continue;
    }
    if (node.split_dim >= dim) inconsistent(where + "split dimension out of range");
    if (node.left >= tree.nodes.size() || node.right >= tree.nodes.size() || node.left == at ||
        node.right == at) {
      inconsistent(where + "child link out of range");
    }
    stack.push_back(node.right);
    stack.push_back(node.left);
  }
  for (std::size_t j = 0; j < n_c; ++j) {
    if (!seen[j]) inconsistent(where + "centroid " + std::to_string(j) + " missing from leaves");
  }
}

}  // namespace

void validate_index(const DenoiseIndex& index) {
  const std::size_t n_c = index.model.size();
  if (index.side == 0) inconsistent("patch side is zero");
  if (index.model.dim() != index.dim()) inconsistent("centroid dimension is not side^2");
  if (n_c == 0) inconsistent("no clusters");
  if (index.graph.k == 0 || index.graph.k >= n_c) inconsistent("K must satisfy 1 <= K < N_C");
  if (index.graph.neighbors.size() != n_c * index.graph.k) inconsistent("neighbor table size mismatch");
  for (std::size_t j = 0; j < n_c; ++j) {
    auto list = index.graph.neighbors_of(j);
    for (std::size_t m = 0; m < list.size(); ++m) {
      if (list[m] >= n_c || list[m] == j) inconsistent("neighbor list " + std::to_string(j) + " has a bad entry");
      for (std::size_t p = 0; p < m; ++p) {
        if (list[p] == list[m]) inconsistent("neighbor list " + std::to_string(j) + " repeats an entry");
      }
    }
  }
  if (index.forest.trees.empty()) inconsistent("forest has no trees");
  if (index.forest.dim != index.dim()) inconsistent("forest dimension mismatch");
  if (index.forest.leaf_size == 0) inconsistent("leaf size is zero");
  for (std::size_t t = 0; t < index.forest.trees.size(); ++t) {
    validate_tree(index.forest.trees[t], t, n_c, index.dim());
  }
}

DenoiseIndex build_index(const PatchCorpus& normalized, const IndexBuildOptions& options) {
  if (normalized.side() != options.side) {
    fail(ErrorCode::kDimensionMismatch, "corpus patch side does not match the requested side");
  }
  const std::size_t k = options.neighbors == 0 ? 2 * normalized.dim() : options.neighbors;
  if (k >= options.clusters) {
    fail(ErrorCode::kInvalidArgument, "K (" + std::to_string(k) + ") must be smaller than N_C (" +
                                          std::to_string(options.clusters) + ")");
  }
  DenoiseIndex index;
  index.side = options.side;
  index.mean_intensity = normalized.mean_intensity();
  index.model = kmeans_cluster(normalized, options.clusters, options.kmeans_max_iters,
                               derive_seed(options.seed, {1}));
  index.forest = build_kd_forest(index.model, options.trees, options.leaf_size, derive_seed(options.seed, {2}));
  index.graph = build_knn_graph(index.model, k);
  return index;
}

DenoiseIndex build_index(std::span<const IntensityImage> images, const IndexBuildOptions& options) {
  auto corpus = normalize_corpus(
      ingest_corpus(images, options.side, options.corpus_cap, derive_seed(options.seed, {0})));
  return build_index(corpus, options);
}

}  // namespace pmse
