#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "pmse/corpus.hpp"
#include "pmse/image.hpp"
#include "pmse/kd_forest.hpp"
#include "pmse/kmeans.hpp"
#include "pmse/knn_graph.hpp"

namespace pmse {

/// Everything the online step needs: the clustered prior plus both search
/// structures and the parameters they were built with.
struct DenoiseIndex {
  std::size_t side = 0;
  double mean_intensity = 0.0;
  ClusterModel model;
  KdForest forest;
  KnnGraph graph;

  [[nodiscard]] std::size_t dim() const noexcept { return side * side; }
  [[nodiscard]] std::size_t clusters() const noexcept { return model.size(); }
  [[nodiscard]] std::size_t neighbors() const noexcept { return graph.k; }
  [[nodiscard]] std::size_t trees() const noexcept { return forest.trees.size(); }
  [[nodiscard]] std::size_t leaf_size() const noexcept { return forest.leaf_size; }

  friend bool operator==(const DenoiseIndex&, const DenoiseIndex&) = default;
};

/// Throws kInconsistentIndex describing the first broken invariant: d =
/// side^2, K < N_C, neighbor lists of distinct non-self indices, and every
/// tree partitioning {0..N_C-1} with well-formed child links.
void validate_index(const DenoiseIndex& index);

struct IndexBuildOptions {
  std::size_t side = 14;
  std::size_t clusters = 1'000'000;
  /// 0 selects 2 d.
  std::size_t neighbors = 0;
  std::size_t trees = 64;
  std::size_t leaf_size = 32;
  std::size_t kmeans_max_iters = 25;
  std::optional<std::size_t> corpus_cap;
  std::uint64_t seed = 0;
};

/// Clusters a normalized corpus and builds the forest and graph.
DenoiseIndex build_index(const PatchCorpus& normalized, const IndexBuildOptions& options);

/// Full offline step: ingest, normalize, cluster, forest, graph.
DenoiseIndex build_index(std::span<const IntensityImage> images, const IndexBuildOptions& options);

}  // namespace pmse
