#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pmse/kmeans.hpp"

namespace pmse {

/// For each centroid, the K nearest other centroids in ascending distance.
struct KnnGraph {
  std::size_t k = 0;
  /// Flattened N_C x K neighbor table.
  std::vector<std::uint32_t> neighbors;

  [[nodiscard]] std::size_t size() const noexcept { return k == 0 ? 0 : neighbors.size() / k; }
  [[nodiscard]] std::span<const std::uint32_t> neighbors_of(std::size_t j) const noexcept {
    return std::span<const std::uint32_t>(neighbors).subspan(j * k, k);
  }

  friend bool operator==(const KnnGraph&, const KnnGraph&) = default;
};

/// Exact K-nearest-neighbor graph (self excluded) by exhaustive search.
/// Distances are exact double squared Euclidean; equal distances order by
/// the lower centroid index. Requires 1 <= K < N_C.
KnnGraph build_knn_graph(const ClusterModel& model, std::size_t k);

}  // namespace pmse
