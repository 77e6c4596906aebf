#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pmse/corpus.hpp"

namespace pmse {

/// k-means summary of a corpus: N_C centroids (float32, row-major) and the
/// number of patches assigned to each. Every count is at least 1.
class ClusterModel {
 public:
  ClusterModel() = default;
  ClusterModel(std::size_t dim, std::vector<float> centroids, std::vector<std::uint64_t> counts);

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] std::size_t size() const noexcept { return counts_.size(); }
  [[nodiscard]] bool empty() const noexcept { return counts_.empty(); }

  [[nodiscard]] std::span<const float> centroid(std::size_t j) const noexcept {
    return std::span<const float>(centroids_).subspan(j * dim_, dim_);
  }
  [[nodiscard]] std::uint64_t count(std::size_t j) const noexcept { return counts_[j]; }
  [[nodiscard]] std::span<const float> centroids() const noexcept { return centroids_; }
  [[nodiscard]] std::span<const std::uint64_t> counts() const noexcept { return counts_; }
  [[nodiscard]] std::uint64_t total_count() const noexcept;

  friend bool operator==(const ClusterModel&, const ClusterModel&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<float> centroids_;
  std::vector<std::uint64_t> counts_;
};

struct KMeansOptions {
  std::size_t clusters = 0;
  std::size_t max_iters = 25;
  std::uint64_t seed = 0;
  /// Stop once fewer than this fraction of assignments change in an
  /// iteration. An iteration with no change always stops.
  double min_change_fraction = 1e-3;
};

struct KMeansResult {
  ClusterModel model;
  /// Cluster of every corpus patch in the final assignment.
  std::vector<std::uint32_t> assignment;
  /// Within-cluster sum of squares after each iteration's centroid update.
  std::vector<double> wcss_history;
  std::size_t iterations = 0;
};

/// Lloyd's algorithm with k-means++ seeding.
///
/// Each iteration assigns every patch to its nearest centroid (exact double
/// distances; ties keep the current cluster, else the lowest index), then
/// moves every centroid to the mean of its members. A cluster left empty is
/// reseeded with the patch farthest from its own centroid, taken from a
/// cluster that keeps at least one member. The returned centroids are the
/// means of the returned assignment.
KMeansResult run_kmeans(const PatchCorpus& corpus, const KMeansOptions& options);

ClusterModel kmeans_cluster(const PatchCorpus& corpus, std::size_t clusters, std::size_t max_iters,
                            std::uint64_t seed);

/// Exact squared Euclidean distance accumulated in double, in index order.
double squared_distance(std::span<const double> a, std::span<const float> b) noexcept;
double squared_distance(std::span<const float> a, std::span<const float> b) noexcept;

/// Sum over patches of the squared distance to their assigned centroid.
double within_cluster_sum_of_squares(const PatchCorpus& corpus, const ClusterModel& model,
                                     std::span<const std::uint32_t> assignment);

}  // namespace pmse
