#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pmse/index.hpp"
#include "pmse/patch.hpp"

namespace pmse {

struct DenoiseParams {
  /// Convergence window M, counted in queue pops.
  std::size_t window = 10;
  /// Stop once w grew by a relative amount below this over the last `window` pops.
  double epsilon = 1e-12;
  /// Ignore convergence and visit every cluster.
  bool exhaustive = false;
};

struct PatchEstimate {
  Patch patch;
  std::size_t processed = 0;
  std::size_t pops = 0;
  /// Every visited cluster had zero likelihood; `patch` is the noisy input.
  bool fallback = false;
};

/// Per-query scratch state. Owned by one thread and reused across queries;
/// "processed" marks are epoch stamps, so a new query costs O(1) to reset.
struct QueryState {
  struct Entry {
    double log_likelihood;
    std::uint32_t cluster;
  };

  // Numerator and denominator, both scaled by exp(-log_scale).
  std::vector<double> s;
  double log_scale = 0.0;
  double w_scaled = 0.0;

  std::vector<std::uint32_t> stamp;
  std::uint32_t epoch = 0;
  std::vector<Entry> queue;
  std::vector<double> log_w_history;

  std::vector<double> query;
  std::vector<std::uint32_t> nonzero;
  std::vector<std::uint32_t> fresh;
  std::size_t processed = 0;
};

/// Online MMSE estimator over a DenoiseIndex.
///
/// For a noisy patch y with mean mu_y the search starts at the leaf holding
/// y / mu_y in every k-d tree, then repeatedly pops the most likely visited
/// cluster and visits its K graph neighbors. Visiting cluster j adds
/// n_j f(y | mu_y c_j) mu_y c_j to the numerator and n_j f(y | mu_y c_j) to
/// the denominator w; the search stops when the queue is empty or w changed
/// by less than epsilon (relative) over the last M pops.
///
/// All weights live in the log domain with a running maximum shift, so the
/// estimate stays finite even when every likelihood underflows a double.
/// Queue ties pop the lower cluster index first, so results are
/// deterministic. The index must outlive the Denoiser.
class Denoiser {
 public:
  explicit Denoiser(const DenoiseIndex& index);

  [[nodiscard]] const DenoiseIndex& index() const noexcept { return *index_; }
  [[nodiscard]] QueryState make_state() const;

  PatchEstimate denoise(const CountPatch& y, const DenoiseParams& params, QueryState& state) const;
  PatchEstimate denoise(const CountPatch& y, const DenoiseParams& params) const;

  /// ln f(y | mean_scale * c_j) using the precomputed centroid logarithms.
  [[nodiscard]] double cluster_log_likelihood(std::size_t j, const CountPatch& y, double mean_scale) const;

 private:
  double log_likelihood(std::size_t j, std::span<const std::uint32_t> y,
                        std::span<const std::uint32_t> nonzero, double total_count, double log_mean,
                        double mean, double log_factorials) const;

  const DenoiseIndex* index_;
  std::vector<double> log_centroids_;
  std::vector<double> centroid_sums_;
  std::vector<double> log_counts_;
};

/// One-shot convenience wrapper; prefer a long-lived Denoiser for many patches.
Patch denoise_patch(const CountPatch& y, const DenoiseIndex& index, const DenoiseParams& params);

}  // namespace pmse
