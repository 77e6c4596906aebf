#include "pmse/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Core>

#include "pmse/error.hpp"
#include "pmse/rng.hpp"

namespace pmse {

using RowMatrixF = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

ClusterModel::ClusterModel(std::size_t dim, std::vector<float> centroids, std::vector<std::uint64_t> counts)
    : dim_(dim), centroids_(std::move(centroids)), counts_(std::move(counts)) {
  if (dim_ == 0) fail(ErrorCode::kInvalidArgument, "cluster model dimension must be positive");
  if (centroids_.size() != counts_.size() * dim_) {
    fail(ErrorCode::kDimensionMismatch, "cluster model: centroid storage does not match counts");
  }
  for (auto n : counts_) {
    if (n == 0) fail(ErrorCode::kInvalidArgument, "cluster model: empty cluster");
  }
  for (float v : centroids_) {
    if (!std::isfinite(v) || v < 0) fail(ErrorCode::kDomainError, "cluster model: centroid values must be finite and nonnegative");
  }
}

std::uint64_t ClusterModel::total_count() const noexcept {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

double squared_distance(std::span<const double> a, std::span<const float> b) noexcept {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - static_cast<double>(b[i]);
    sum += diff * diff;
  }
  return sum;
}

double squared_distance(std::span<const float> a, std::span<const float> b) noexcept {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    sum += diff * diff;
  }
  return sum;
}

double within_cluster_sum_of_squares(const PatchCorpus& corpus, const ClusterModel& model,
                                     std::span<const std::uint32_t> assignment) {
  double total = 0.0;
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    total += squared_distance(corpus.patch(k), model.centroid(assignment[k]));
  }
  return total;
}

namespace {

constexpr std::uint32_t kUnassigned = std::numeric_limits<std::uint32_t>::max();

class Lloyd {
 public:
  struct Candidate {
    float approx;
    std::uint32_t cluster;
  };

  Lloyd(const PatchCorpus& corpus, std::size_t clusters)
      : corpus_(corpus),
        n_(corpus.size()),
        d_(corpus.dim()),
        k_(clusters),
        points_(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(d_)),
        centroids_(k_ * d_, 0.0f),
        counts_(k_, 0),
        assignment_(n_, kUnassigned) {
    for (std::size_t i = 0; i < n_; ++i) {
      auto p = corpus.patch(i);
      for (std::size_t j = 0; j < d_; ++j) {
        points_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = static_cast<float>(p[j]);
      }
    }
  }

  // k-means++: first centre uniform, then D^2-weighted draws.
  void seed(std::uint64_t seed) {
    Engine rng(derive_seed(seed, {0x6b6d7070}));
    std::vector<char> taken(n_, 0);
    std::vector<double> dist2(n_, std::numeric_limits<double>::infinity());
    // Centre that realises dist2[i], and squared distances from the newest
    // centre to all earlier ones. A point with |c_new - c_owner|^2 > 4 dist2
    // cannot move closer, so its row is never read.
    std::vector<std::uint32_t> owner(n_, 0);
    std::vector<double> centre_gap(k_);
    constexpr double kPruneMargin = 1.0 + 1e-3;
    std::size_t pick = static_cast<std::size_t>(uniform_index(rng, n_));
    for (std::size_t c = 0; c < k_; ++c) {
      taken[pick] = 1;
      auto src = corpus_.patch(pick);
      std::transform(src.begin(), src.end(), centroids_.begin() + static_cast<std::ptrdiff_t>(c * d_),
                     [](double v) { return static_cast<float>(v); });
      if (c + 1 == k_) break;

      Eigen::Map<const Eigen::RowVectorXf> centre(centroids_.data() + c * d_, static_cast<Eigen::Index>(d_));
      if (c > 0) {
        Eigen::Map<const RowMatrixF> earlier(centroids_.data(), static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(d_));
        Eigen::Map<Eigen::VectorXd>(centre_gap.data(), static_cast<Eigen::Index>(c)) =
            (earlier.rowwise() - centre).rowwise().squaredNorm().cast<double>();
      }
      double total = 0.0;
      for (std::size_t i = 0; i < n_; ++i) {
        if (taken[i]) {
          dist2[i] = 0.0;
        } else if (c == 0 || centre_gap[owner[i]] <= 4.0 * kPruneMargin * dist2[i]) {
          const double fresh =
              static_cast<double>((points_.row(static_cast<Eigen::Index>(i)) - centre).squaredNorm());
          if (fresh < dist2[i]) {
            dist2[i] = fresh;
            owner[i] = static_cast<std::uint32_t>(c);
          }
        }
        total += dist2[i];
      }
      pick = n_;
      if (total > 0) {
        const double target = uniform01(rng) * total;
        double acc = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
          acc += dist2[i];
          if (acc > target && dist2[i] > 0) {
            pick = i;
            break;
          }
        }
        if (pick == n_) {
          // Round-off pushed the target past the last positive weight.
          for (std::size_t i = n_; i-- > 0;) {
            if (dist2[i] > 0) {
              pick = i;
              break;
            }
          }
        }
      } else {
        // Every remaining point duplicates a centre: any untaken point will do.
        std::vector<std::size_t> free;
        for (std::size_t i = 0; i < n_; ++i) {
          if (!taken[i]) free.push_back(i);
        }
        pick = free[static_cast<std::size_t>(uniform_index(rng, free.size()))];
      }
    }
  }

  // Nearest-centroid assignment. A float32 GEMM ranks centroids by
  // |c|^2 - 2 x.c; every centroid within a safe round-off window of the
  // best is then re-ranked with exact double distances.
  std::size_t assign() {
    const Eigen::Index d = static_cast<Eigen::Index>(d_);
    Eigen::Map<const RowMatrixF> cents(centroids_.data(), static_cast<Eigen::Index>(k_), d);
    Eigen::VectorXf cnorm = cents.rowwise().squaredNorm();
    const double cmax = static_cast<double>(cnorm.maxCoeff());
    const double window_scale = 2e-6 * static_cast<double>(d_);

    constexpr std::size_t kPointBlock = 256;
    const std::size_t cent_block = std::max<std::size_t>(1, std::min<std::size_t>(k_, (1u << 22) / kPointBlock));
    RowMatrixF gram;
    std::vector<float> best(kPointBlock);
    std::vector<std::vector<Candidate>> candidates(kPointBlock);

    std::size_t changes = 0;
    for (std::size_t p0 = 0; p0 < n_; p0 += kPointBlock) {
      const std::size_t pb = std::min(kPointBlock, n_ - p0);
      auto block = points_.middleRows(static_cast<Eigen::Index>(p0), static_cast<Eigen::Index>(pb));
      std::vector<double> window(pb);
      for (std::size_t i = 0; i < pb; ++i) {
        window[i] = window_scale * (static_cast<double>(block.row(static_cast<Eigen::Index>(i)).squaredNorm()) + cmax) + 1e-30;
        best[i] = std::numeric_limits<float>::infinity();
        candidates[i].clear();
      }
      for (std::size_t c0 = 0; c0 < k_; c0 += cent_block) {
        const std::size_t cb = std::min(cent_block, k_ - c0);
        gram.noalias() = block * cents.middleRows(static_cast<Eigen::Index>(c0), static_cast<Eigen::Index>(cb)).transpose();
        const auto cn_block = cnorm.segment(static_cast<Eigen::Index>(c0), static_cast<Eigen::Index>(cb)).transpose();
        for (std::size_t i = 0; i < pb; ++i) {
          float* g = gram.data() + i * cb;
          Eigen::Map<Eigen::RowVectorXf> row(g, static_cast<Eigen::Index>(cb));
          row = cn_block - 2.0f * row;
          const float block_best = row.minCoeff();
          auto& cand = candidates[i];
          if (block_best < best[i]) {
            best[i] = block_best;
            const double limit = static_cast<double>(block_best) + window[i];
            std::erase_if(cand, [&](const Candidate& e) { return static_cast<double>(e.approx) > limit; });
          }
          // Loose float pre-filter, then the exact double test.
          const double limit = static_cast<double>(best[i]) + window[i];
          const float loose = std::nextafter(static_cast<float>(limit), std::numeric_limits<float>::infinity());
          for (std::size_t j = 0; j < cb; ++j) {
            if (g[j] <= loose && static_cast<double>(g[j]) <= limit) {
              cand.push_back({g[j], static_cast<std::uint32_t>(c0 + j)});
            }
          }
        }
      }
      for (std::size_t i = 0; i < pb; ++i) {
        const std::size_t point = p0 + i;
        const std::uint32_t chosen = exact_nearest(point, candidates[i]);
        if (chosen != assignment_[point]) {
          assignment_[point] = chosen;
          ++changes;
        }
      }
    }
    return changes;
  }

  // Centroids become member means; empty clusters are reseeded.
  std::size_t update() {
    std::fill(counts_.begin(), counts_.end(), 0);
    std::vector<double> sums(k_ * d_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      const std::uint32_t c = assignment_[i];
      ++counts_[c];
      auto p = corpus_.patch(i);
      double* s = sums.data() + static_cast<std::size_t>(c) * d_;
      for (std::size_t j = 0; j < d_; ++j) s[j] += p[j];
    }
    for (std::size_t c = 0; c < k_; ++c) {
      if (counts_[c] == 0) continue;
      store_mean(c, sums.data() + c * d_);
    }
    std::size_t repairs = 0;
    for (std::size_t c = 0; c < k_; ++c) {
      if (counts_[c] != 0) continue;
      repair(c);
      ++repairs;
    }
    return repairs;
  }

  [[nodiscard]] double wcss() const {
    double total = 0.0;
    for (std::size_t i = 0; i < n_; ++i) total += squared_distance(corpus_.patch(i), centroid(assignment_[i]));
    return total;
  }

  ClusterModel model() const { return ClusterModel(d_, centroids_, counts_); }
  const std::vector<std::uint32_t>& assignment() const { return assignment_; }

 private:
  [[nodiscard]] std::span<const float> centroid(std::size_t c) const {
    return std::span<const float>(centroids_).subspan(c * d_, d_);
  }

  std::uint32_t exact_nearest(std::size_t point, const std::vector<Candidate>& candidates) const {
    auto x = corpus_.patch(point);
    const std::uint32_t current = assignment_[point];
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t best_c = kUnassigned;
    bool current_ties = false;
    for (const Candidate& cand : candidates) {
      const std::uint32_t c = cand.cluster;
      const double dist = squared_distance(x, centroid(c));
      if (dist < best) {
        best = dist;
        best_c = c;
        current_ties = c == current;
      } else if (dist == best) {
        if (c == current) current_ties = true;
        best_c = std::min(best_c, c);
      }
    }
    return current_ties ? current : best_c;
  }

  void store_mean(std::size_t c, const double* sum) {
    const double n = static_cast<double>(counts_[c]);
    for (std::size_t j = 0; j < d_; ++j) centroids_[c * d_ + j] = static_cast<float>(sum[j] / n);
  }

  void repair(std::size_t empty) {
    double far = -1.0;
    std::size_t far_point = n_;
    for (std::size_t i = 0; i < n_; ++i) {
      if (counts_[assignment_[i]] < 2) continue;
      const double dist = squared_distance(corpus_.patch(i), centroid(assignment_[i]));
      if (dist > far) {
        far = dist;
        far_point = i;
      }
    }
    // N_C <= N_P guarantees some cluster holds two or more patches.
    const std::uint32_t donor = assignment_[far_point];
    assignment_[far_point] = static_cast<std::uint32_t>(empty);
    counts_[empty] = 1;
    --counts_[donor];
    auto x = corpus_.patch(far_point);
    for (std::size_t j = 0; j < d_; ++j) centroids_[empty * d_ + j] = static_cast<float>(x[j]);

    std::vector<double> sum(d_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      if (assignment_[i] != donor) continue;
      auto p = corpus_.patch(i);
      for (std::size_t j = 0; j < d_; ++j) sum[j] += p[j];
    }
    store_mean(donor, sum.data());
  }

  const PatchCorpus& corpus_;
  std::size_t n_;
  std::size_t d_;
  std::size_t k_;
  RowMatrixF points_;
  std::vector<float> centroids_;
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint32_t> assignment_;
};

}  // namespace

KMeansResult run_kmeans(const PatchCorpus& corpus, const KMeansOptions& options) {
  const std::size_t n = corpus.size();
  if (options.clusters == 0) fail(ErrorCode::kInvalidArgument, "k-means needs at least one cluster");
  if (options.clusters > n) {
    fail(ErrorCode::kInvalidArgument, "k-means: " + std::to_string(options.clusters) +
                                          " clusters requested but the corpus has only " +
                                          std::to_string(n) + " patches");
  }
  if (options.clusters >= kUnassigned) fail(ErrorCode::kInvalidArgument, "k-means: too many clusters");
  if (options.max_iters == 0) fail(ErrorCode::kInvalidArgument, "k-means needs at least one iteration");

  Lloyd lloyd(corpus, options.clusters);
  lloyd.seed(options.seed);

  KMeansResult result;
  const double change_limit = options.min_change_fraction * static_cast<double>(n);
  for (std::size_t it = 0; it < options.max_iters; ++it) {
    std::size_t changes = lloyd.assign();
    changes += lloyd.update();
    result.wcss_history.push_back(lloyd.wcss());
    result.iterations = it + 1;
    if (changes == 0 || static_cast<double>(changes) < change_limit) break;
  }
  result.model = lloyd.model();
  result.assignment = lloyd.assignment();
  return result;
}

ClusterModel kmeans_cluster(const PatchCorpus& corpus, std::size_t clusters, std::size_t max_iters,
                            std::uint64_t seed) {
  return run_kmeans(corpus, {.clusters = clusters, .max_iters = max_iters, .seed = seed}).model;
}

}  // namespace pmse
