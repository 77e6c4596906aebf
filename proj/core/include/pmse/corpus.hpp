#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pmse/image.hpp"
#include "pmse/patch.hpp"

namespace pmse {

/// Bag of noise-free patches stored as a dense row-major N_P x d matrix,
/// together with the normalization constant (0 until normalized).
class PatchCorpus {
 public:
  PatchCorpus() = default;
  PatchCorpus(std::size_t side, std::vector<double> values, double mean_intensity = 0.0);

  [[nodiscard]] std::size_t side() const noexcept { return side_; }
  [[nodiscard]] std::size_t dim() const noexcept { return side_ * side_; }
  [[nodiscard]] std::size_t size() const noexcept { return dim() == 0 ? 0 : values_.size() / dim(); }
  [[nodiscard]] double mean_intensity() const noexcept { return mean_intensity_; }

  [[nodiscard]] std::span<const double> patch(std::size_t k) const noexcept {
    return std::span<const double>(values_).subspan(k * dim(), dim());
  }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

  /// Grand mean of every element.
  [[nodiscard]] double grand_mean() const noexcept;

 private:
  friend PatchCorpus normalize_corpus(PatchCorpus corpus);

  std::size_t side_ = 0;
  std::vector<double> values_;
  double mean_intensity_ = 0.0;
};

/// Collects every stride-1 patch of every image at least `side` x `side`
/// (smaller images are skipped). With `cap`, keeps a uniform random subset
/// of that many patches, chosen by `seed` and kept in ingestion order.
PatchCorpus ingest_corpus(std::span<const IntensityImage> images, std::size_t side,
                          std::optional<std::size_t> cap, std::uint64_t seed);

/// Divides every patch by the grand mean intensity and records it.
PatchCorpus normalize_corpus(PatchCorpus corpus);

}  // namespace pmse
