#include "pmse/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pmse/error.hpp"
#include "pmse/patches.hpp"
#include "pmse/rng.hpp"

namespace pmse {

PatchCorpus::PatchCorpus(std::size_t side, std::vector<double> values, double mean_intensity)
    : side_(side), values_(std::move(values)), mean_intensity_(mean_intensity) {
  if (side_ == 0) fail(ErrorCode::kInvalidArgument, "corpus patch side must be at least 1");
  if (values_.empty() || values_.size() % dim() != 0) {
    fail(ErrorCode::kDimensionMismatch, "corpus storage is not a whole number of patches");
  }
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0) fail(ErrorCode::kDomainError, "corpus values must be finite and nonnegative");
  }
}

double PatchCorpus::grand_mean() const noexcept {
  if (values_.empty()) return 0.0;
  long double sum = 0;
  for (double v : values_) sum += v;
  return static_cast<double>(sum / static_cast<long double>(values_.size()));
}

PatchCorpus ingest_corpus(std::span<const IntensityImage> images, std::size_t side,
                          std::optional<std::size_t> cap, std::uint64_t seed) {
  if (side == 0) fail(ErrorCode::kInvalidArgument, "patch side must be at least 1");
  // Prefix sums of per-image patch counts; global patch id -> (image, position).
  std::vector<std::size_t> offsets{0};
  for (const auto& img : images) offsets.push_back(offsets.back() + patch_count(img.width(), img.height(), side));
  const std::size_t total = offsets.back();
  if (total == 0) fail(ErrorCode::kImageTooSmall, "no corpus image is at least " + std::to_string(side) + "x" + std::to_string(side));

  std::vector<std::size_t> chosen;
  if (cap && *cap < total) {
    if (*cap == 0) fail(ErrorCode::kInvalidArgument, "corpus cap must be positive");
    // Partial Fisher-Yates over global patch ids.
    std::vector<std::size_t> ids(total);
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    Engine rng(derive_seed(seed, {0x636f7270}));
    for (std::size_t i = 0; i < *cap; ++i) {
      const auto j = i + static_cast<std::size_t>(uniform_index(rng, total - i));
      std::swap(ids[i], ids[j]);
    }
    chosen.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(*cap));
    std::sort(chosen.begin(), chosen.end());
  } else {
    chosen.resize(total);
    std::iota(chosen.begin(), chosen.end(), std::size_t{0});
  }

  const std::size_t d = side * side;
  std::vector<double> values(chosen.size() * d);
  std::size_t image = 0;
  for (std::size_t k = 0; k < chosen.size(); ++k) {
    while (chosen[k] >= offsets[image + 1]) ++image;
    const auto& img = images[image];
    const auto pos = patch_position(img.width(), side, chosen[k] - offsets[image]);
    copy_patch(img, side, pos, std::span<double>(values).subspan(k * d, d));
  }
  return PatchCorpus(side, std::move(values));
}

PatchCorpus normalize_corpus(PatchCorpus corpus) {
  const double mean = corpus.grand_mean();
  if (!(mean > 0)) fail(ErrorCode::kDomainError, "cannot normalize an all-zero corpus");
  for (double& v : corpus.values_) v /= mean;
  corpus.mean_intensity_ = mean;
  return corpus;
}

}  // namespace pmse
