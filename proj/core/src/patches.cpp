#include "pmse/patches.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pmse/error.hpp"

namespace pmse {

template <typename T>
BasicPatch<T>::BasicPatch(std::size_t side, T fill) : side_(side), values_(side * side, fill) {
  if (side == 0) fail(ErrorCode::kInvalidArgument, "patch side must be at least 1");
}

template <typename T>
BasicPatch<T>::BasicPatch(std::size_t side, std::vector<T> values)
    : side_(side), values_(std::move(values)) {
  if (side == 0) fail(ErrorCode::kInvalidArgument, "patch side must be at least 1");
  if (values_.size() != side * side) {
    fail(ErrorCode::kDimensionMismatch, "patch of side " + std::to_string(side) + " needs " +
                                            std::to_string(side * side) + " values, got " +
                                            std::to_string(values_.size()));
  }
}

template class BasicPatch<double>;
template class BasicPatch<std::uint32_t>;

std::size_t side_for_dim(std::size_t dim) noexcept {
  auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(dim))));
  return side * side == dim ? side : 0;
}

std::size_t patch_count(std::size_t width, std::size_t height, std::size_t side) noexcept {
  if (side == 0 || width < side || height < side) return 0;
  return (width - side + 1) * (height - side + 1);
}

PatchPosition patch_position(std::size_t width, std::size_t side, std::size_t index) noexcept {
  const std::size_t per_row = width - side + 1;
  return {index / per_row, index % per_row};
}

template <typename T>
void copy_patch(const Image<T>& image, std::size_t side, PatchPosition pos, std::span<T> out) {
  auto data = image.data();
  for (std::size_t r = 0; r < side; ++r) {
    const T* src = data.data() + (pos.row + r) * image.width() + pos.col;
    std::copy(src, src + side, out.begin() + static_cast<std::ptrdiff_t>(r * side));
  }
}

template <typename T>
std::vector<ExtractedPatch<T>> extract_patches(const Image<T>& image, std::size_t side) {
  if (side == 0) fail(ErrorCode::kInvalidArgument, "patch side must be at least 1");
  const std::size_t n = patch_count(image.width(), image.height(), side);
  if (n == 0) {
    fail(ErrorCode::kImageTooSmall, "image smaller than patch (" + std::to_string(image.width()) +
                                        "x" + std::to_string(image.height()) + " < " +
                                        std::to_string(side) + "x" + std::to_string(side) + ")");
  }
  std::vector<ExtractedPatch<T>> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ExtractedPatch<T> p{BasicPatch<T>(side), patch_position(image.width(), side, i)};
    copy_patch(image, side, p.position, p.patch.values());
    out.push_back(std::move(p));
  }
  return out;
}

IntensityImage aggregate_patches(std::span<const Patch> patches,
                                 std::span<const PatchPosition> positions, std::size_t width,
                                 std::size_t height) {
  if (patches.size() != positions.size()) {
    fail(ErrorCode::kDimensionMismatch, "aggregate: patch and position counts differ");
  }
  std::vector<double> mean(width * height, 0.0);
  std::vector<std::uint32_t> hits(width * height, 0);
  for (std::size_t k = 0; k < patches.size(); ++k) {
    const Patch& patch = patches[k];
    const PatchPosition pos = positions[k];
    const std::size_t side = patch.side();
    if (pos.row + side > height || pos.col + side > width) {
      fail(ErrorCode::kInvalidArgument, "aggregate: patch at (" + std::to_string(pos.row) + ", " +
                                            std::to_string(pos.col) + ") exceeds image bounds");
    }
    for (std::size_t r = 0; r < side; ++r) {
      for (std::size_t c = 0; c < side; ++c) {
        const std::size_t px = (pos.row + r) * width + pos.col + c;
        // Incremental mean: equal contributions leave the value untouched.
        const std::uint32_t n = ++hits[px];
        mean[px] += (patch[r * side + c] - mean[px]) / static_cast<double>(n);
      }
    }
  }
  for (std::size_t px = 0; px < hits.size(); ++px) {
    if (hits[px] == 0) {
      fail(ErrorCode::kInvalidArgument, "aggregate: pixel (" + std::to_string(px / width) + ", " +
                                            std::to_string(px % width) + ") is not covered");
    }
  }
  return IntensityImage(width, height, std::move(mean));
}

template void copy_patch(const Image<double>&, std::size_t, PatchPosition, std::span<double>);
template void copy_patch(const Image<std::uint32_t>&, std::size_t, PatchPosition,
                         std::span<std::uint32_t>);
template std::vector<ExtractedPatch<double>> extract_patches(const Image<double>&, std::size_t);
template std::vector<ExtractedPatch<std::uint32_t>> extract_patches(const Image<std::uint32_t>&,
                                                                    std::size_t);

}  // namespace pmse
