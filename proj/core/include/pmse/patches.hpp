#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pmse/image.hpp"
#include "pmse/patch.hpp"

namespace pmse {

template <typename T>
struct ExtractedPatch {
  BasicPatch<T> patch;
  PatchPosition position;
};

/// Number of stride-1 patch positions; 0 when the image is smaller than the patch.
std::size_t patch_count(std::size_t width, std::size_t height, std::size_t side) noexcept;

/// Top-left position of the `index`-th patch in row-major order.
PatchPosition patch_position(std::size_t width, std::size_t side, std::size_t index) noexcept;

/// Copies the patch at `pos` into `out` (length side*side), row-major.
template <typename T>
void copy_patch(const Image<T>& image, std::size_t side, PatchPosition pos, std::span<T> out);

/// All overlapping patches at stride 1, ordered row-major by top-left corner.
/// Throws kImageTooSmall when the image cannot hold a single patch.
template <typename T>
std::vector<ExtractedPatch<T>> extract_patches(const Image<T>& image, std::size_t side);

/// Averages overlapping patch estimates back into an image. Every pixel must
/// be covered; the per-pixel mean is accumulated in patch order, so a set of
/// identical estimates reproduces the input value bit for bit.
IntensityImage aggregate_patches(std::span<const Patch> patches,
                                 std::span<const PatchPosition> positions, std::size_t width,
                                 std::size_t height);

extern template void copy_patch(const Image<double>&, std::size_t, PatchPosition, std::span<double>);
extern template void copy_patch(const Image<std::uint32_t>&, std::size_t, PatchPosition,
                                std::span<std::uint32_t>);
extern template std::vector<ExtractedPatch<double>> extract_patches(const Image<double>&, std::size_t);
extern template std::vector<ExtractedPatch<std::uint32_t>> extract_patches(
    const Image<std::uint32_t>&, std::size_t);

}  // namespace pmse
