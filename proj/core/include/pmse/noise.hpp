#pragma once

#include <cstdint>

#include "pmse/image.hpp"

namespace pmse {

/// Rescales `image` so its maximum equals `peak`.
IntensityImage scale_to_peak(const IntensityImage& image, double peak);

/// Scales `image` to `peak` and draws every pixel independently from a
/// Poisson law with that mean. Small means use sequential-search inversion,
/// larger ones transformed rejection; both are exact. Identical arguments
/// always give an identical image.
CountImage add_poisson_noise(const IntensityImage& image, double peak, std::uint64_t seed);

/// Poisson sampling of an already-scaled intensity image.
CountImage sample_poisson(const IntensityImage& means, std::uint64_t seed);

}  // namespace pmse
