#pragma once

#include "pmse/image.hpp"

namespace pmse {

/// Mean squared pixel difference.
double mse(const IntensityImage& reference, const IntensityImage& estimate);

/// 10 log10(peak^2 / MSE) in dB; +inf when the images are identical.
double psnr(const IntensityImage& reference, const IntensityImage& estimate, double peak);

}  // namespace pmse
