#include "pmse/metrics.hpp"

#include <cmath>
#include <limits>

#include "pmse/error.hpp"

namespace pmse {

double mse(const IntensityImage& reference, const IntensityImage& estimate) {
  if (reference.width() != estimate.width() || reference.height() != estimate.height()) {
    fail(ErrorCode::kDimensionMismatch, "mse: image dimensions differ");
  }
  if (reference.empty()) fail(ErrorCode::kInvalidArgument, "mse: empty image");
  auto a = reference.data();
  auto b = estimate.data();
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return sum / static_cast<double>(a.size());
}

double psnr(const IntensityImage& reference, const IntensityImage& estimate, double peak) {
  if (!(peak > 0) || !std::isfinite(peak)) fail(ErrorCode::kInvalidArgument, "psnr: peak must be positive");
  const double err = mse(reference, estimate);
  if (err == 0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / err);
}

}  // namespace pmse
