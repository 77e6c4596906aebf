#include "pmse/noise.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <boost/random/poisson_distribution.hpp>

#include "pmse/error.hpp"
#include "pmse/rng.hpp"

namespace pmse {

IntensityImage scale_to_peak(const IntensityImage& image, double peak) {
  if (!(peak > 0) || !std::isfinite(peak)) fail(ErrorCode::kInvalidArgument, "peak must be positive");
  const double max = max_value(image);
  if (!(max > 0)) fail(ErrorCode::kInvalidArgument, "cannot scale an all-zero image to a peak");
  const double factor = peak / max;
  std::vector<double> scaled(image.data().begin(), image.data().end());
  for (double& v : scaled) v *= factor;
  return IntensityImage(image.width(), image.height(), std::move(scaled));
}

CountImage sample_poisson(const IntensityImage& means, std::uint64_t seed) {
  Engine rng(seed);
  std::vector<std::uint32_t> counts(means.size());
  auto in = means.data();
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (in[i] == 0) continue;
    if (in[i] > static_cast<double>(std::numeric_limits<std::uint32_t>::max() / 2)) {
      fail(ErrorCode::kDomainError, "Poisson mean too large for a 32-bit count");
    }
    boost::random::poisson_distribution<std::uint32_t, double> draw(in[i]);
    counts[i] = draw(rng);
  }
  return CountImage(means.width(), means.height(), std::move(counts));
}

CountImage add_poisson_noise(const IntensityImage& image, double peak, std::uint64_t seed) {
  return sample_poisson(scale_to_peak(image, peak), seed);
}

}  // namespace pmse
