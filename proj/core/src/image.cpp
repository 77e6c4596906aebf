#include "pmse/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <type_traits>

#include "pmse/error.hpp"

namespace pmse {

template <typename T>
Image<T>::Image(std::size_t width, std::size_t height, T fill)
    : width_(width), height_(height), data_(width * height, fill) {}

template <typename T>
Image<T>::Image(std::size_t width, std::size_t height, std::vector<T> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (data_.size() != width_ * height_) {
    fail(ErrorCode::kDimensionMismatch,
         "image data has " + std::to_string(data_.size()) + " samples, expected " +
             std::to_string(width_ * height_));
  }
  if constexpr (std::is_floating_point_v<T>) {
    for (T v : data_) {
      if (!std::isfinite(v) || v < 0) {
        fail(ErrorCode::kDomainError, "intensity image values must be finite and nonnegative");
      }
    }
  }
}

template class Image<double>;
template class Image<std::uint32_t>;

double max_value(const IntensityImage& image) noexcept {
  auto d = image.data();
  return d.empty() ? 0.0 : *std::max_element(d.begin(), d.end());
}

std::uint32_t max_value(const CountImage& image) noexcept {
  auto d = image.data();
  return d.empty() ? 0u : *std::max_element(d.begin(), d.end());
}

IntensityImage to_intensity(const CountImage& counts) {
  std::vector<double> values(counts.data().begin(), counts.data().end());
  return IntensityImage(counts.width(), counts.height(), std::move(values));
}

}  // namespace pmse
