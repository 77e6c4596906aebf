#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace pmse {

/// Row-major single-channel raster. `T = double` holds real intensities,
/// `T = std::uint32_t` holds photon counts.
template <typename T>
class Image {
 public:
  using value_type = T;

  Image() = default;
  Image(std::size_t width, std::size_t height, T fill = T{});
  /// Throws kDimensionMismatch when `data.size() != width * height`, and
  /// kDomainError for negative or non-finite real intensities.
  Image(std::size_t width, std::size_t height, std::vector<T> data);

  [[nodiscard]] std::size_t width() const noexcept { return width_; }
  [[nodiscard]] std::size_t height() const noexcept { return height_; }
  [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
  [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

  [[nodiscard]] std::span<const T> data() const noexcept { return data_; }
  [[nodiscard]] std::span<T> data() noexcept { return data_; }

  [[nodiscard]] const T& operator()(std::size_t row, std::size_t col) const noexcept {
    return data_[row * width_ + col];
  }
  [[nodiscard]] T& operator()(std::size_t row, std::size_t col) noexcept {
    return data_[row * width_ + col];
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<T> data_;
};

using IntensityImage = Image<double>;
using CountImage = Image<std::uint32_t>;

extern template class Image<double>;
extern template class Image<std::uint32_t>;

/// Largest pixel value; 0 for an empty image.
double max_value(const IntensityImage& image) noexcept;
std::uint32_t max_value(const CountImage& image) noexcept;

IntensityImage to_intensity(const CountImage& counts);

}  // namespace pmse
