#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace pmse {

/// Square patch of side `side`, flattened row-major into `side * side` values.
template <typename T>
class BasicPatch {
 public:
  using value_type = T;

  BasicPatch() = default;
  explicit BasicPatch(std::size_t side, T fill = T{});
  BasicPatch(std::size_t side, std::vector<T> values);

  [[nodiscard]] std::size_t side() const noexcept { return side_; }
  [[nodiscard]] std::size_t dim() const noexcept { return values_.size(); }
  [[nodiscard]] std::span<const T> values() const noexcept { return values_; }
  [[nodiscard]] std::span<T> values() noexcept { return values_; }
  [[nodiscard]] const T& operator[](std::size_t i) const noexcept { return values_[i]; }
  [[nodiscard]] T& operator[](std::size_t i) noexcept { return values_[i]; }

  friend bool operator==(const BasicPatch&, const BasicPatch&) = default;

 private:
  std::size_t side_ = 0;
  std::vector<T> values_;
};

using Patch = BasicPatch<double>;
using CountPatch = BasicPatch<std::uint32_t>;

extern template class BasicPatch<double>;
extern template class BasicPatch<std::uint32_t>;

/// Top-left pixel of a patch inside its image.
struct PatchPosition {
  std::size_t row = 0;
  std::size_t col = 0;

  friend bool operator==(const PatchPosition&, const PatchPosition&) = default;
};

/// Integer side length whose square is `dim`, or 0 if `dim` is not a square.
std::size_t side_for_dim(std::size_t dim) noexcept;

}  // namespace pmse
