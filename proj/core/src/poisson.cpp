#include "pmse/poisson.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "pmse/error.hpp"

namespace pmse {

namespace {

constexpr std::size_t kFactorialTableSize = 1024;

const std::array<double, kFactorialTableSize>& factorial_table() {
  static const auto table = [] {
    std::array<double, kFactorialTableSize> t{};
    for (std::size_t n = 0; n < t.size(); ++n) t[n] = std::lgamma(static_cast<double>(n) + 1.0);
    return t;
  }();
  return table;
}

}  // namespace

double log_factorial(std::uint64_t n) {
  if (n < kFactorialTableSize) return factorial_table()[n];
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double poisson_log_pmf(std::int64_t y, double x) {
  if (y < 0) fail(ErrorCode::kDomainError, "Poisson count must be nonnegative");
  if (!(x >= 0) || !std::isfinite(x)) {
    fail(ErrorCode::kDomainError, "Poisson mean must be finite and nonnegative");
  }
  if (x == 0) return y == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  const auto yd = static_cast<double>(y);
  return yd * std::log(x) - x - log_factorial(static_cast<std::uint64_t>(y));
}

double patch_log_likelihood(std::span<const std::uint32_t> counts, std::span<const double> means) {
  if (counts.size() != means.size()) {
    fail(ErrorCode::kDimensionMismatch, "patch likelihood: count and mean patches differ in size");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double term = poisson_log_pmf(counts[i], means[i]);
    if (term == -std::numeric_limits<double>::infinity()) return term;
    total += term;
  }
  return total;
}

double patch_log_likelihood(const CountPatch& y, const Patch& x) {
  return patch_log_likelihood(y.values(), x.values());
}

}  // namespace pmse
