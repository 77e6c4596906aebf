#pragma once

#include <cstdint>
#include <span>

#include "pmse/patch.hpp"

namespace pmse {

/// ln(n!), tabulated for small n and via log-gamma above.
double log_factorial(std::uint64_t n);

/// ln P(Y = y | X = x) for a Poisson observation with mean x.
///
/// Returns y ln x - x - ln(y!) for x > 0, 0 for (y = 0, x = 0) and -inf for
/// (y > 0, x = 0). Negative or non-finite arguments raise kDomainError.
double poisson_log_pmf(std::int64_t y, double x);

/// Sum of per-pixel Poisson log-likelihoods; -inf if any pixel is impossible.
double patch_log_likelihood(std::span<const std::uint32_t> counts, std::span<const double> means);
double patch_log_likelihood(const CountPatch& y, const Patch& x);

}  // namespace pmse
