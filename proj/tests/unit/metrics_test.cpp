#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "pmse/error.hpp"
#include "pmse/metrics.hpp"

using namespace pmse;

TEST(Psnr, ZeroDbWhenMseEqualsPeakSquared) {
  const IntensityImage ref(4, 3, 0.0);
  const IntensityImage est(4, 3, 5.0);
  EXPECT_DOUBLE_EQ(psnr(ref, est, 5.0), 0.0);
}

TEST(Psnr, InfiniteOnExactMatch) {
  const IntensityImage ref(5, 5, 1.25);
  EXPECT_EQ(psnr(ref, ref, 2.0), std::numeric_limits<double>::infinity());
}

TEST(Psnr, Peak255Mse255) {
  // Alternate +-sqrt(255) so the MSE is exactly 255 up to rounding.
  const double e = std::sqrt(255.0);
  IntensityImage ref(2, 1, 100.0);
  IntensityImage est(2, 1);
  est(0, 0) = 100.0 + e;
  est(0, 1) = 100.0 - e;
  EXPECT_NEAR(mse(ref, est), 255.0, 1e-10);
  EXPECT_NEAR(psnr(ref, est, 255.0), 24.0654, 1e-4);
  EXPECT_NEAR(psnr(ref, est, 255.0), 10.0 * std::log10(255.0), 1e-10);
}

TEST(Psnr, Symmetric) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0, 10);
  IntensityImage a(7, 9), b(7, 9);
  for (auto& v : a.data()) v = u(rng);
  for (auto& v : b.data()) v = u(rng);
  EXPECT_EQ(psnr(a, b, 10.0), psnr(b, a, 10.0));
}

TEST(Psnr, Errors) {
  const IntensityImage a(3, 3, 1.0), b(3, 4, 1.0);
  EXPECT_THROW((void)psnr(a, b, 1.0), Error);
  try {
    (void)psnr(a, a, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
  EXPECT_THROW((void)psnr(a, a, -1.0), Error);
}
