#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "pmse/error.hpp"
#include "pmse/patches.hpp"

using namespace pmse;

namespace {

IntensityImage ramp(std::size_t w, std::size_t h) {
  IntensityImage img(w, h);
  for (std::size_t i = 0; i < img.size(); ++i) img.data()[i] = static_cast<double>(i);
  return img;
}

template <typename T>
std::vector<Patch> as_real(const std::vector<ExtractedPatch<T>>& ex, std::vector<PatchPosition>& pos) {
  std::vector<Patch> out;
  for (const auto& e : ex) {
    Patch p(e.patch.side());
    for (std::size_t i = 0; i < p.dim(); ++i) p[i] = static_cast<double>(e.patch[i]);
    out.push_back(std::move(p));
    pos.push_back(e.position);
  }
  return out;
}

}  // namespace

TEST(ExtractPatches, Counts) {
  EXPECT_EQ(extract_patches(ramp(14, 14), 14).size(), 1u);
  EXPECT_EQ(extract_patches(ramp(8, 8), 4).size(), 25u);
  EXPECT_EQ(patch_count(8, 8, 4), 25u);
  EXPECT_EQ(patch_count(3, 8, 4), 0u);
}

TEST(ExtractPatches, FiveByFourSideFour) {
  // 5 rows, 4 columns.
  const auto patches = extract_patches(ramp(4, 5), 4);
  ASSERT_EQ(patches.size(), 2u);
  EXPECT_EQ(patches[0].position, (PatchPosition{0, 0}));
  EXPECT_EQ(patches[1].position, (PatchPosition{1, 0}));
}

TEST(ExtractPatches, RowMajorOrderAndContents) {
  const auto img = ramp(5, 4);
  const auto patches = extract_patches(img, 2);
  ASSERT_EQ(patches.size(), 12u);
  EXPECT_EQ(patches[3].position, (PatchPosition{0, 3}));
  EXPECT_EQ(patches[4].position, (PatchPosition{1, 0}));
  const auto& p = patches[6];  // (1, 2)
  EXPECT_EQ(p.patch[0], img(1, 2));
  EXPECT_EQ(p.patch[1], img(1, 3));
  EXPECT_EQ(p.patch[2], img(2, 2));
  EXPECT_EQ(p.patch[3], img(2, 3));
}

TEST(ExtractPatches, TooSmall) {
  try {
    (void)extract_patches(CountImage(10, 10), 14);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kImageTooSmall);
    EXPECT_NE(std::string(e.what()).find("image smaller than patch"), std::string::npos);
  }
}

TEST(AggregatePatches, SinglePatchIsImage) {
  Patch p(3, std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8, 9});
  const std::vector<Patch> ps{p};
  const std::vector<PatchPosition> pos{{0, 0}};
  const auto img = aggregate_patches(ps, pos, 3, 3);
  for (std::size_t i = 0; i < 9; ++i) EXPECT_EQ(img.data()[i], p[i]);
}

TEST(AggregatePatches, ConstantPatches) {
  const auto ex = extract_patches(IntensityImage(9, 7, 0.0), 3);
  std::vector<Patch> ps(ex.size(), Patch(3, 0.3));
  std::vector<PatchPosition> pos;
  for (const auto& e : ex) pos.push_back(e.position);
  const auto img = aggregate_patches(ps, pos, 9, 7);
  for (double v : img.data()) EXPECT_EQ(v, 0.3);
}

TEST(AggregatePatches, OverlapAverages) {
  // Two 2x2 patches one column apart on a 3x2 image.
  const std::vector<Patch> ps{Patch(2, 0.0), Patch(2, 2.0)};
  const std::vector<PatchPosition> pos{{0, 0}, {0, 1}};
  const auto img = aggregate_patches(ps, pos, 3, 2);
  EXPECT_EQ(img(0, 0), 0.0);
  EXPECT_EQ(img(0, 1), 1.0);
  EXPECT_EQ(img(1, 1), 1.0);
  EXPECT_EQ(img(0, 2), 2.0);
}

TEST(AggregatePatches, RoundTripIsBitwise) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 100);
  IntensityImage img(17, 13);
  for (auto& v : img.data()) v = u(rng);
  for (std::size_t side : {1u, 3u, 6u, 13u}) {
    std::vector<PatchPosition> pos;
    const auto ps = as_real(extract_patches(img, side), pos);
    EXPECT_EQ(aggregate_patches(ps, pos, 17, 13), img) << "side " << side;
  }
}

TEST(AggregatePatches, Errors) {
  const std::vector<Patch> ps{Patch(2, 1.0)};
  const std::vector<PatchPosition> uncovered{{0, 0}};
  EXPECT_THROW((void)aggregate_patches(ps, uncovered, 3, 2), Error);
  const std::vector<PatchPosition> outside{{1, 0}};
  EXPECT_THROW((void)aggregate_patches(ps, outside, 2, 2), Error);
  const std::vector<PatchPosition> two{{0, 0}, {0, 0}};
  EXPECT_THROW((void)aggregate_patches(ps, two, 2, 2), Error);
}

TEST(Image, RejectsBadData) {
  EXPECT_THROW(IntensityImage(2, 2, std::vector<double>{1, 2, 3}), Error);
  EXPECT_THROW(IntensityImage(1, 2, std::vector<double>{1, -2}), Error);
  EXPECT_THROW(IntensityImage(1, 1, std::vector<double>{std::numeric_limits<double>::infinity()}), Error);
  EXPECT_THROW(Patch(2, std::vector<double>{1, 2, 3}), Error);
}
