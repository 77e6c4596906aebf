#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "fixtures.hpp"

using namespace pmse;

namespace {

// O(N_C^2) reference with the same (distance, index) ordering.
std::vector<std::uint32_t> brute_neighbors(const ClusterModel& m, std::size_t j, std::size_t k) {
  std::vector<std::pair<double, std::uint32_t>> all;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i == j) continue;
    double d2 = 0.0;
    for (std::size_t e = 0; e < m.dim(); ++e) {
      const double diff = static_cast<double>(m.centroid(i)[e]) - static_cast<double>(m.centroid(j)[e]);
      d2 += diff * diff;
    }
    all.emplace_back(d2, static_cast<std::uint32_t>(i));
  }
  std::ranges::sort(all);
  std::vector<std::uint32_t> out;
  for (std::size_t r = 0; r < k; ++r) out.push_back(all[r].second);
  return out;
}

std::vector<std::uint32_t> list(const KnnGraph& g, std::size_t j) {
  const auto s = g.neighbors_of(j);
  return {s.begin(), s.end()};
}

}  // namespace

TEST(KnnGraph, OneDimensionalExample) {
  const ClusterModel m(1, {0, 1, 3}, {1, 1, 1});
  const auto g = build_knn_graph(m, 1);
  EXPECT_EQ(list(g, 0), (std::vector<std::uint32_t>{1}));
  EXPECT_EQ(list(g, 1), (std::vector<std::uint32_t>{0}));
  EXPECT_EQ(list(g, 2), (std::vector<std::uint32_t>{1}));
}

TEST(KnnGraph, TieGoesToLowerIndex) {
  const ClusterModel m(1, {0, 1, 2}, {1, 1, 1});
  EXPECT_EQ(list(build_knn_graph(m, 1), 1), (std::vector<std::uint32_t>{0}));
}

TEST(KnnGraph, FullNeighborhoodIsPermutation) {
  std::mt19937_64 rng(1);
  const auto m = test::random_model(4, 30, rng);
  const auto g = build_knn_graph(m, 29);
  for (std::size_t j = 0; j < 30; ++j) {
    auto l = list(g, j);
    l.push_back(static_cast<std::uint32_t>(j));
    std::ranges::sort(l);
    std::vector<std::uint32_t> all(30);
    std::iota(all.begin(), all.end(), 0u);
    EXPECT_EQ(l, all);
  }
}

TEST(KnnGraph, MatchesBruteForce) {
  std::mt19937_64 rng(2);
  const auto m = test::random_model(16, 600, rng);
  const auto g = build_knn_graph(m, 32);
  ASSERT_EQ(g.size(), 600u);
  for (std::size_t j = 0; j < 600; ++j) EXPECT_EQ(list(g, j), brute_neighbors(m, j, 32)) << "centroid " << j;
}

TEST(KnnGraph, DuplicateCentroidsOrderedByIndex) {
  const ClusterModel m(2, {1, 1, 0, 0, 1, 1, 1, 1, 5, 5}, {1, 1, 1, 1, 1});
  EXPECT_EQ(list(build_knn_graph(m, 3), 3), (std::vector<std::uint32_t>{0, 2, 1}));
}

TEST(KnnGraph, Errors) {
  const ClusterModel m(1, {0, 1, 3}, {1, 1, 1});
  EXPECT_THROW((void)build_knn_graph(m, 3), Error);
  EXPECT_THROW((void)build_knn_graph(m, 0), Error);
}
