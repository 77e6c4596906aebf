#include "pmse/knn_graph.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "pmse/error.hpp"

namespace pmse {

KnnGraph build_knn_graph(const ClusterModel& model, std::size_t k) {
  const std::size_t n = model.size();
  if (k == 0) fail(ErrorCode::kInvalidArgument, "K-NN graph needs K >= 1");
  if (k >= n) {
    fail(ErrorCode::kInvalidArgument, "K-NN graph needs K < N_C (K = " + std::to_string(k) +
                                          ", N_C = " + std::to_string(n) + ")");
  }
  KnnGraph graph{k, std::vector<std::uint32_t>(n * k)};
  std::vector<std::pair<double, std::uint32_t>> row;
  row.reserve(n - 1);
  for (std::size_t j = 0; j < n; ++j) {
    row.clear();
    auto cj = model.centroid(j);
    for (std::size_t other = 0; other < n; ++other) {
      if (other == j) continue;
      row.emplace_back(squared_distance(cj, model.centroid(other)), static_cast<std::uint32_t>(other));
    }
    std::partial_sort(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k), row.end());
    for (std::size_t m = 0; m < k; ++m) graph.neighbors[j * k + m] = row[m].second;
  }
  return graph;
}

}  // namespace pmse
