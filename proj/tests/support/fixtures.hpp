#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <boost/random/poisson_distribution.hpp>

#include "pmse/pmse.hpp"

namespace pmse::test {

inline std::filesystem::path data_dir() { return PMSE_TEST_DATA_DIR; }

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("pmse-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  [[nodiscard]] const std::filesystem::path& path() const noexcept { return path_; }
  [[nodiscard]] std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Positive centroids in [lo, hi) and counts in [1, max_count].
inline ClusterModel random_model(std::size_t dim, std::size_t clusters, std::mt19937_64& rng,
                                 double lo = 0.05, double hi = 2.0, std::uint64_t max_count = 100) {
  std::uniform_real_distribution<double> value(lo, hi);
  std::uniform_int_distribution<std::uint64_t> count(1, max_count);
  std::vector<float> centroids(dim * clusters);
  for (auto& c : centroids) c = static_cast<float>(value(rng));
  std::vector<std::uint64_t> counts(clusters);
  for (auto& n : counts) n = count(rng);
  return ClusterModel(dim, std::move(centroids), std::move(counts));
}

inline DenoiseIndex make_index(ClusterModel model, std::size_t neighbors, std::size_t trees,
                               std::size_t leaf_size, std::uint64_t seed) {
  DenoiseIndex index;
  index.side = side_for_dim(model.dim());
  index.mean_intensity = 1.0;
  index.forest = build_kd_forest(model, trees, leaf_size, seed);
  index.graph = build_knn_graph(model, neighbors);
  index.model = std::move(model);
  return index;
}

// Counts drawn around scale * c^(j) for a random cluster j.
inline CountPatch noisy_around(const ClusterModel& model, std::mt19937_64& rng, double min_scale = 1.0,
                               double max_scale = 10.0) {
  std::uniform_int_distribution<std::size_t> pick(0, model.size() - 1);
  std::uniform_real_distribution<double> scale(min_scale, max_scale);
  const auto c = model.centroid(pick(rng));
  const double s = scale(rng);
  CountPatch y(side_for_dim(model.dim()));
  for (std::size_t i = 0; i < y.dim(); ++i) {
    boost::random::poisson_distribution<std::uint32_t, double> draw(s * static_cast<double>(c[i]));
    y[i] = draw(rng);
  }
  return y;
}

inline double patch_mean(const CountPatch& y) {
  double sum = 0.0;
  for (auto v : y.values()) sum += v;
  return sum / static_cast<double>(y.dim());
}

inline IntensityImage constant_image(std::size_t width, std::size_t height, double value) {
  return IntensityImage(width, height, value);
}

// Smooth synthetic scene: gradient plus a few discs, values in (0, 1].
inline IntensityImage synthetic_scene(std::size_t width, std::size_t height, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  IntensityImage img(width, height);
  struct Disc {
    double r0, c0, radius, level;
  };
  std::vector<Disc> discs(4);
  for (auto& d : discs) {
    d = {u(rng) * static_cast<double>(height), u(rng) * static_cast<double>(width),
         (0.1 + 0.2 * u(rng)) * static_cast<double>(std::min(width, height)), 0.3 + 0.7 * u(rng)};
  }
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      double v = 0.2 + 0.3 * static_cast<double>(c) / static_cast<double>(width);
      for (const auto& d : discs) {
        const double dr = static_cast<double>(r) - d.r0;
        const double dc = static_cast<double>(c) - d.c0;
        if (dr * dr + dc * dc < d.radius * d.radius) v = d.level;
      }
      img(r, c) = v;
    }
  }
  return img;
}

}  // namespace pmse::test
