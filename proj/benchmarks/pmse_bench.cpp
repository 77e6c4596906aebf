#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "pmse/pmse.hpp"

namespace {

using namespace pmse;

ClusterModel random_model(std::size_t dim, std::size_t clusters, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> value(0.05, 2.0);
  std::uniform_int_distribution<std::uint64_t> count(1, 100);
  std::vector<float> c(dim * clusters);
  for (auto& v : c) v = static_cast<float>(value(rng));
  std::vector<std::uint64_t> n(clusters);
  for (auto& v : n) v = count(rng);
  return ClusterModel(dim, std::move(c), std::move(n));
}

PatchCorpus random_corpus(std::size_t side, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::gamma_distribution<double> g(2.0, 0.5);
  std::vector<double> v(side * side * n);
  for (auto& x : v) x = g(rng);
  return normalize_corpus(PatchCorpus(side, std::move(v)));
}

void BM_PoissonLogPmf(benchmark::State& state) {
  std::int64_t y = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(poisson_log_pmf(y, 3.7));
    y = (y + 1) & 31;
  }
}
BENCHMARK(BM_PoissonLogPmf);

void BM_DenoisePatch(benchmark::State& state) {
  const std::size_t side = 8;
  const std::size_t d = side * side;
  const auto clusters = static_cast<std::size_t>(state.range(0));
  DenoiseIndex index;
  index.side = side;
  index.mean_intensity = 1.0;
  index.model = random_model(d, clusters, 1);
  index.forest = build_kd_forest(index.model, 64, 32, 2);
  index.graph = build_knn_graph(index.model, 2 * d);
  const Denoiser den(index);
  QueryState qs = den.make_state();

  std::mt19937_64 rng(3);
  std::vector<CountPatch> ys;
  for (int k = 0; k < 64; ++k) {
    const auto c = index.model.centroid(rng() % clusters);
    CountPatch y(side);
    for (std::size_t i = 0; i < d; ++i) {
      std::poisson_distribution<std::uint32_t> draw(2.0 * static_cast<double>(c[i]));
      y[i] = draw(rng);
    }
    ys.push_back(std::move(y));
  }
  std::size_t k = 0;
  std::size_t processed = 0;
  for (auto _ : state) {
    const auto est = den.denoise(ys[k++ % ys.size()], DenoiseParams{}, qs);
    processed += est.processed;
    benchmark::DoNotOptimize(est.patch.values().data());
  }
  state.counters["clusters/query"] =
      benchmark::Counter(static_cast<double>(processed) / static_cast<double>(state.iterations()));
}
BENCHMARK(BM_DenoisePatch)->Arg(2000)->Arg(10000)->Unit(benchmark::kMicrosecond);

void BM_KMeansIteration(benchmark::State& state) {
  const auto corpus = random_corpus(8, 20000, 4);
  const auto clusters = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto r = run_kmeans(corpus, {.clusters = clusters, .max_iters = 1, .seed = 5});
    benchmark::DoNotOptimize(r.model.centroids().data());
  }
}
BENCHMARK(BM_KMeansIteration)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_KnnGraph(benchmark::State& state) {
  const auto model = random_model(64, static_cast<std::size_t>(state.range(0)), 6);
  for (auto _ : state) {
    auto g = build_knn_graph(model, 128);
    benchmark::DoNotOptimize(g.neighbors.data());
  }
}
BENCHMARK(BM_KnnGraph)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_KdForest(benchmark::State& state) {
  const auto model = random_model(64, 10000, 7);
  for (auto _ : state) {
    auto f = build_kd_forest(model, 64, 32, 8);
    benchmark::DoNotOptimize(f.trees.data());
  }
}
BENCHMARK(BM_KdForest)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
