#include "pmse/denoiser.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>

#include "pmse/error.hpp"
#include "pmse/poisson.hpp"

namespace pmse {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::size_t kPrefetchDistance = 2;

inline void prefetch(const void* p) noexcept {
#if defined(__GNUC__) || defined(__clang__)
  __builtin_prefetch(p);
#else
  (void)p;
#endif
}

// Max-heap order: higher log-likelihood first, then lower cluster index.
bool heap_less(const QueryState::Entry& a, const QueryState::Entry& b) noexcept {
  if (a.log_likelihood != b.log_likelihood) return a.log_likelihood < b.log_likelihood;
  return a.cluster > b.cluster;
}

void begin_query(QueryState& state, std::size_t clusters, std::size_t dim) {
  if (state.stamp.size() != clusters) {
    state.stamp.assign(clusters, 0);
    state.epoch = 0;
  }
  if (++state.epoch == 0) {
    std::fill(state.stamp.begin(), state.stamp.end(), 0);
    state.epoch = 1;
  }
  state.s.assign(dim, 0.0);
  state.log_scale = kNegInf;
  state.w_scaled = 0.0;
  state.queue.clear();
  state.log_w_history.clear();
  state.processed = 0;
}

double log_w(const QueryState& state) {
  return state.w_scaled > 0 ? state.log_scale + std::log(state.w_scaled) : kNegInf;
}

bool converged(const QueryState& state, const DenoiseParams& params) {
  const auto& h = state.log_w_history;
  if (h.size() <= params.window) return false;
  const double now = h.back();
  const double before = h[h.size() - 1 - params.window];
  if (now == kNegInf) return false;
  const double relative_change = before == kNegInf ? 1.0 : -std::expm1(before - now);
  return relative_change < params.epsilon;
}

}  // namespace

Denoiser::Denoiser(const DenoiseIndex& index) : index_(&index) {
  const std::size_t n_c = index.clusters();
  const std::size_t d = index.dim();
  if (n_c == 0) fail(ErrorCode::kInvalidArgument, "denoiser: index has no clusters");
  if (index.model.dim() != d) fail(ErrorCode::kInconsistentIndex, "denoiser: centroid dimension is not side^2");
  log_centroids_.resize(n_c * d);
  centroid_sums_.resize(n_c);
  log_counts_.resize(n_c);
  for (std::size_t j = 0; j < n_c; ++j) {
    auto c = index.model.centroid(j);
    double sum = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double v = c[i];
      log_centroids_[j * d + i] = v > 0 ? std::log(v) : kNegInf;
      sum += v;
    }
    centroid_sums_[j] = sum;
    log_counts_[j] = std::log(static_cast<double>(index.model.count(j)));
  }
}

QueryState Denoiser::make_state() const {
  QueryState state;
  state.stamp.assign(index_->clusters(), 0);
  return state;
}

// sum_i [y_i ln(mu c_i) - mu c_i - ln y_i!]
//   = sum_{y_i > 0} y_i ln c_i + |y| ln mu - mu sum_i c_i - sum_i ln y_i!
// Pixels with y_i = 0 and c_i = 0 contribute exactly 0; y_i > 0 with
// c_i = 0 contributes -inf through ln c_i.
double Denoiser::log_likelihood(std::size_t j, std::span<const std::uint32_t> y,
                                std::span<const std::uint32_t> nonzero, double total_count,
                                double log_mean, double mean, double log_factorials) const {
  const double* logc = log_centroids_.data() + j * index_->dim();
  double dot = 0.0;
  for (std::uint32_t i : nonzero) dot += static_cast<double>(y[i]) * logc[i];
  if (dot == kNegInf) return kNegInf;
  return dot + total_count * log_mean - mean * centroid_sums_[j] - log_factorials;
}

double Denoiser::cluster_log_likelihood(std::size_t j, const CountPatch& y, double mean_scale) const {
  if (y.dim() != index_->dim()) fail(ErrorCode::kDimensionMismatch, "likelihood: patch dimension mismatch");
  if (!(mean_scale > 0)) fail(ErrorCode::kDomainError, "likelihood: mean scale must be positive");
  std::vector<std::uint32_t> nonzero;
  double total = 0.0;
  double lfact = 0.0;
  for (std::size_t i = 0; i < y.dim(); ++i) {
    if (y[i] == 0) continue;
    nonzero.push_back(static_cast<std::uint32_t>(i));
    total += y[i];
    lfact += log_factorial(y[i]);
  }
  return log_likelihood(j, y.values(), nonzero, total, std::log(mean_scale), mean_scale, lfact);
}

PatchEstimate Denoiser::denoise(const CountPatch& y, const DenoiseParams& params, QueryState& state) const {
  const DenoiseIndex& index = *index_;
  const std::size_t d = index.dim();
  if (y.dim() != d) {
    fail(ErrorCode::kDimensionMismatch, "denoise: patch has " + std::to_string(y.dim()) +
                                            " values, index expects " + std::to_string(d));
  }
  if (params.window == 0) fail(ErrorCode::kInvalidArgument, "denoise: convergence window must be >= 1");
  if (!(params.epsilon >= 0)) fail(ErrorCode::kInvalidArgument, "denoise: epsilon must be >= 0");

  auto counts = y.values();
  state.nonzero.clear();
  double total = 0.0;
  double lfact = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    if (counts[i] == 0) continue;
    state.nonzero.push_back(static_cast<std::uint32_t>(i));
    total += counts[i];
    lfact += log_factorial(counts[i]);
  }

  PatchEstimate result{Patch(index.side, 0.0), 0, 0, false};
  if (total == 0) return result;

  const double mean = total / static_cast<double>(d);
  const double log_mean = std::log(mean);
  begin_query(state, index.clusters(), d);

  // Caller has already stamped j.
  auto process = [&](std::uint32_t j, bool enqueue) {
    ++state.processed;
    const double ll = log_likelihood(j, counts, state.nonzero, total, log_mean, mean, lfact);
    const double lw = log_counts_[j] + ll;
    if (lw != kNegInf) {
      if (lw > state.log_scale) {
        const double shrink = std::exp(state.log_scale - lw);
        for (double& v : state.s) v *= shrink;
        state.w_scaled *= shrink;
        state.log_scale = lw;
      }
      const double weight = std::exp(lw - state.log_scale);
      auto c = index.model.centroid(j);
      for (std::size_t i = 0; i < d; ++i) state.s[i] += weight * static_cast<double>(c[i]);
      state.w_scaled += weight;
    }
    if (enqueue) {
      state.queue.push_back({ll, j});
      std::push_heap(state.queue.begin(), state.queue.end(), heap_less);
    }
  };

  const std::size_t log_row_bytes = d * sizeof(double);
  const std::size_t row_bytes = d * sizeof(float);
  auto prefetch_cluster = [&](std::uint32_t j) {
    const char* a = reinterpret_cast<const char*>(log_centroids_.data() + j * d);
    const char* b = reinterpret_cast<const char*>(index.model.centroid(j).data());
    for (std::size_t off = 0; off < log_row_bytes; off += 64) prefetch(a + off);
    for (std::size_t off = 0; off < row_bytes; off += 64) prefetch(b + off);
  };

  // Stamps the unseen clusters of a batch, then processes them in order while
  // prefetching rows a few clusters ahead.
  auto visit_all = [&](std::span<const std::uint32_t> batch, bool enqueue) {
    state.fresh.clear();
    for (std::uint32_t j : batch) {
      if (state.stamp[j] == state.epoch) continue;
      state.stamp[j] = state.epoch;
      state.fresh.push_back(j);
    }
    const std::size_t n = state.fresh.size();
    for (std::size_t k = 0; k < std::min(n, kPrefetchDistance); ++k) prefetch_cluster(state.fresh[k]);
    for (std::size_t k = 0; k < n; ++k) {
      if (k + kPrefetchDistance < n) prefetch_cluster(state.fresh[k + kPrefetchDistance]);
      process(state.fresh[k], enqueue);
    }
  };

  state.query.resize(d);
  for (std::size_t i = 0; i < d; ++i) state.query[i] = static_cast<double>(counts[i]) / mean;
  for (const KdTree& tree : index.forest.trees) {
    visit_all(tree.leaf_for(state.query), true);
  }
  state.log_w_history.push_back(log_w(state));

  while (!state.queue.empty() && (params.exhaustive || !converged(state, params))) {
    std::pop_heap(state.queue.begin(), state.queue.end(), heap_less);
    const std::uint32_t top = state.queue.back().cluster;
    state.queue.pop_back();
    ++result.pops;
    visit_all(index.graph.neighbors_of(top), true);
    state.log_w_history.push_back(log_w(state));
  }
  if (params.exhaustive) {
    // Clusters the graph never reached.
    state.fresh.clear();
    for (std::size_t j = 0; j < index.clusters(); ++j) {
      if (state.stamp[j] == state.epoch) continue;
      state.stamp[j] = state.epoch;
      process(static_cast<std::uint32_t>(j), false);
    }
  }

  result.processed = state.processed;
  if (!(state.w_scaled > 0)) {
    result.fallback = true;
    for (std::size_t i = 0; i < d; ++i) result.patch[i] = counts[i];
    return result;
  }
  for (std::size_t i = 0; i < d; ++i) result.patch[i] = mean * (state.s[i] / state.w_scaled);
  return result;
}

PatchEstimate Denoiser::denoise(const CountPatch& y, const DenoiseParams& params) const {
  QueryState state = make_state();
  return denoise(y, params, state);
}

Patch denoise_patch(const CountPatch& y, const DenoiseIndex& index, const DenoiseParams& params) {
  return Denoiser(index).denoise(y, params).patch;
}

}  // namespace pmse
