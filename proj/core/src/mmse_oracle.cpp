#include "pmse/mmse_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "pmse/error.hpp"
#include "pmse/poisson.hpp"

namespace pmse {

namespace {

// `prior(k)` yields the k-th prior patch, `log_weight(k)` its log prior mass.
template <typename PriorFn, typename LogWeightFn>
Patch weighted_mmse(const CountPatch& y, std::size_t n, double mean_scale, PriorFn prior,
                    LogWeightFn log_weight) {
  if (!(mean_scale > 0) || !std::isfinite(mean_scale)) {
    fail(ErrorCode::kDomainError, "MMSE oracle: mean scale must be positive");
  }
  const std::size_t d = y.dim();
  std::vector<double> log_w(n);
  std::vector<double> x(d);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    auto u = prior(k);
    if (u.size() != d) fail(ErrorCode::kDimensionMismatch, "MMSE oracle: prior dimension mismatch");
    for (std::size_t i = 0; i < d; ++i) x[i] = mean_scale * static_cast<double>(u[i]);
    log_w[k] = log_weight(k) + patch_log_likelihood(y.values(), x);
    top = std::max(top, log_w[k]);
  }
  if (top == -std::numeric_limits<double>::infinity()) {
    fail(ErrorCode::kDegenerate, "MMSE oracle: every prior patch has zero likelihood");
  }
  std::vector<double> num(d, 0.0);
  double den = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double w = std::exp(log_w[k] - top);
    if (w == 0) continue;
    auto u = prior(k);
    for (std::size_t i = 0; i < d; ++i) num[i] += w * (mean_scale * static_cast<double>(u[i]));
    den += w;
  }
  Patch out(y.side());
  for (std::size_t i = 0; i < d; ++i) out[i] = num[i] / den;
  return out;
}

}  // namespace

Patch brute_force_mmse_clusters(const CountPatch& y, const ClusterModel& model, double mean_scale) {
  if (model.dim() != y.dim()) fail(ErrorCode::kDimensionMismatch, "MMSE oracle: model dimension mismatch");
  return weighted_mmse(
      y, model.size(), mean_scale, [&](std::size_t j) { return model.centroid(j); },
      [&](std::size_t j) { return std::log(static_cast<double>(model.count(j))); });
}

Patch brute_force_mmse_corpus(const CountPatch& y, const PatchCorpus& corpus, double mean_scale) {
  if (corpus.dim() != y.dim()) fail(ErrorCode::kDimensionMismatch, "MMSE oracle: corpus dimension mismatch");
  return weighted_mmse(
      y, corpus.size(), mean_scale, [&](std::size_t k) { return corpus.patch(k); },
      [](std::size_t) { return 0.0; });
}

}  // namespace pmse
