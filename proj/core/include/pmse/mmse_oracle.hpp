#pragma once

#include "pmse/corpus.hpp"
#include "pmse/kmeans.hpp"
#include "pmse/patch.hpp"

namespace pmse {

// Exhaustive MMSE estimates used as references for the online search. Both
// evaluate the full weighted mean with likelihoods from patch_log_likelihood
// at means `mean_scale * prior`, summed in the log domain after shifting by
// the largest log-weight. They throw kDegenerate when every weight is zero.

/// sum_j n_j f(y | s c_j) s c_j / sum_j n_j f(y | s c_j) over every cluster.
Patch brute_force_mmse_clusters(const CountPatch& y, const ClusterModel& model, double mean_scale);

/// The same estimate over every individual corpus patch (unit weights).
Patch brute_force_mmse_corpus(const CountPatch& y, const PatchCorpus& corpus, double mean_scale);

}  // namespace pmse
