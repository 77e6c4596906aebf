#pragma once

#include "pmse/atomic_file.hpp"
#include "pmse/corpus.hpp"
#include "pmse/denoiser.hpp"
#include "pmse/error.hpp"
#include "pmse/image.hpp"
#include "pmse/image_io.hpp"
#include "pmse/index.hpp"
#include "pmse/index_io.hpp"
#include "pmse/kd_forest.hpp"
#include "pmse/kmeans.hpp"
#include "pmse/knn_graph.hpp"
#include "pmse/metrics.hpp"
#include "pmse/mmse_oracle.hpp"
#include "pmse/noise.hpp"
#include "pmse/patch.hpp"
#include "pmse/patches.hpp"
#include "pmse/pipeline.hpp"
#include "pmse/poisson.hpp"
#include "pmse/rng.hpp"
