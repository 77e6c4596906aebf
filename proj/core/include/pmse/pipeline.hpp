#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pmse/denoiser.hpp"
#include "pmse/image.hpp"
#include "pmse/index.hpp"

namespace pmse {

struct DenoiseImageResult {
  IntensityImage image;
  std::size_t patches = 0;
  std::size_t fallbacks = 0;
  std::size_t clusters_processed = 0;
};

/// Denoises every stride-1 patch of `noisy` and averages the overlapping
/// estimates. Patch queries are split across `workers` threads (0 = all
/// hardware threads); the result does not depend on the worker count.
DenoiseImageResult denoise_image_detailed(const CountImage& noisy, const Denoiser& denoiser,
                                          const DenoiseParams& params, std::size_t workers = 1);

IntensityImage denoise_image(const CountImage& noisy, const DenoiseIndex& index,
                             const DenoiseParams& params, std::size_t workers = 1);

struct EvaluationRow {
  std::string image;
  double peak = 0.0;
  std::size_t realizations = 0;
  double psnr_noisy_db = 0.0;
  double psnr_denoised_db = 0.0;
  double seconds = 0.0;
  std::size_t fallbacks = 0;
};

struct EvaluationReport {
  std::vector<EvaluationRow> rows;
};

using ImageDenoiser = std::function<DenoiseImageResult(const CountImage&)>;

/// For each peak: scales `clean` to that peak, draws `realizations` noisy
/// images from seed-derived streams, denoises each with `denoise`, and
/// reports PSNR (peak as I_max, against the scaled clean image) of the noisy
/// and denoised images, averaged over realizations.
EvaluationReport evaluate(const IntensityImage& clean, const std::string& name,
                          std::span<const double> peaks, std::size_t realizations,
                          std::uint64_t seed, const ImageDenoiser& denoise);

EvaluationReport evaluate(const IntensityImage& clean, const std::string& name,
                          const DenoiseIndex& index, std::span<const double> peaks,
                          std::size_t realizations, std::uint64_t seed,
                          const DenoiseParams& params, std::size_t workers = 1);

/// Columns: image,peak,realizations,psnr_noisy_db,psnr_denoised_db,seconds,fallbacks
void write_report_csv(std::ostream& out, const EvaluationReport& report);
void write_report_table(std::ostream& out, const EvaluationReport& report);

}  // namespace pmse
