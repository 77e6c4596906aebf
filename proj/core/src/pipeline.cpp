#include "pmse/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "pmse/error.hpp"
#include "pmse/metrics.hpp"
#include "pmse/noise.hpp"
#include "pmse/patches.hpp"
#include "pmse/rng.hpp"

namespace pmse {

DenoiseImageResult denoise_image_detailed(const CountImage& noisy, const Denoiser& denoiser,
                                          const DenoiseParams& params, std::size_t workers) {
  const std::size_t side = denoiser.index().side;
  const std::size_t n = patch_count(noisy.width(), noisy.height(), side);
  if (n == 0) {
    fail(ErrorCode::kImageTooSmall, "image smaller than patch (" + std::to_string(noisy.width()) + "x" +
                                        std::to_string(noisy.height()) + " < " + std::to_string(side) +
                                        "x" + std::to_string(side) + ")");
  }
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);

  std::vector<Patch> estimates(n);
  std::vector<PatchPosition> positions(n);
  std::vector<std::size_t> fallbacks(workers, 0);
  std::vector<std::size_t> processed(workers, 0);
  std::vector<std::exception_ptr> errors(workers);

  auto run = [&](std::size_t w) {
    try {
      QueryState state = denoiser.make_state();
      CountPatch y(side);
      // Contiguous ranges; each estimate lands in its own slot.
      const std::size_t begin = n * w / workers;
      const std::size_t end = n * (w + 1) / workers;
      for (std::size_t k = begin; k < end; ++k) {
        positions[k] = patch_position(noisy.width(), side, k);
        copy_patch(noisy, side, positions[k], y.values());
        PatchEstimate est = denoiser.denoise(y, params, state);
        fallbacks[w] += est.fallback ? 1 : 0;
        processed[w] += est.processed;
        estimates[k] = std::move(est.patch);
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };

  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  DenoiseImageResult result;
  result.image = aggregate_patches(estimates, positions, noisy.width(), noisy.height());
  result.patches = n;
  for (std::size_t w = 0; w < workers; ++w) {
    result.fallbacks += fallbacks[w];
    result.clusters_processed += processed[w];
  }
  return result;
}

IntensityImage denoise_image(const CountImage& noisy, const DenoiseIndex& index,
                             const DenoiseParams& params, std::size_t workers) {
  return denoise_image_detailed(noisy, Denoiser(index), params, workers).image;
}

EvaluationReport evaluate(const IntensityImage& clean, const std::string& name,
                          std::span<const double> peaks, std::size_t realizations,
                          std::uint64_t seed, const ImageDenoiser& denoise) {
  if (realizations == 0) fail(ErrorCode::kInvalidArgument, "evaluate: realizations must be >= 1");
  if (peaks.empty()) fail(ErrorCode::kInvalidArgument, "evaluate: no peaks given");
  EvaluationReport report;
  for (std::size_t p = 0; p < peaks.size(); ++p) {
    const double peak = peaks[p];
    const IntensityImage reference = scale_to_peak(clean, peak);
    EvaluationRow row{name, peak, realizations, 0.0, 0.0, 0.0, 0};
    const auto start = std::chrono::steady_clock::now();
    for (std::size_t r = 0; r < realizations; ++r) {
      const CountImage noisy = sample_poisson(reference, derive_seed(seed, {p, r}));
      const DenoiseImageResult out = denoise(noisy);
      row.psnr_noisy_db += psnr(reference, to_intensity(noisy), peak);
      row.psnr_denoised_db += psnr(reference, out.image, peak);
      row.fallbacks += out.fallbacks;
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    row.psnr_noisy_db /= static_cast<double>(realizations);
    row.psnr_denoised_db /= static_cast<double>(realizations);
    report.rows.push_back(std::move(row));
  }
  return report;
}

EvaluationReport evaluate(const IntensityImage& clean, const std::string& name,
                          const DenoiseIndex& index, std::span<const double> peaks,
                          std::size_t realizations, std::uint64_t seed,
                          const DenoiseParams& params, std::size_t workers) {
  const Denoiser denoiser(index);
  return evaluate(clean, name, peaks, realizations, seed, [&](const CountImage& noisy) {
    return denoise_image_detailed(noisy, denoiser, params, workers);
  });
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

}  // namespace

void write_report_csv(std::ostream& out, const EvaluationReport& report) {
  out << "image,peak,realizations,psnr_noisy_db,psnr_denoised_db,seconds,fallbacks\n";
  std::ostringstream line;
  line.imbue(std::locale::classic());
  for (const auto& row : report.rows) {
    line.str("");
    line << csv_field(row.image) << ',' << std::setprecision(17) << row.peak << ',' << row.realizations
         << ',' << row.psnr_noisy_db << ',' << row.psnr_denoised_db << ',' << std::setprecision(6)
         << row.seconds << ',' << row.fallbacks << '\n';
    out << line.str();
  }
}

void write_report_table(std::ostream& out, const EvaluationReport& report) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << std::left << std::setw(24) << "image" << std::right << std::setw(8) << "peak" << std::setw(8) << "reals"
    << std::setw(12) << "noisy dB" << std::setw(12) << "denoised dB" << std::setw(10) << "gain dB"
    << std::setw(10) << "seconds" << std::setw(10) << "fallback" << '\n';
  for (const auto& row : report.rows) {
    s << std::left << std::setw(24) << row.image << std::right << std::fixed << std::setprecision(2)
      << std::setw(8) << row.peak << std::setw(8) << row.realizations << std::setw(12) << row.psnr_noisy_db
      << std::setw(12) << row.psnr_denoised_db << std::setw(10) << row.psnr_denoised_db - row.psnr_noisy_db
      << std::setw(10) << std::setprecision(1) << row.seconds << std::setw(10) << row.fallbacks << '\n';
  }
  out << s.str();
}

}  // namespace pmse
