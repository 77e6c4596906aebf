#include "cli.hpp"

#include <chrono>
#include <filesystem>
#include <optional>
#include <ostream>
#include <thread>

#include <CLI11.hpp>

#include "pmse/pmse.hpp"

namespace pmse::cli {

namespace {

namespace fs = std::filesystem;

struct BuildIndexArgs {
  std::vector<std::string> inputs;
  std::string output;
  std::size_t side = 14;
  std::size_t clusters = 1'000'000;
  std::size_t neighbors = 0;
  std::size_t trees = 64;
  std::size_t leaf_size = 32;
  std::size_t max_iters = 25;
  std::size_t cap = 0;
  std::uint64_t seed = 0;
};

struct SimulateArgs {
  std::string input;
  std::string output = "noisy.pgm";
  double peak = 1.0;
  std::uint64_t seed = 0;
};

struct DenoiseArgs {
  std::string index;
  std::string input;
  std::string output = "denoised.pfm";
  std::string pgm_output;
  std::size_t window = 10;
  double epsilon = 1e-12;
  bool exhaustive = false;
  std::size_t workers = 0;
};

struct EvaluateArgs {
  std::string input;
  std::string index;
  std::string output = "report.csv";
  std::string name;
  std::vector<double> peaks{1, 2, 3, 4, 5};
  std::size_t realizations = 5;
  std::uint64_t seed = 0;
  std::size_t window = 10;
  double epsilon = 1e-12;
  std::size_t workers = 0;
};

std::size_t default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo: return kIoError;
    case ErrorCode::kImageTooSmall: return kImageTooSmall;
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kDomainError:
    case ErrorCode::kDimensionMismatch: return kBadParameter;
    case ErrorCode::kFormat:
    case ErrorCode::kNotIndexFile:
    case ErrorCode::kVersionMismatch:
    case ErrorCode::kUnexpectedEof:
    case ErrorCode::kInconsistentIndex: return kBadInputFile;
    case ErrorCode::kDegenerate: return kInternal;
  }
  return kInternal;
}

void run_build_index(const BuildIndexArgs& a, std::ostream& out) {
  const std::size_t dim = a.side * a.side;
  const std::size_t k = a.neighbors == 0 ? 2 * dim : a.neighbors;
  std::vector<IntensityImage> images;
  for (const auto& path : a.inputs) images.push_back(read_pgm_intensity(path));

  const auto t0 = std::chrono::steady_clock::now();
  auto corpus = normalize_corpus(
      ingest_corpus(images, a.side, a.cap ? std::optional<std::size_t>(a.cap) : std::nullopt,
                    derive_seed(a.seed, {0})));
  out << "corpus: " << corpus.size() << " patches of " << a.side << "x" << a.side
      << ", mean intensity " << corpus.mean_intensity() << '\n';

  IndexBuildOptions options;
  options.side = a.side;
  options.clusters = a.clusters;
  options.neighbors = k;
  options.trees = a.trees;
  options.leaf_size = a.leaf_size;
  options.kmeans_max_iters = a.max_iters;
  options.seed = a.seed;
  const DenoiseIndex index = build_index(corpus, options);
  save_index(index, a.output);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out << "index: N_C=" << index.clusters() << " K=" << index.neighbors() << " N_T=" << index.trees()
      << " L=" << index.leaf_size() << " -> " << a.output << " (" << secs << " s)\n";
}

void run_simulate(const SimulateArgs& a, std::ostream& out) {
  const IntensityImage clean = read_pgm_intensity(a.input);
  const CountImage noisy = add_poisson_noise(clean, a.peak, a.seed);
  write_count_pgm(a.output, noisy);
  out << "simulate: peak " << a.peak << ", seed " << a.seed << " -> " << a.output << '\n';
}

DenoiseParams params_from(std::size_t window, double epsilon, bool exhaustive) {
  return DenoiseParams{.window = window, .epsilon = epsilon, .exhaustive = exhaustive};
}

void run_denoise(const DenoiseArgs& a, std::ostream& out) {
  const DenoiseIndex index = load_index(a.index);
  const CountImage noisy = read_pgm_counts(a.input);
  const Denoiser denoiser(index);
  const auto result = denoise_image_detailed(noisy, denoiser, params_from(a.window, a.epsilon, a.exhaustive),
                                             a.workers == 0 ? default_workers() : a.workers);
  const CountImage rounded = round_to_counts(result.image);
  const std::uint32_t maxval = max_value(rounded) <= 255 ? 255 : 65535;
  fs::path pgm = a.pgm_output.empty() ? fs::path(a.output).replace_extension(".pgm") : fs::path(a.pgm_output);
  write_pfm(a.output, result.image);
  write_pgm(pgm, rounded, maxval);
  out << "denoise: " << result.patches << " patches, " << result.fallbacks << " fallbacks -> " << a.output
      << ", " << pgm.string() << '\n';
}

void run_evaluate(const EvaluateArgs& a, std::ostream& out) {
  const IntensityImage clean = read_pgm_intensity(a.input);
  const DenoiseIndex index = load_index(a.index);
  const std::string name = a.name.empty() ? fs::path(a.input).stem().string() : a.name;
  const auto report = evaluate(clean, name, index, a.peaks, a.realizations, a.seed,
                               params_from(a.window, a.epsilon, false),
                               a.workers == 0 ? default_workers() : a.workers);
  write_file_atomically(a.output, [&](std::ostream& csv) { write_report_csv(csv, report); });
  write_report_table(out, report);
  out << "report -> " << a.output << '\n';
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Poisson image denoising by MMSE estimation over a clustered patch prior", "pmse"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  BuildIndexArgs build;
  auto* build_cmd = app.add_subcommand("build-index", "Cluster a patch corpus and write a search index");
  build_cmd->option_defaults()->always_capture_default();
  build_cmd->add_option("-i,--input", build.inputs, "Clean corpus images (PGM)")->required()->check(CLI::ExistingFile);
  build_cmd->add_option("-o,--output", build.output, "Index file to write")->required();
  build_cmd->add_option("--side", build.side, "Patch side (d = side^2)")->check(CLI::PositiveNumber);
  build_cmd->add_option("--clusters", build.clusters, "Number of k-means clusters N_C")->check(CLI::PositiveNumber);
  build_cmd->add_option("--neighbors", build.neighbors, "Graph neighbors K (0 = 2*side^2)")->default_str("0 (2*side^2)");
  build_cmd->add_option("--trees", build.trees, "Randomized k-d trees N_T")->check(CLI::PositiveNumber);
  build_cmd->add_option("--leaf-size", build.leaf_size, "k-d tree leaf size L")->check(CLI::PositiveNumber);
  build_cmd->add_option("--max-iters", build.max_iters, "k-means iteration budget")->check(CLI::PositiveNumber);
  build_cmd->add_option("--cap", build.cap, "Random subsample size for the corpus (0 = all patches)");
  build_cmd->add_option("--seed", build.seed, "Random seed");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Add Poisson noise to a clean image at a given peak");
  sim_cmd->option_defaults()->always_capture_default();
  sim_cmd->add_option("-i,--input", sim.input, "Clean image (PGM)")->required()->check(CLI::ExistingFile);
  sim_cmd->add_option("-o,--output", sim.output, "Noisy 16-bit PGM to write");
  sim_cmd->add_option("--peak", sim.peak, "Peak intensity of the scaled clean image")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", sim.seed, "Random seed");

  DenoiseArgs den;
  auto* den_cmd = app.add_subcommand("denoise", "Denoise a Poisson count image");
  den_cmd->option_defaults()->always_capture_default();
  den_cmd->add_option("--index", den.index, "Index file from build-index")->required()->check(CLI::ExistingFile);
  den_cmd->add_option("-i,--input", den.input, "Noisy count image (PGM)")->required()->check(CLI::ExistingFile);
  den_cmd->add_option("-o,--output", den.output, "Denoised PFM to write");
  den_cmd->add_option("--pgm-output", den.pgm_output, "Rounded PGM to write (default: output with .pgm)");
  den_cmd->add_option("--window", den.window, "Convergence window M (pops)")->check(CLI::PositiveNumber);
  den_cmd->add_option("--epsilon", den.epsilon, "Relative-change threshold for w")->check(CLI::NonNegativeNumber);
  den_cmd->add_flag("--exhaustive", den.exhaustive, "Visit every cluster");
  den_cmd->add_option("--workers", den.workers, "Worker threads (0 = all hardware threads)");

  EvaluateArgs ev;
  auto* ev_cmd = app.add_subcommand("evaluate", "PSNR of noisy and denoised images over noise realizations");
  ev_cmd->option_defaults()->always_capture_default();
  ev_cmd->add_option("-i,--input", ev.input, "Clean image (PGM)")->required()->check(CLI::ExistingFile);
  ev_cmd->add_option("--index", ev.index, "Index file from build-index")->required()->check(CLI::ExistingFile);
  ev_cmd->add_option("-o,--output", ev.output, "CSV report to write");
  ev_cmd->add_option("--name", ev.name, "Image name in the report (default: input file stem)");
  ev_cmd->add_option("--peaks", ev.peaks, "Peak intensities")->delimiter(',')->check(CLI::PositiveNumber);
  ev_cmd->add_option("--realizations", ev.realizations, "Noise realizations per peak")->check(CLI::PositiveNumber);
  ev_cmd->add_option("--seed", ev.seed, "Random seed");
  ev_cmd->add_option("--window", ev.window, "Convergence window M (pops)")->check(CLI::PositiveNumber);
  ev_cmd->add_option("--epsilon", ev.epsilon, "Relative-change threshold for w")->check(CLI::NonNegativeNumber);
  ev_cmd->add_option("--workers", ev.workers, "Worker threads (0 = all hardware threads)");

  std::vector<char*> argv;
  std::vector<std::string> storage(args);
  if (storage.empty()) storage.emplace_back("pmse");
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    if (sub == "build-index") run_build_index(build, out);
    else if (sub == "simulate") run_simulate(sim, out);
    else if (sub == "denoise") run_denoise(den, out);
    else if (sub == "evaluate") run_evaluate(ev, out);
    return kOk;
  } catch (const Error& e) {
    std::string msg = e.what();
    for (char& c : msg) {
      if (c == '\n') c = ' ';
    }
    err << "pmse " << sub << ": error: " << msg << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "pmse " << sub << ": internal error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace pmse::cli
