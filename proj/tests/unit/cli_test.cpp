#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "fixtures.hpp"

using namespace pmse;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "pmse");
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string csv_without_seconds(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    f.at(5) = "-";
    for (const auto& c : f) out += c + ",";
    out += "\n";
  }
  return out;
}

// (psnr_noisy_db, psnr_denoised_db) per data row.
std::vector<std::pair<double, double>> load_report_rows(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::vector<std::pair<double, double>> rows;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    rows.emplace_back(std::stod(f.at(3)), std::stod(f.at(4)));
  }
  return rows;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    write_pgm(dir_ / "a.pgm", round_to_counts(scale_to_peak(test::synthetic_scene(48, 48, 1), 255)), 255);
    write_pgm(dir_ / "b.pgm", round_to_counts(scale_to_peak(test::synthetic_scene(48, 48, 2), 255)), 255);
    write_pgm(dir_ / "clean.pgm", round_to_counts(scale_to_peak(test::synthetic_scene(64, 64, 3), 255)), 255);
  }

  std::string p(const std::string& name) const { return (dir_ / name).string(); }

  CliRun build(const std::string& out) {
    return run({"build-index", "-i", p("a.pgm"), "-i", p("b.pgm"), "-o", p(out), "--side", "4", "--clusters",
                "120", "--trees", "8", "--leaf-size", "8", "--seed", "3"});
  }

  test::TempDir dir_{"cli"};
};

}  // namespace

TEST_F(CliTest, HelpListsDefaults) {
  const auto r = run({"build-index", "--help"});
  EXPECT_EQ(r.code, 0);
  for (const char* s : {"[14]", "[1000000]", "[64]", "[32]", "[25]"}) EXPECT_NE(r.out.find(s), std::string::npos) << s;
  const auto d = run({"denoise", "--help"});
  for (const char* s : {"[10]", "[1e-12]", "[denoised.pfm]"}) EXPECT_NE(d.out.find(s), std::string::npos) << s;
  const auto e = run({"evaluate", "--help"});
  for (const char* s : {"[5]", "[report.csv]"}) EXPECT_NE(e.out.find(s), std::string::npos) << s;
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kUsage);
  EXPECT_EQ(run({"simulate", "-i", p("clean.pgm"), "--bogus"}).code, cli::kUsage);
  EXPECT_EQ(run({"simulate", "-i", p("missing.pgm")}).code, cli::kUsage);
  EXPECT_EQ(run({"simulate", "-i", p("clean.pgm"), "--peak", "-2"}).code, cli::kUsage);
}

TEST_F(CliTest, SimulateIsByteReproducible) {
  ASSERT_EQ(run({"simulate", "--input", p("clean.pgm"), "--peak", "2", "--seed", "7", "-o", p("n1.pgm")}).code, 0);
  ASSERT_EQ(run({"simulate", "--input", p("clean.pgm"), "--peak", "2", "--seed", "7", "-o", p("n2.pgm")}).code, 0);
  EXPECT_EQ(slurp(dir_ / "n1.pgm"), slurp(dir_ / "n2.pgm"));
  EXPECT_EQ(slurp(dir_ / "n1.pgm").rfind("P5\n64 64\n65535\n", 0), 0u);
}

TEST_F(CliTest, BuildDenoiseEvaluate) {
  const auto b = build("x.idx");
  ASSERT_EQ(b.code, 0) << b.err;
  const auto index = load_index(dir_ / "x.idx");
  EXPECT_EQ(index.neighbors(), 32u);
  EXPECT_EQ(index.clusters(), 120u);

  ASSERT_EQ(run({"simulate", "-i", p("clean.pgm"), "--peak", "2", "--seed", "1", "-o", p("noisy.pgm")}).code, 0);
  const auto d = run({"denoise", "--index", p("x.idx"), "-i", p("noisy.pgm"), "-o", p("out.pfm"), "--workers", "2"});
  ASSERT_EQ(d.code, 0) << d.err;
  const auto den = read_pfm(dir_ / "out.pfm");
  EXPECT_EQ(den.width(), 64u);
  EXPECT_TRUE(std::filesystem::exists(dir_ / "out.pgm"));

  const auto clean = scale_to_peak(read_pgm_intensity(dir_ / "clean.pgm"), 2.0);
  const auto noisy = to_intensity(read_pgm_counts(dir_ / "noisy.pgm"));
  EXPECT_GT(psnr(clean, den, 2.0), psnr(clean, noisy, 2.0));

  const auto e = run({"evaluate", "-i", p("clean.pgm"), "--index", p("x.idx"), "--peaks", "2", "--realizations",
                      "2", "-o", p("r.csv"), "--workers", "1"});
  ASSERT_EQ(e.code, 0) << e.err;
  const auto report = load_report_rows(slurp(dir_ / "r.csv"));
  ASSERT_EQ(report.size(), 1u);
  EXPECT_GT(report[0].second, report[0].first);
}

TEST_F(CliTest, PipelineIsReproducible) {
  ASSERT_EQ(build("1.idx").code, 0);
  ASSERT_EQ(build("2.idx").code, 0);
  EXPECT_EQ(slurp(dir_ / "1.idx"), slurp(dir_ / "2.idx"));
  for (const char* tag : {"1", "2"}) {
    const std::string t(tag);
    ASSERT_EQ(run({"simulate", "-i", p("clean.pgm"), "--peak", "3", "--seed", "5", "-o", p("n" + t + ".pgm")}).code, 0);
    ASSERT_EQ(run({"denoise", "--index", p(t + ".idx"), "-i", p("n" + t + ".pgm"), "-o", p("d" + t + ".pfm"),
                   "--workers", "2"}).code,
              0);
    ASSERT_EQ(run({"evaluate", "-i", p("clean.pgm"), "--index", p(t + ".idx"), "--peaks", "1,3", "--realizations",
                   "1", "-o", p("r" + t + ".csv"), "--workers", "2"}).code,
              0);
  }
  EXPECT_EQ(slurp(dir_ / "d1.pfm"), slurp(dir_ / "d2.pfm"));
  EXPECT_EQ(slurp(dir_ / "d1.pgm"), slurp(dir_ / "d2.pgm"));
  EXPECT_EQ(csv_without_seconds(slurp(dir_ / "r1.csv")), csv_without_seconds(slurp(dir_ / "r2.csv")));
}

TEST_F(CliTest, ImageSmallerThanPatch) {
  ASSERT_EQ(run({"build-index", "-i", p("a.pgm"), "-o", p("big.idx"), "--side", "14", "--clusters", "400",
                 "--neighbors", "8", "--trees", "2", "--cap", "600"}).code,
            0);
  write_pgm(dir_ / "tiny.pgm", CountImage(10, 10, 1u), 255);
  const auto r = run({"denoise", "--index", p("big.idx"), "-i", p("tiny.pgm"), "-o", p("tiny.pfm")});
  EXPECT_EQ(r.code, cli::kImageTooSmall);
  EXPECT_NE(r.err.find("image smaller than patch"), std::string::npos);
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
  EXPECT_FALSE(std::filesystem::exists(dir_ / "tiny.pfm"));
}

TEST_F(CliTest, DistinctFailureCodes) {
  const auto k = run({"build-index", "-i", p("a.pgm"), "-o", p("k.idx"), "--side", "4", "--clusters", "20"});
  EXPECT_EQ(k.code, cli::kBadParameter);
  EXPECT_NE(k.err.find("K"), std::string::npos);
  EXPECT_FALSE(std::filesystem::exists(dir_ / "k.idx"));

  std::ofstream(dir_ / "junk.idx") << "definitely not an index";
  const auto bad = run({"denoise", "--index", p("junk.idx"), "-i", p("clean.pgm")});
  EXPECT_EQ(bad.code, cli::kBadInputFile);

  std::ofstream(dir_ / "junk.pgm") << "P7 nope";
  ASSERT_EQ(build("ok.idx").code, 0);
  EXPECT_EQ(run({"denoise", "--index", p("ok.idx"), "-i", p("junk.pgm")}).code, cli::kBadInputFile);

  EXPECT_EQ(run({"simulate", "-i", p("clean.pgm"), "-o", (dir_ / "no" / "such" / "dir.pgm").string()}).code,
            cli::kIoError);
}
