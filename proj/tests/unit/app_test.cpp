#include <gtest/gtest.h>

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "commands.hpp"
#include "csv.hpp"
#include "kickdyn/errors.hpp"
#include "manifest.hpp"
#include "svg.hpp"

namespace {

namespace fs = std::filesystem;
using namespace kickdyn::app;

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("kickdyn_app_test_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

RunContext quiet(const fs::path& out, std::ostringstream& sink) {
  RunContext ctx;
  ctx.out_dir = out;
  ctx.threads = 1;
  ctx.log = &sink;
  ctx.err = &sink;
  return ctx;
}

TEST(FormatDouble, RoundTrips) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 10000; ++i) {
    const double v = u(gen) * std::pow(10.0, i % 40 - 20);
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

using CsvTest = TempDir;

TEST_F(CsvTest, WriteReadRoundTrip) {
  Table t{{"a", "b"}, {{0.1, -2.5e-300, 1.0 / 3.0}, {std::numeric_limits<double>::max(), 0.0, -7.0}}};
  write_csv(dir_ / "t.csv", t);
  const Table r = read_csv(dir_ / "t.csv");
  EXPECT_EQ(r.header, t.header);
  EXPECT_EQ(r.columns, t.columns);
  EXPECT_EQ(r.column("b")[2], -7.0);
  EXPECT_THROW((void)r.column("c"), kickdyn::ArgumentError);
}

TEST_F(CsvTest, RejectsMalformed) {
  std::ofstream(dir_ / "bad.csv") << "a,b\n1,2\n3\n";
  EXPECT_THROW((void)read_csv(dir_ / "bad.csv"), kickdyn::ArgumentError);
  std::ofstream(dir_ / "nan.csv") << "a\nx\n";
  EXPECT_THROW((void)read_csv(dir_ / "nan.csv"), kickdyn::ArgumentError);
  EXPECT_THROW((void)read_csv(dir_ / "missing.csv"), kickdyn::ArgumentError);
  EXPECT_THROW(write_csv(dir_ / "r.csv", Table{{"a"}, {{1.0}, {2.0}}}), kickdyn::ArgumentError);
}

using ManifestTest = TempDir;

TEST_F(ManifestTest, Sha256KnownVector) {
  std::ofstream(dir_ / "abc", std::ios::binary) << "abc";
  EXPECT_EQ(sha256_file(dir_ / "abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_F(ManifestTest, JsonRoundTrip) {
  std::ofstream(dir_ / "x.txt") << "payload";
  const auto m = write_manifest(dir_, "simulate", {{"steps", 10}}, 42, 3, {"x.txt"});
  const auto r = read_manifest(dir_ / "manifest.json");
  EXPECT_EQ(r.command, "simulate");
  EXPECT_EQ(r.seed, 42U);
  EXPECT_EQ(r.threads, 3U);
  EXPECT_EQ(r.outputs, m.outputs);
  EXPECT_EQ(r.parameters["steps"], 10);
  EXPECT_FALSE(r.version.empty());
  EXPECT_EQ(r.timestamp.size(), 20U);
}

TEST(Svg, ContainsSeriesColours) {
  Plot p{"t", "x", "y", false, {}};
  p.series.push_back({"numerical", "blue", {0, 1, 2}, {1, 2, 3}, true});
  p.series.push_back({"analytic", "green", {0, 1, 2}, {1, 2, 3}, false});
  p.series.push_back({"difference", "red", {0, 1, 2}, {0, -1, 0}, false});
  const auto s = render_svg(p);
  EXPECT_NE(s.find("<svg"), std::string::npos);
  for (const char* c : {"blue", "green", "red"}) EXPECT_NE(s.find(c), std::string::npos);
  EXPECT_EQ(s.find("nan"), std::string::npos);
  p.log_y = true;
  EXPECT_NE(render_svg(p).find("1e"), std::string::npos);
}

TEST(Options, JsonRoundTrip) {
  SimulateOptions s;
  s.map = {2, "ulam"};
  s.tau = 0.05;
  s.steps = 123;
  s.lo = -2;
  s.hi = 2.5;
  const auto back = nlohmann::json(s).get<SimulateOptions>();
  EXPECT_EQ(nlohmann::json(back), nlohmann::json(s));
  EXPECT_FALSE(back.lambda.has_value());
  EXPECT_EQ(*back.tau, 0.05);

  CmlOptions c;
  c.grid = kickdyn::AlphaGrid{0.0, 0.5, 0.1};
  c.alphas = {0.25};
  EXPECT_EQ(nlohmann::json(nlohmann::json(c).get<CmlOptions>()), nlohmann::json(c));

  VerifyOptions v;
  v.inject_fault = "A-beta";
  EXPECT_EQ(*nlohmann::json(v).get<VerifyOptions>().inject_fault, "A-beta");
}

TEST(Options, Validation) {
  SimulateOptions s;
  s.lambda = 0.9;
  s.tau = 0.1;
  EXPECT_THROW((void)s.params(), kickdyn::ArgumentError);
  s.tau.reset();
  s.map = {3, "ulam"};
  EXPECT_THROW((void)s.params(), kickdyn::ArgumentError);
  s.map = {3, "tent"};
  EXPECT_THROW((void)s.params(), kickdyn::ArgumentError);
  s.map = {3, "chebyshev"};
  s.lo = 1;
  s.hi = 0;
  EXPECT_THROW((void)s.params(), kickdyn::ArgumentError);
  SimulateOptions d;
  EXPECT_DOUBLE_EQ(d.params().lambda, 0.98);
}

using CommandTest = TempDir;

TEST_F(CommandTest, VerifyNamesInjectedFault) {
  std::ostringstream sink;
  VerifyOptions v;
  v.lemmas.n_max = 4;
  v.lemmas.samples = 50;
  RunContext ctx = quiet(dir_, sink);
  ctx.write_files = false;
  EXPECT_TRUE(run_verify(v, ctx).all_passed());
  v.inject_fault = "A-beta";
  const auto r = run_verify(v, ctx);
  EXPECT_FALSE(r.all_passed());
  EXPECT_NE(sink.str().find("FAIL residual A-beta"), std::string::npos);
  v.inject_fault = "bogus";
  EXPECT_THROW((void)run_verify(v, ctx), kickdyn::ArgumentError);
}

TEST_F(CommandTest, SimulateWritesFilesAndWarnsForLargeTau) {
  std::ostringstream sink;
  SimulateOptions s;
  s.map = {3, "chebyshev"};
  s.tau = 0.7;
  s.steps = 20000;
  const auto out = run_simulate(s, quiet(dir_, sink));
  EXPECT_NE(sink.str().find("warning"), std::string::npos);
  for (const char* f : {"histogram.csv", "analytic.csv", "summary.json", "simulate.svg", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(dir_ / f)) << f;
  }
  const Table h = read_csv(dir_ / "histogram.csv");
  EXPECT_EQ(h.header, (std::vector<std::string>{"bin_center", "density"}));
  EXPECT_EQ(h.rows(), 1000U);
  const Table a = read_csv(dir_ / "analytic.csv");
  EXPECT_EQ(a.header, (std::vector<std::string>{"bin_center", "analytic", "difference"}));
  EXPECT_EQ(out.result.count(), 20000U);
}

TEST_F(CommandTest, ExtractFromFileMatchesInProcess) {
  std::ostringstream sink;
  SimulateOptions s;
  s.map = {4, "chebyshev"};
  s.lambda = 0.9;
  s.steps = 200000;
  (void)run_simulate(s, quiet(dir_ / "sim", sink));
  ExtractOptions e;
  e.sim = s;
  e.window = 0.8;
  RunContext nofiles = quiet(dir_, sink);
  nofiles.write_files = false;
  const auto direct = run_extract(e, nofiles);
  e.from_file = dir_ / "sim" / "histogram.csv";
  const auto file = run_extract(e, nofiles);
  ASSERT_EQ(direct.extracted.size(), file.extracted.size());
  for (std::size_t i = 0; i < direct.extracted.size(); ++i) {
    EXPECT_EQ(direct.extracted[i].y, file.extracted[i].y);
    EXPECT_EQ(direct.extracted[i].density, file.extracted[i].density);
  }
  for (const auto& p : direct.extracted) EXPECT_LE(std::abs(p.y), 0.8);
}

TEST_F(CommandTest, ExtractAnalyticSelfTestIsExact) {
  std::ostringstream sink;
  RunContext ctx = quiet(dir_, sink);
  ctx.write_files = false;
  for (auto [order, variant] : {std::pair{2, "chebyshev"}, {2, "ulam"}, {3, "chebyshev"}, {5, "chebyshev"}}) {
    ExtractOptions e;
    e.sim.map = {order, variant};
    e.sim.lambda = 0.9;
    e.analytic = true;
    EXPECT_LT(run_extract(e, ctx).max_abs_deviation, 1e-12) << order << variant;
  }
  ExtractOptions bad;
  bad.analytic = true;
  bad.window = 0.0;
  EXPECT_THROW((void)run_extract(bad, ctx), kickdyn::ArgumentError);
}

TEST_F(CommandTest, CmlReplayIsIdentical) {
  std::ostringstream sink;
  CmlOptions c;
  c.size = 10;
  c.steps = 200;
  c.burn_in = 10;
  c.lambdas = {0.7};
  c.grid = kickdyn::AlphaGrid{0.0, 1.0, 0.5};
  c.alphas = {0.5};
  const auto out = run_cml(c, quiet(dir_ / "run", sink));
  EXPECT_EQ(out.cells.size(), 3U);
  EXPECT_EQ(out.pooled.size(), 1U);
  EXPECT_TRUE(fs::exists(dir_ / "run" / "kurtosis_lambda0.7.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "run" / "pooled_lambda0.7_log.svg"));
  RunContext again = quiet(dir_ / "again", sink);
  again.threads = 3;
  const auto r = replay(dir_ / "run" / "manifest.json", again);
  EXPECT_TRUE(r.identical);
  EXPECT_THROW((void)replay(dir_ / "run" / "manifest.json", quiet(dir_ / "run", sink)), kickdyn::ArgumentError);
}

TEST_F(CommandTest, ReplayDetectsTamperedOutput) {
  std::ostringstream sink;
  SimulateOptions s;
  s.steps = 5000;
  s.svg = false;
  (void)run_simulate(s, quiet(dir_ / "run", sink));
  auto m = read_manifest(dir_ / "run" / "manifest.json");
  m.outputs["histogram.csv"] = std::string(64, '0');
  std::ofstream(dir_ / "run" / "manifest.json") << nlohmann::json(m).dump();
  const auto r = replay(dir_ / "run" / "manifest.json", quiet(dir_ / "again", sink));
  EXPECT_FALSE(r.identical);
  ASSERT_EQ(r.mismatches.size(), 1U);
  EXPECT_EQ(r.mismatches[0], "histogram.csv");
}

}  // namespace
