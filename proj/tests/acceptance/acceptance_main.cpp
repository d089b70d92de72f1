// Acceptance criteria 1-8. One PASS/FAIL line per criterion; exit status is
// the number of failures (capped at 1).

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "kickdyn/analytic.hpp"
#include "kickdyn/lattice.hpp"
#include "kickdyn/verify.hpp"

namespace {

namespace fs = std::filesystem;
using namespace kickdyn;
using namespace kickdyn::app;

// Pinned tolerances.
constexpr double kSuiteSeconds = 1.0;
constexpr double kLemmaSeconds = 30.0;
constexpr std::uint64_t kMomentSamples = 3000000;
constexpr double kVarianceRelTol = 0.015;
constexpr double kKurtosisTol = 0.05;
constexpr double kSkewnessTol = 0.03;
constexpr std::uint64_t kL1Samples = 10000000;
constexpr std::uint64_t kExtractSamples = 10000000;
constexpr double kExtractWindow = 0.8;
constexpr double kMachineTol = 1e-12;
constexpr double kCmlKurtosisSigmas = 3.0;
constexpr double kCmlDeviation = 0.3;

// Regression constants from the pilot run (seed 20240613, 8 shards), about
// 1.5x the observed value.
struct L1Pin {
  int order;
  double lambda;
  double limit;
};
constexpr L1Pin kL1Pins[] = {
    {2, 0.76, 0.17}, {2, 0.9, 0.033}, {2, 0.98, 0.0095},
    {3, 0.76, 0.028}, {3, 0.9, 0.0083}, {3, 0.98, 0.0096},
    {4, 0.76, 0.041}, {4, 0.9, 0.0099}, {4, 0.98, 0.0093},
};
struct ExtractPin {
  int order;
  double limit;
};
constexpr ExtractPin kExtractPins[] = {{2, 0.051}, {3, 0.0048}, {4, 0.0063}};

int failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " AC" << id << " " << title << ": " << detail << std::endl;
  if (!ok) ++failures;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

template <class F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RunContext quiet(unsigned threads = 0) {
  static std::ostringstream sink;
  RunContext ctx;
  ctx.write_files = false;
  ctx.threads = threads;
  ctx.log = &sink;
  ctx.err = &sink;
  return ctx;
}

SimulateOptions sim_options(int order, double lambda, std::uint64_t steps, const char* variant = "chebyshev") {
  SimulateOptions o;
  o.map = {order, variant};
  o.lambda = lambda;
  o.steps = steps;
  o.svg = false;
  return o;
}

bool only_prefixed(const VerificationReport& r, const std::vector<std::string>& prefixes, int& count) {
  bool ok = true;
  count = 0;
  for (const auto& c : r.checks) {
    for (const auto& p : prefixes) {
      if (c.name.rfind(p, 0) == 0) {
        ++count;
        ok = ok && c.passed;
      }
    }
  }
  return ok && count > 0;
}

void ac1_ac2() {
  VerificationReport r;
  const double t = seconds([&] { r = verify_residuals(); });
  int n1 = 0, n2 = 0;
  const bool res = only_prefixed(r, {"residual ", "source-assembly ", "solver "}, n1);
  report(1, "exact residual suite", res && n1 == 12 && t < kSuiteSeconds,
         std::to_string(n1) + " exact checks, " + fmt("%.3f s", t));
  const bool norm = only_prefixed(r, {"normalization ", "density-normalization "}, n2);
  report(2, "normalization suite", norm && n2 == 8 && t < kSuiteSeconds,
         std::to_string(n2) + " exact integrals, " + fmt("%.3f s", t));
}

void ac3() {
  LemmaSuiteOptions o;
  o.n_min = 2;
  o.n_max = 10;
  o.samples = 1000;
  o.reconstruction_tol = 1e-9;
  o.sum_tol = 1e-10;
  o.weight_rel_tol = 1e-9;
  VerificationReport r;
  const double t = seconds([&] { r = run_lemma_suite(o); });
  const auto f = r.failures();
  report(3, "lemma suite", f.empty() && t < kLemmaSeconds,
         std::to_string(r.checks.size()) + " checks, " + std::to_string(f.size()) + " failed, " + fmt("%.2f s", t) +
             (f.empty() ? "" : ", first: " + f.front()));
}

// Single-chain kurtosis estimate of AC4 (N = 4), reused by AC7.
EstimateWithError chain_kurtosis_n4{};

void ac4() {
  bool ok = true;
  std::ostringstream d;
  for (int order : {4, 3}) {
    const auto out = run_simulate(sim_options(order, 0.98, kMomentSamples), quiet());
    const double tau = out.params.tau;
    const auto m = central_moments(out.result.moments);
    const auto pred = predicted_moments(ChaoticMap::chebyshev(order));
    const double var_target = 0.25 * (1.0 + tau);
    const double fourth = order == 3 ? 3.0 / 16 + 13.0 / 32 * tau : 3.0 / 16 + 9.0 / 32 * tau;
    const double kappa_target = fourth / (var_target * var_target);
    // Oracle cross-check against the exact-moment engine.
    ok = ok && std::abs(pred.kurtosis_at(tau) - kappa_target) < 1e-12;
    const double rel = m.m2 / var_target - 1.0;
    const double dk = kurtosis(m) - kappa_target;
    ok = ok && std::abs(rel) <= kVarianceRelTol && std::abs(dk) <= kKurtosisTol;
    d << "T" << order << " var " << fmt("%+.4f", rel) << " rel, kappa " << fmt("%.4f", kurtosis(m)) << " vs "
      << fmt("%.4f", kappa_target) << "; ";
    if (order == 4) {
      chain_kurtosis_n4 = batch_estimate(out.result.batches, [](const CentralMoments& c) { return kurtosis(c); });
    }
  }
  const auto t2 = run_simulate(sim_options(2, 0.98, kMomentSamples), quiet());
  const double target = 2.0 * std::sqrt(t2.params.tau);
  const double s = skewness(central_moments(t2.result.moments));
  ok = ok && std::abs(s - target) <= kSkewnessTol;
  d << "T2 skewness " << fmt("%.4f", s) << " vs " << fmt("%.4f", target);
  report(4, "moment reproduction", ok, d.str());
}

void ac5() {
  bool ok = true;
  std::ostringstream d;
  for (int order : {2, 3, 4}) {
    double previous = 1e9;
    d << "T" << order << " L1";
    for (const auto& pin : kL1Pins) {
      if (pin.order != order) continue;
      const auto out = run_simulate(sim_options(order, pin.lambda, kL1Samples), quiet());
      const bool decreasing = out.l1_analytic < previous;
      const bool pinned = out.l1_analytic <= pin.limit;
      ok = ok && decreasing && pinned;
      previous = out.l1_analytic;
      d << " " << fmt("%.5f", out.l1_analytic) << (decreasing ? "" : " (not below previous)")
        << (pinned ? "" : " (above pin)");
    }
    d << "; ";
  }
  report(5, "Gaussian approach", ok, d.str());
}

void ac6() {
  bool ok = true;
  std::ostringstream d;
  for (const auto& pin : kExtractPins) {
    ExtractOptions e;
    e.sim = sim_options(pin.order, 0.9, kExtractSamples);
    e.window = kExtractWindow;
    const auto out = run_extract(e, quiet());
    ok = ok && out.mean_squared_deviation <= pin.limit;
    e.analytic = true;
    const auto self = run_extract(e, quiet());
    ok = ok && self.max_abs_deviation <= kMachineTol;
    d << "T" << pin.order << " msd " << fmt("%.5f", out.mean_squared_deviation) << " self-test "
      << fmt("%.1e", self.max_abs_deviation) << "; ";
  }
  report(6, "correction extraction", ok, d.str());
}

void ac7() {
  std::ostringstream d;
  LatticeConfig c;
  c.order = MapOrder(4);
  c.size = 100;
  c.alpha = 0.0;
  c.lambda = 0.98;
  c.steps = 10000;
  c.histogram.reset();
  const auto lat = run_lattice(c).kurtosis_estimate();
  const double se = std::hypot(lat.standard_error, chain_kurtosis_n4.standard_error);
  const bool uncoupled = std::abs(lat.value - chain_kurtosis_n4.value) <= kCmlKurtosisSigmas * se;
  d << "alpha=0 kappa " << fmt("%.4f", lat.value) << " vs chain " << fmt("%.4f", chain_kurtosis_n4.value) << " ("
    << fmt("%.2f", std::abs(lat.value - chain_kurtosis_n4.value) / se) << " se); ";

  bool synced = true;
  for (int order : {2, 3, 4}) {
    LatticeConfig s = c;
    s.order = MapOrder(order);
    s.alpha = 1.0;
    s.reinject_at_fixed_point = false;
    const LatticeState init{std::vector<double>(s.size, 0.2718281828), std::vector<double>(s.size, 0.0)};
    const auto r = run_lattice(s, init);
    for (std::size_t i = 1; i < s.size; ++i) {
      synced = synced && r.final_state.x[i] == r.final_state.x[0] && r.final_state.y[i] == r.final_state.y[0];
    }
  }
  d << "alpha=1 synchronized " << (synced ? "yes" : "no") << "; ";

  LatticeConfig scan = c;
  scan.order = MapOrder(3);
  const auto cells = kurtosis_scan(MapOrder(3), {0.6}, AlphaGrid{0.0, 1.0, 0.05}, scan, 0);
  double worst = 0.0, at = 0.0;
  for (const auto& cell : cells) {
    if (cell.alpha <= 0.0 || cell.alpha >= 1.0) continue;
    if (std::abs(cell.kappa - 3.0) > worst) {
      worst = std::abs(cell.kappa - 3.0);
      at = cell.alpha;
    }
  }
  d << "T3 lambda=0.6 max |kappa-3| " << fmt("%.3f", worst) << " at alpha " << fmt("%.2f", at);
  report(7, "lattice consistency", uncoupled && synced && worst > kCmlDeviation, d.str());
}

void ac8() {
  const fs::path root = fs::temp_directory_path() / ("kickdyn_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  std::ostringstream sink, d;
  bool ok = true;
  auto run = [&](const std::string& name, const std::function<void(const RunContext&)>& f) {
    RunContext ctx;
    ctx.out_dir = root / name;
    ctx.threads = 1;
    ctx.log = &sink;
    ctx.err = &sink;
    f(ctx);
    RunContext again = ctx;
    again.out_dir = root / (name + "_replay");
    again.threads = 4;
    const auto r = replay(ctx.out_dir / "manifest.json", again);
    ok = ok && r.identical;
    d << name << (r.identical ? " identical" : " DIFFERS") << "; ";
  };
  run("verify", [](const RunContext& ctx) { (void)run_verify(VerifyOptions{}, ctx); });
  run("simulate", [](const RunContext& ctx) {
    auto o = sim_options(2, 0.9, 400000);
    o.svg = true;
    (void)run_simulate(o, ctx);
  });
  run("extract", [](const RunContext& ctx) {
    ExtractOptions e;
    e.sim = sim_options(3, 0.9, 400000);
    (void)run_extract(e, ctx);
  });
  run("extract_file", [&](const RunContext& ctx) {
    ExtractOptions e;
    e.sim = sim_options(2, 0.9, 400000);
    e.from_file = root / "simulate" / "histogram.csv";
    (void)run_extract(e, ctx);
  });
  run("cml-scan", [](const RunContext& ctx) {
    CmlOptions o;
    o.size = 20;
    o.steps = 500;
    o.grid = AlphaGrid{0.0, 1.0, 0.25};
    o.alphas = {0.0, 1.0};
    (void)run_cml(o, ctx);
  });
  std::error_code ec;
  fs::remove_all(root, ec);
  report(8, "determinism", ok, d.str());
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, void (*)()>> criteria{
      {"AC1-2", ac1_ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5}, {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}};
  for (const auto& [name, fn] : criteria) {
    try {
      fn();
    } catch (const std::exception& e) {
      std::cout << "FAIL " << name << " raised: " << e.what() << std::endl;
      ++failures;
    }
  }
  std::cout << (failures ? "acceptance: FAILED (" + std::to_string(failures) + ")" : std::string("acceptance: all passed"))
            << std::endl;
  return failures ? 1 : 0;
}
