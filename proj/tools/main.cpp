#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <sstream>

#include "commands.hpp"
#include "kickdyn/errors.hpp"
#include "kickdyn/version.hpp"

namespace {

using namespace kickdyn::app;

std::uint64_t parse_count(const std::string& text, const char* flag) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::logic_error&) {
    used = 0;
  }
  if (used != text.size() || !(v >= 0) || v > 1e19 || std::floor(v) != v) {
    throw kickdyn::ArgumentError(std::string(flag) + ": expected a non-negative integer, got '" + text + "'");
  }
  return static_cast<std::uint64_t>(v);
}

std::vector<double> split_numbers(const std::string& text, char sep, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, sep)) {
    std::size_t used = 0;
    try {
      out.push_back(std::stod(cell, &used));
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used == 0 || used != cell.size()) throw kickdyn::ArgumentError(std::string(flag) + ": bad number '" + cell + "'");
  }
  return out;
}

struct CommonFlags {
  std::string out_dir = "kickdyn_out";
  unsigned threads = 0;
};

void add_common(CLI::App* cmd, CommonFlags& c) {
  cmd->add_option("--out-dir", c.out_dir, "Output directory")->capture_default_str();
  cmd->add_option("--threads", c.threads, "Worker threads (0: KICKDYN_THREADS or all cores)");
}

struct SimulateFlags {
  SimulateOptions opt;
  std::string steps, burn_in, range;
  CLI::Option* lambda = nullptr;
  CLI::Option* tau = nullptr;
  bool no_svg = false, no_reinject = false;

  void add(CLI::App* cmd, int default_order) {
    opt.map.order = default_order;
    cmd->add_option("--map", opt.map.order, "Chebyshev order N")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--variant", opt.map.variant, "Map variant")
        ->check(CLI::IsMember({"chebyshev", "ulam"}))
        ->capture_default_str();
    lambda = cmd->add_option("--lambda", lambda_value, "Relaxation factor in (0,1) (default 0.98)");
    tau = cmd->add_option("--tau", tau_value, "Time scale parameter, lambda = exp(-tau)");
    lambda->excludes(tau);
    cmd->add_option("--steps", steps, "Post-burn-in samples (scientific notation accepted)");
    cmd->add_option("--burn-in", burn_in, "Discarded leading steps per shard");
    cmd->add_option("--bins", opt.bins, "Histogram bins")->capture_default_str();
    cmd->add_option("--range", range, "Histogram range LO,HI");
    cmd->add_option("--seed", opt.seed, "Master seed")->capture_default_str();
    cmd->add_option("--shards", opt.shards, "Independent sub-trajectories")->capture_default_str();
    cmd->add_flag("--no-svg", no_svg, "Skip SVG output");
    cmd->add_flag("--no-reinject", no_reinject, "Leave orbits trapped on the fixed point");
  }

  SimulateOptions resolve() {
    if (lambda->count()) opt.lambda = lambda_value;
    if (tau->count()) opt.tau = tau_value;
    if (!steps.empty()) opt.steps = parse_count(steps, "--steps");
    if (!burn_in.empty()) opt.burn_in = parse_count(burn_in, "--burn-in");
    if (!range.empty()) {
      const auto r = split_numbers(range, ',', "--range");
      if (r.size() != 2) throw kickdyn::ArgumentError("--range: expected LO,HI");
      opt.lo = r[0];
      opt.hi = r[1];
    }
    opt.svg = !no_svg;
    opt.reinject = !no_reinject;
    return opt;
  }

  double lambda_value = 0.0;
  double tau_value = 0.0;
};

RunContext context(const CommonFlags& c) {
  RunContext ctx;
  ctx.out_dir = c.out_dir;
  ctx.threads = c.threads;
  return ctx;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chaotically kicked relaxation dynamics: verification, simulation and lattice scans"};
  app.set_version_flag("--version", kickdyn::kVersion);
  app.require_subcommand(1);

  CommonFlags verify_common, sim_common, ext_common, cml_common, replay_common;

  auto* verify = app.add_subcommand("verify", "Run the lemma and exact residual suites");
  VerifyOptions vopt;
  std::string inject;
  verify->add_option("--n-min", vopt.lemmas.n_min, "Smallest map order")->capture_default_str();
  verify->add_option("--n-max", vopt.lemmas.n_max, "Largest map order")->capture_default_str();
  verify->add_option("--samples", vopt.lemmas.samples, "Random points per order")->capture_default_str();
  verify->add_option("--seed", vopt.lemmas.seed, "Seed for random points")->capture_default_str();
  verify->add_option("--inject-fault", inject, "Perturb one stated solution (A-alpha, A-beta, N4-beta, N3-beta)");
  auto* verify_out = verify->add_option("--out-dir", verify_common.out_dir, "Write report.json and a manifest here");
  verify->add_option("--threads", verify_common.threads, "Unused; accepted for symmetry");

  auto* sim = app.add_subcommand("simulate", "Iterate the skew product and compare with the analytic density");
  SimulateFlags sflags;
  sflags.add(sim, 4);
  add_common(sim, sim_common);

  auto* ext = app.add_subcommand("extract", "Extract the leading correction polynomial from a density");
  SimulateFlags eflags;
  eflags.add(ext, 3);
  add_common(ext, ext_common);
  ExtractOptions eopt;
  std::string from_file;
  ext->add_option("--window", eopt.window, "Half-width of the abscissa window")->capture_default_str();
  auto* from = ext->add_option("--from-file", from_file, "Read bin_center,density from a histogram CSV");
  auto* analytic = ext->add_flag("--analytic", eopt.analytic, "Self-test on the closed-form leading-order density");
  from->excludes(analytic);

  auto* cml = app.add_subcommand("cml-scan", "Coupled lattice kurtosis scans and pooled densities");
  CmlOptions copt;
  std::string grid, alpha_list, lambda_list, csteps, cburn, crange;
  bool full_scale = false, cno_svg = false, cno_reinject = false;
  cml->add_option("--map", copt.order, "Chebyshev order N")->capture_default_str()->check(CLI::PositiveNumber);
  cml->add_option("--lambda", lambda_list, "Comma-separated relaxation factors (default 0.6,0.9)");
  cml->add_option("--alpha-grid", grid, "Kurtosis scan grid START:END:STEP");
  cml->add_option("--alpha", alpha_list, "Comma-separated couplings for pooled histograms");
  cml->add_option("--size", copt.size, "Lattice size")->capture_default_str();
  cml->add_option("--steps", csteps, "Pooled iterations per run (scientific notation accepted)");
  cml->add_option("--burn-in", cburn, "Discarded lattice steps");
  cml->add_option("--bins", copt.bins, "Histogram bins")->capture_default_str();
  cml->add_option("--range", crange, "Histogram range LO,HI");
  cml->add_option("--seed", copt.seed, "Master seed")->capture_default_str();
  cml->add_flag("--full-scale", full_scale, "Size 1000, alpha step 0.005, 1e5 iterations");
  cml->add_flag("--no-svg", cno_svg, "Skip SVG output");
  cml->add_flag("--no-reinject", cno_reinject, "Leave sites trapped on the fixed point");
  add_common(cml, cml_common);

  auto* rep = app.add_subcommand("replay", "Re-run a recorded command and compare output digests");
  std::string manifest;
  rep->add_option("manifest", manifest, "Path to manifest.json")->required();
  auto* rep_out = rep->add_option("--out-dir", replay_common.out_dir, "Replay output directory (default: <run>/replay)");
  rep->add_option("--threads", replay_common.threads, "Worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    (void)app.exit(e);
    return kExitUsage;
  }

  try {
    if (verify->parsed()) {
      if (!inject.empty()) vopt.inject_fault = inject;
      RunContext ctx = context(verify_common);
      ctx.write_files = verify_out->count() > 0;
      const auto report = run_verify(vopt, ctx);
      return report.all_passed() ? kExitPass : kExitFailure;
    }
    if (sim->parsed()) {
      RunContext ctx = context(sim_common);
      const auto out = run_simulate(sflags.resolve(), ctx);
      std::cout << "samples " << out.result.count() << ", L1 to analytic " << out.l1_analytic << ", L1 to Gaussian "
                << out.l1_gaussian << "\nwrote " << ctx.out_dir.string() << "\n";
      return kExitPass;
    }
    if (ext->parsed()) {
      eopt.sim = eflags.resolve();
      if (!from_file.empty()) eopt.from_file = std::filesystem::absolute(from_file);
      RunContext ctx = context(ext_common);
      const auto out = run_extract(eopt, ctx);
      std::cout << out.extracted.size() << " points, mean squared deviation " << out.mean_squared_deviation
                << ", max |deviation| " << out.max_abs_deviation << "\nwrote " << ctx.out_dir.string() << "\n";
      return kExitPass;
    }
    if (cml->parsed()) {
      if (!lambda_list.empty()) copt.lambdas = split_numbers(lambda_list, ',', "--lambda");
      if (!alpha_list.empty()) copt.alphas = split_numbers(alpha_list, ',', "--alpha");
      if (!grid.empty()) {
        const auto g = split_numbers(grid, ':', "--alpha-grid");
        if (g.size() != 3) throw kickdyn::ArgumentError("--alpha-grid: expected START:END:STEP");
        copt.grid = kickdyn::AlphaGrid{g[0], g[1], g[2]};
      }
      if (full_scale) copt.apply_full_scale();
      if (!csteps.empty()) copt.steps = parse_count(csteps, "--steps");
      if (!cburn.empty()) copt.burn_in = parse_count(cburn, "--burn-in");
      if (!crange.empty()) {
        const auto r = split_numbers(crange, ',', "--range");
        if (r.size() != 2) throw kickdyn::ArgumentError("--range: expected LO,HI");
        copt.lo = r[0];
        copt.hi = r[1];
      }
      copt.svg = !cno_svg;
      copt.reinject = !cno_reinject;
      RunContext ctx = context(cml_common);
      const auto out = run_cml(copt, ctx);
      for (const auto& c : out.cells) std::cout << "lambda " << c.lambda << " alpha " << c.alpha << " kappa " << c.kappa << "\n";
      for (const auto& [c, h] : out.pooled)
        std::cout << "pooled lambda " << c.lambda << " alpha " << c.alpha << " kappa " << c.kappa << "\n";
      std::cout << "wrote " << ctx.out_dir.string() << "\n";
      return kExitPass;
    }
    if (rep->parsed()) {
      RunContext ctx = context(replay_common);
      if (!rep_out->count()) ctx.out_dir = std::filesystem::path(manifest).parent_path() / "replay";
      const auto out = replay(manifest, ctx);
      for (const auto& m : out.mismatches) std::cout << "MISMATCH " << m << "\n";
      std::cout << (out.identical ? "replay identical" : "replay differs") << "\n";
      return out.identical ? kExitPass : kExitFailure;
    }
  } catch (const kickdyn::ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
