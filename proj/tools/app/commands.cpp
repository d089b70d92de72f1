#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "csv.hpp"
#include "kickdyn/errors.hpp"
#include "kickdyn/parallel.hpp"
#include "kickdyn/rng.hpp"
#include "kickdyn/version.hpp"
#include "manifest.hpp"
#include "svg.hpp"

namespace kickdyn::app {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ostream& log_of(const RunContext& ctx) { return ctx.log ? *ctx.log : std::cout; }
std::ostream& err_of(const RunContext& ctx) { return ctx.err ? *ctx.err : std::cerr; }

double gaussian_limit(double y) { return std::sqrt(2.0 / std::numbers::pi) * std::exp(-2.0 * y * y); }

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

std::vector<double> centers(const Histogram& h) {
  std::vector<double> c(h.bins());
  for (std::size_t i = 0; i < h.bins(); ++i) c[i] = h.bin_center(i);
  return c;
}

json moments_json(const TrajectoryAccumulator& acc) {
  const auto m = central_moments(acc.moments);
  auto est = [&](auto f) {
    const auto e = batch_estimate(acc.batches, f);
    return json{{"value", e.value}, {"standard_error", e.standard_error}};
  };
  json j = {{"mean", m.mean}, {"variance", m.m2}, {"m3", m.m3}, {"m4", m.m4},
            {"skewness", skewness(m)}, {"kurtosis", kurtosis(m)}};
  if (acc.batches.size() >= 2) {
    j["variance_batch"] = est([](const CentralMoments& c) { return c.m2; });
    j["skewness_batch"] = est([](const CentralMoments& c) { return skewness(c); });
    j["kurtosis_batch"] = est([](const CentralMoments& c) { return kurtosis(c); });
  }
  return j;
}

RunManifest finish(const RunContext& ctx, const std::string& command, const json& params, std::uint64_t seed,
                   const std::vector<std::string>& files) {
  return write_manifest(ctx.out_dir, command, params, seed, resolve_thread_count(ctx.threads), files);
}

}  // namespace

ChaoticMap MapChoice::map() const {
  if (variant == "chebyshev") return ChaoticMap::chebyshev(order);
  if (variant == "ulam") {
    if (order != 2) throw ArgumentError("--variant ulam requires --map 2");
    return ChaoticMap::ulam();
  }
  throw ArgumentError("unknown variant '" + variant + "' (chebyshev|ulam)");
}

SkewProductParams SimulateOptions::params() const {
  if (lambda && tau) throw ArgumentError("give either lambda or tau, not both");
  SkewProductParams p = tau ? SkewProductParams::with_tau(map.map(), *tau, steps)
                            : SkewProductParams::with_lambda(map.map(), lambda.value_or(0.98), steps);
  p.burn_in = burn_in;
  p.seed = seed;
  p.shards = shards;
  p.reinject_at_fixed_point = reinject;
  p.histogram = {lo, hi, bins};
  if (!(hi > lo)) throw ArgumentError("range must satisfy LO < HI");
  if (bins < 1) throw ArgumentError("bins must be >= 1");
  p.validate();
  return p;
}

SimulateOutcome run_simulate(const SimulateOptions& options, const RunContext& ctx) {
  const SkewProductParams params = options.params();
  if (params.tau > kTruncationWarnTau) {
    err_of(ctx) << "warning: tau = " << params.tau << " exceeds " << kTruncationWarnTau
                << "; the truncated expansion is not reliable here\n";
  }
  SimulateOutcome out{params, simulate(params, resolve_thread_count(ctx.threads)), 0.0, 0.0, {}};
  const auto& p = out.params;
  const CorrectionSet set = correction_set(p.map);
  const Histogram& h = out.result.histogram;
  out.l1_analytic = l1_distance(h, [&](double y) { return density(set, p.tau, y); });
  out.l1_gaussian = l1_distance(h, gaussian_limit);
  if (!ctx.write_files) return out;

  fs::create_directories(ctx.out_dir);
  const auto x = centers(h);
  const auto emp = h.densities();
  std::vector<double> ana(x.size()), diff(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    ana[i] = density(set, p.tau, x[i]);
    diff[i] = emp[i] - ana[i];
  }
  write_csv(ctx.out_dir / "histogram.csv", {{"bin_center", "density"}, {x, emp}});
  write_csv(ctx.out_dir / "analytic.csv", {{"bin_center", "analytic", "difference"}, {x, ana, diff}});
  out.files = {"histogram.csv", "analytic.csv", "summary.json"};

  const auto pred = predicted_moments(p.map);
  json summary = {
      {"map", p.map.name()},
      {"lambda", p.lambda},
      {"tau", p.tau},
      {"samples", out.result.count()},
      {"in_range", h.in_range()},
      {"out_of_range", h.out_of_range()},
      {"reinjections", out.result.reinjections},
      {"moments", moments_json(out.result)},
      {"predicted",
       {{"variance", pred.variance_at(p.tau)},
        {"skewness", pred.skewness_at(p.tau)},
        {"kurtosis", pred.kurtosis_at(p.tau)}}},
      {"l1_analytic", out.l1_analytic},
      {"l1_gaussian", out.l1_gaussian},
  };
  write_json(ctx.out_dir / "summary.json", summary);

  if (options.svg) {
    Plot plot{p.map.name() + ", lambda = " + short_number(p.lambda), "y", "density", false, {}};
    plot.series.push_back({"numerical", "blue", x, emp, true});
    plot.series.push_back({"analytic", "green", x, ana, false});
    plot.series.push_back({"difference", "red", x, diff, false});
    write_svg(ctx.out_dir / "simulate.svg", plot);
    out.files.push_back("simulate.svg");
  }
  finish(ctx, "simulate", json(options), options.seed, out.files);
  return out;
}

ExtractOutcome extract_from_samples(const std::vector<DensitySample>& samples, double tau, const ChaoticMap& map,
                                    double window) {
  ExtractOutcome out;
  out.extracted = extract_correction(samples, tau, map, window);
  const RationalPoly poly = correction_set(map).leading_correction();
  double sq = 0.0;
  for (const auto& s : out.extracted) {
    const double p = poly.evaluate(s.y);
    out.polynomial.push_back(p);
    const double d = s.density - p;
    sq += d * d;
    out.max_abs_deviation = std::max(out.max_abs_deviation, std::abs(d));
  }
  if (out.extracted.empty()) throw ArgumentError("extract: no samples inside the window");
  out.mean_squared_deviation = sq / static_cast<double>(out.extracted.size());
  return out;
}

ExtractOutcome run_extract(const ExtractOptions& options, const RunContext& ctx) {
  const SkewProductParams p = options.sim.params();
  if (!(options.window > 0.0)) throw ArgumentError("window must be > 0");
  std::vector<DensitySample> samples;
  std::string source;
  if (options.analytic) {
    source = "analytic";
    const CorrectionSet set = correction_set(p.map);
    const int k = set.leading_half_power();
    const RationalPoly& poly = set.leading_correction();
    const Histogram h = p.histogram.make();
    for (std::size_t i = 0; i < h.bins(); ++i) {
      const double y = h.bin_center(i);
      samples.push_back({y, gaussian_limit(y) * (1.0 + std::pow(p.tau, 0.5 * k) * poly.evaluate(y))});
    }
  } else if (options.from_file) {
    source = "file";
    const Table t = read_csv(*options.from_file);
    const auto& y = t.column("bin_center");
    const auto& d = t.column("density");
    for (std::size_t i = 0; i < t.rows(); ++i) samples.push_back({y[i], d[i]});
  } else {
    source = "simulation";
    RunContext inner = ctx;
    inner.write_files = false;
    const auto sim = run_simulate(options.sim, inner);
    const Histogram& h = sim.result.histogram;
    const auto dens = h.densities();
    for (std::size_t i = 0; i < h.bins(); ++i) samples.push_back({h.bin_center(i), dens[i]});
  }

  ExtractOutcome out = extract_from_samples(samples, p.tau, p.map, options.window);
  if (!ctx.write_files) return out;

  fs::create_directories(ctx.out_dir);
  std::vector<double> y, e;
  for (const auto& s : out.extracted) {
    y.push_back(s.y);
    e.push_back(s.density);
  }
  write_csv(ctx.out_dir / "extract.csv", {{"y", "extracted", "polynomial"}, {y, e, out.polynomial}});
  const CorrectionSet set = correction_set(p.map);
  json summary = {{"map", p.map.name()},
                  {"lambda", p.lambda},
                  {"tau", p.tau},
                  {"source", source},
                  {"window", options.window},
                  {"exponent", extraction_exponent(p.map)},
                  {"polynomial", set.leading_correction().to_string()},
                  {"points", out.extracted.size()},
                  {"mean_squared_deviation", out.mean_squared_deviation},
                  {"max_abs_deviation", out.max_abs_deviation}};
  write_json(ctx.out_dir / "summary.json", summary);
  out.files = {"extract.csv", "summary.json"};
  if (options.sim.svg) {
    Plot plot{"leading correction, " + p.map.name() + ", lambda = " + short_number(p.lambda), "y",
              "correction", false, {}};
    plot.series.push_back({"extracted", "blue", y, e, true});
    plot.series.push_back({set.leading_correction().to_string(), "green", y, out.polynomial, false});
    write_svg(ctx.out_dir / "extract.svg", plot);
    out.files.push_back("extract.svg");
  }
  finish(ctx, "extract", json(options), options.sim.seed, out.files);
  return out;
}

void CmlOptions::apply_full_scale() {
  size = 1000;
  steps = 100000;
  if (!grid && alphas.empty()) {
    grid = AlphaGrid{0.0, 1.0, 0.005};
    alphas = {0.0, 0.5, 1.0};
  } else if (grid) {
    grid->step = 0.005;
  }
}

CmlOutcome run_cml(const CmlOptions& options, const RunContext& ctx) {
  std::optional<AlphaGrid> grid = options.grid;
  std::vector<double> alphas = options.alphas;
  if (!grid && alphas.empty()) {
    grid = AlphaGrid{0.0, 1.0, 0.05};
    alphas = {0.0, 0.5, 1.0};
  }
  if (options.lambdas.empty()) throw ArgumentError("cml-scan: at least one lambda is required");
  if (!(options.hi > options.lo)) throw ArgumentError("range must satisfy LO < HI");

  LatticeConfig base;
  base.order = MapOrder(options.order);
  base.size = options.size;
  base.steps = options.steps;
  base.burn_in = options.burn_in;
  base.seed = options.seed;
  base.reinject_at_fixed_point = options.reinject;
  base.site_groups = std::min<std::size_t>(20, std::max<std::size_t>(options.size, 1));
  base.histogram.reset();
  for (double a : alphas) {
    LatticeConfig c = base;
    c.alpha = a;
    for (double l : options.lambdas) {
      c.lambda = l;
      c.validate();
    }
  }
  base.validate();

  const unsigned threads = resolve_thread_count(ctx.threads);
  CmlOutcome out;
  if (grid) out.cells = kurtosis_scan(base.order, options.lambdas, *grid, base, threads);

  const std::uint64_t pooled_seed = splitmix64(options.seed ^ 0x706f6f6c6564ULL);
  const std::size_t jobs = options.lambdas.size() * alphas.size();
  std::vector<std::optional<std::pair<KurtosisCell, Histogram>>> pooled(jobs);
  parallel_for(jobs, threads, [&](std::size_t k) {
    LatticeConfig c = base;
    c.lambda = options.lambdas[k / alphas.size()];
    c.alpha = alphas[k % alphas.size()];
    c.seed = derive_seed(pooled_seed, k);
    c.histogram = HistogramSpec{options.lo, options.hi, options.bins};
    const auto r = run_lattice(c);
    const auto m = r.moments();
    pooled[k].emplace(KurtosisCell{c.lambda, c.alpha, kurtosis(m), m.m2, r.pooled.count()}, *r.histogram);
  });
  for (auto& p : pooled) out.pooled.push_back(std::move(*p));
  if (!ctx.write_files) return out;

  fs::create_directories(ctx.out_dir);
  const std::vector<std::string> colors{"blue", "green", "red", "purple", "orange", "black", "teal", "brown"};
  json summary = {{"map", "T" + std::to_string(options.order)}, {"size", options.size}, {"steps", options.steps},
                  {"kurtosis", json::array()}, {"pooled", json::array()}};
  if (grid) {
    Plot plot{"kurtosis, T" + std::to_string(options.order) + ", size " + std::to_string(options.size), "alpha",
              "kappa", false, {}};
    for (std::size_t li = 0; li < options.lambdas.size(); ++li) {
      std::vector<double> a, kappa, m2, n;
      for (const auto& c : out.cells) {
        if (c.lambda != options.lambdas[li]) continue;
        a.push_back(c.alpha);
        kappa.push_back(c.kappa);
        m2.push_back(c.m2);
        n.push_back(static_cast<double>(c.samples));
        summary["kurtosis"].push_back({{"lambda", c.lambda}, {"alpha", c.alpha}, {"kappa", c.kappa}});
      }
      const std::string name = "kurtosis_lambda" + short_number(options.lambdas[li]) + ".csv";
      write_csv(ctx.out_dir / name, {{"alpha", "kappa", "m2", "samples"}, {a, kappa, m2, n}});
      out.files.push_back(name);
      plot.series.push_back({"lambda = " + short_number(options.lambdas[li]), colors[li % colors.size()], a, kappa,
                             false});
    }
    const auto g = grid->values();
    plot.series.push_back({"Gaussian", "#888888", {g.front(), g.back()}, {3.0, 3.0}, false});
    if (options.svg) {
      write_svg(ctx.out_dir / "kurtosis.svg", plot);
      out.files.push_back("kurtosis.svg");
    }
  }
  for (std::size_t li = 0; li < options.lambdas.size(); ++li) {
    if (alphas.empty()) break;
    const std::string lam = short_number(options.lambdas[li]);
    Plot linear{"pooled velocities, T" + std::to_string(options.order) + ", lambda = " + lam, "y", "density",
                false, {}};
    Plot logp = linear;
    logp.log_y = true;
    logp.y_label = "density (log scale)";
    for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
      const auto& [cell, h] = out.pooled[li * alphas.size() + ai];
      const auto x = centers(h);
      const auto d = h.densities();
      const std::string name = "pooled_lambda" + lam + "_alpha" + short_number(cell.alpha) + ".csv";
      write_csv(ctx.out_dir / name, {{"bin_center", "density"}, {x, d}});
      out.files.push_back(name);
      summary["pooled"].push_back({{"lambda", cell.lambda}, {"alpha", cell.alpha}, {"kappa", cell.kappa},
                                   {"variance", cell.m2}, {"out_of_range", h.out_of_range()}});
      Series s{"alpha = " + short_number(cell.alpha), colors[ai % colors.size()], x, d, false};
      linear.series.push_back(s);
      logp.series.push_back(s);
    }
    if (options.svg) {
      write_svg(ctx.out_dir / ("pooled_lambda" + lam + "_linear.svg"), linear);
      write_svg(ctx.out_dir / ("pooled_lambda" + lam + "_log.svg"), logp);
      out.files.push_back("pooled_lambda" + lam + "_linear.svg");
      out.files.push_back("pooled_lambda" + lam + "_log.svg");
    }
  }
  write_json(ctx.out_dir / "summary.json", summary);
  out.files.push_back("summary.json");
  finish(ctx, "cml-scan", json(options), options.seed, out.files);
  return out;
}

VerificationReport run_verify(const VerifyOptions& options, const RunContext& ctx) {
  SolutionOverrides overrides;
  if (options.inject_fault) {
    const EquationId id = parse_equation_id(*options.inject_fault);
    overrides[id] = stated_solution(id) + RationalPoly::monomial(Rational(1), 2);
  }
  const VerificationReport report = run_full_verification(options.lemmas, overrides);
  auto& log = log_of(ctx);
  for (const auto& c : report.checks) {
    log << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.passed && !c.detail.empty()) log << ": " << c.detail;
    log << '\n';
  }
  const auto failures = report.failures();
  log << report.checks.size() - failures.size() << "/" << report.checks.size() << " checks passed\n";
  if (ctx.write_files) {
    fs::create_directories(ctx.out_dir);
    json checks = json::array();
    for (const auto& c : report.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    write_json(ctx.out_dir / "report.json", {{"all_passed", report.all_passed()}, {"checks", checks}});
    finish(ctx, "verify", json(options), options.lemmas.seed, {"report.json"});
  }
  return report;
}

ReplayOutcome replay(const fs::path& manifest_path, const RunContext& ctx) {
  const RunManifest m = read_manifest(manifest_path);
  if (fs::weakly_canonical(ctx.out_dir) == fs::weakly_canonical(manifest_path.parent_path())) {
    throw ArgumentError("replay: output directory must differ from the recorded run");
  }
  RunContext run = ctx;
  run.write_files = true;
  try {
    if (m.command == "simulate") {
      (void)run_simulate(m.parameters.get<SimulateOptions>(), run);
    } else if (m.command == "extract") {
      (void)run_extract(m.parameters.get<ExtractOptions>(), run);
    } else if (m.command == "cml-scan") {
      (void)run_cml(m.parameters.get<CmlOptions>(), run);
    } else if (m.command == "verify") {
      std::ostringstream sink;
      run.log = &sink;
      (void)run_verify(m.parameters.get<VerifyOptions>(), run);
    } else {
      throw ArgumentError("replay: unknown command '" + m.command + "'");
    }
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("replay: malformed parameters: ") + e.what());
  }
  ReplayOutcome out;
  const RunManifest fresh = read_manifest(ctx.out_dir / "manifest.json");
  for (const auto& [file, digest] : m.outputs) {
    const auto it = fresh.outputs.find(file);
    if (it == fresh.outputs.end() || it->second != digest) out.mismatches.push_back(file);
  }
  if (fresh.outputs.size() != m.outputs.size()) out.mismatches.push_back("(output file set differs)");
  out.identical = out.mismatches.empty();
  return out;
}

// ---------------------------------------------------------------------------

void to_json(json& j, const MapChoice& o) { j = {{"order", o.order}, {"variant", o.variant}}; }

void from_json(const json& j, MapChoice& o) {
  j.at("order").get_to(o.order);
  j.at("variant").get_to(o.variant);
}

void to_json(json& j, const SimulateOptions& o) {
  j = {{"map", o.map},         {"lambda", nullptr}, {"tau", nullptr},       {"steps", o.steps},
       {"burn_in", o.burn_in}, {"bins", o.bins},    {"range", {o.lo, o.hi}}, {"seed", o.seed},
       {"shards", o.shards},   {"reinject", o.reinject}, {"svg", o.svg}};
  if (o.lambda) j["lambda"] = *o.lambda;
  if (o.tau) j["tau"] = *o.tau;
}

void from_json(const json& j, SimulateOptions& o) {
  j.at("map").get_to(o.map);
  o.lambda.reset();
  o.tau.reset();
  if (!j.at("lambda").is_null()) o.lambda = j["lambda"].get<double>();
  if (!j.at("tau").is_null()) o.tau = j["tau"].get<double>();
  j.at("steps").get_to(o.steps);
  j.at("burn_in").get_to(o.burn_in);
  j.at("bins").get_to(o.bins);
  o.lo = j.at("range").at(0).get<double>();
  o.hi = j.at("range").at(1).get<double>();
  j.at("seed").get_to(o.seed);
  j.at("shards").get_to(o.shards);
  j.at("reinject").get_to(o.reinject);
  j.at("svg").get_to(o.svg);
}

void to_json(json& j, const ExtractOptions& o) {
  j = {{"simulation", o.sim}, {"window", o.window}, {"analytic", o.analytic}, {"from_file", nullptr}};
  if (o.from_file) j["from_file"] = o.from_file->string();
}

void from_json(const json& j, ExtractOptions& o) {
  j.at("simulation").get_to(o.sim);
  j.at("window").get_to(o.window);
  j.at("analytic").get_to(o.analytic);
  o.from_file.reset();
  if (!j.at("from_file").is_null()) o.from_file = fs::path(j["from_file"].get<std::string>());
}

void to_json(json& j, const CmlOptions& o) {
  j = {{"order", o.order}, {"lambdas", o.lambdas}, {"grid", nullptr},   {"alphas", o.alphas},
       {"size", o.size},   {"steps", o.steps},     {"burn_in", o.burn_in}, {"bins", o.bins},
       {"range", {o.lo, o.hi}}, {"seed", o.seed}, {"reinject", o.reinject}, {"svg", o.svg}};
  if (o.grid) j["grid"] = {o.grid->start, o.grid->end, o.grid->step};
}

void from_json(const json& j, CmlOptions& o) {
  j.at("order").get_to(o.order);
  j.at("lambdas").get_to(o.lambdas);
  o.grid.reset();
  if (!j.at("grid").is_null()) {
    const auto& g = j["grid"];
    o.grid = AlphaGrid{g.at(0).get<double>(), g.at(1).get<double>(), g.at(2).get<double>()};
  }
  j.at("alphas").get_to(o.alphas);
  j.at("size").get_to(o.size);
  j.at("steps").get_to(o.steps);
  j.at("burn_in").get_to(o.burn_in);
  j.at("bins").get_to(o.bins);
  o.lo = j.at("range").at(0).get<double>();
  o.hi = j.at("range").at(1).get<double>();
  j.at("seed").get_to(o.seed);
  j.at("reinject").get_to(o.reinject);
  j.at("svg").get_to(o.svg);
}

void to_json(json& j, const VerifyOptions& o) {
  j = {{"n_min", o.lemmas.n_min}, {"n_max", o.lemmas.n_max}, {"samples", o.lemmas.samples},
       {"seed", o.lemmas.seed}, {"inject_fault", nullptr}};
  if (o.inject_fault) j["inject_fault"] = *o.inject_fault;
}

void from_json(const json& j, VerifyOptions& o) {
  j.at("n_min").get_to(o.lemmas.n_min);
  j.at("n_max").get_to(o.lemmas.n_max);
  j.at("samples").get_to(o.lemmas.samples);
  j.at("seed").get_to(o.lemmas.seed);
  o.inject_fault.reset();
  if (!j.at("inject_fault").is_null()) o.inject_fault = j["inject_fault"].get<std::string>();
}

}  // namespace kickdyn::app
