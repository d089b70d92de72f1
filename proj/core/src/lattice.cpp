#include "kickdyn/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kickdyn/errors.hpp"
#include "kickdyn/parallel.hpp"
#include "kickdyn/rng.hpp"

namespace kickdyn {

double LatticeConfig::effective_tau() const { return tau > 0.0 ? tau : tau_from_lambda(lambda); }

double LatticeConfig::kick() const { return std::sqrt(effective_tau()); }

void LatticeConfig::validate() const {
  if (size < 3) throw ArgumentError("lattice size must be >= 3");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ArgumentError("alpha must lie in [0, 1]");
  if (!(lambda > 0.0 && lambda < 1.0)) throw ArgumentError("lambda must lie in (0, 1)");
  if (steps < 1) throw ArgumentError("steps must be >= 1");
  if (site_groups < 1 || site_groups > size) throw ArgumentError("site_groups must lie in [1, size]");
}

LatticeState initial_lattice(const LatticeConfig& config) {
  Rng rng(derive_seed(config.seed, 0));
  LatticeState s;
  s.x.resize(config.size);
  for (auto& v : s.x) v = rng.uniform_open_unit();
  s.y.assign(config.size, 0.0);
  return s;
}

void lattice_step(LatticeState& state, const LatticeConfig& config, LatticeWorkspace& work) {
  const std::size_t n = state.x.size();
  if (n < 3 || state.y.size() != n) throw ArgumentError("lattice_step: malformed state");
  const ChaoticMap map(MapKind::ChebyshevTN, config.order);
  const double lambda = config.lambda;
  const double kick = config.kick();
  const double keep = 1.0 - config.alpha;
  const double half = 0.5 * config.alpha;
  work.mapped.resize(n);
  work.next.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = state.x[i];
    state.y[i] = lambda * state.y[i] + kick * xi;
    work.mapped[i] = map.apply(xi);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double left = work.mapped[i == 0 ? n - 1 : i - 1];
    const double right = work.mapped[i + 1 == n ? 0 : i + 1];
    const double v = clamp_unit(keep * work.mapped[i] + half * (left + right));
    if (!std::isfinite(v) || !std::isfinite(state.y[i])) {
      throw SimulationFault("lattice_step: non-finite value at site " + std::to_string(i));
    }
    work.next[i] = v;
  }
  state.x.swap(work.next);
}

EstimateWithError LatticeRunResult::kurtosis_estimate() const {
  return batch_estimate(groups, [](const CentralMoments& m) { return kickdyn::kurtosis(m); });
}

LatticeRunResult run_lattice(const LatticeConfig& config) {
  return run_lattice(config, initial_lattice(config));
}

LatticeRunResult run_lattice(const LatticeConfig& config, LatticeState state) {
  config.validate();
  if (state.x.size() != config.size || state.y.size() != config.size) {
    throw ArgumentError("run_lattice: initial state does not match lattice size");
  }
  Rng reinject_rng(derive_seed(config.seed, 1));
  LatticeWorkspace work;
  LatticeRunResult result;
  if (config.histogram) result.histogram = config.histogram->make();
  result.groups.resize(config.site_groups);

  auto guard = [&] {
    if (!config.reinject_at_fixed_point) return;
    for (auto& v : state.x) {
      if (v == 1.0 || v == -1.0) {
        v = reinject_rng.uniform_open_unit();
        ++result.reinjections;
      }
    }
  };

  for (std::uint64_t t = 0; t < config.burn_in; ++t) {
    lattice_step(state, config, work);
    guard();
  }
  const std::size_t n = config.size;
  for (std::uint64_t t = 0; t < config.steps; ++t) {
    lattice_step(state, config, work);
    guard();
    for (std::size_t i = 0; i < n; ++i) {
      const double y = state.y[i];
      if (result.histogram) result.histogram->accumulate(y);
      result.groups[i * config.site_groups / n].add(y);
    }
  }
  for (const auto& g : result.groups) result.pooled.merge(g);
  result.final_state = std::move(state);
  return result;
}

std::vector<double> AlphaGrid::values() const {
  if (!(step > 0.0)) throw ArgumentError("alpha grid step must be > 0");
  if (!(start >= 0.0 && end <= 1.0 && start <= end)) {
    throw ArgumentError("alpha grid must lie within [0, 1] with start <= end");
  }
  std::vector<double> out;
  for (std::size_t i = 0;; ++i) {
    const double a = start + static_cast<double>(i) * step;
    if (a > end + 1e-9) break;
    out.push_back(std::min(a, 1.0));
  }
  return out;
}

std::vector<KurtosisCell> kurtosis_scan(MapOrder order, const std::vector<double>& lambdas,
                                        const AlphaGrid& grid, const LatticeConfig& base,
                                        unsigned threads) {
  const std::vector<double> alphas = grid.values();
  std::vector<KurtosisCell> cells(lambdas.size() * alphas.size());
  parallel_for(cells.size(), threads, [&](std::size_t k) {
    LatticeConfig cfg = base;
    cfg.order = order;
    cfg.lambda = lambdas[k / alphas.size()];
    cfg.tau = 0.0;
    cfg.alpha = alphas[k % alphas.size()];
    cfg.seed = derive_seed(base.seed, k);
    cfg.histogram.reset();
    const LatticeRunResult r = run_lattice(cfg);
    const CentralMoments m = r.moments();
    cells[k] = {cfg.lambda, cfg.alpha, kickdyn::kurtosis(m), m.m2, r.pooled.count()};
  });
  return cells;
}

}  // namespace kickdyn
