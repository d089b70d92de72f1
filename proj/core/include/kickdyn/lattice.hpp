#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kickdyn/chebyshev.hpp"
#include "kickdyn/langevin.hpp"
#include "kickdyn/stats.hpp"

namespace kickdyn {

/// Ring of diffusively coupled Chebyshev maps, each site driving its own
/// relaxing velocity.
struct LatticeConfig {
  MapOrder order{2};
  std::size_t size = 1000;
  double alpha = 0.0;
  double lambda = 0.9;
  double tau = 0.0;  // derived from lambda when left at 0
  std::uint64_t steps = 10000;
  std::uint64_t burn_in = 1000;
  std::uint64_t seed = kDefaultSeed;
  // Contiguous site groups with separate moment accumulators (standard errors).
  std::size_t site_groups = 20;
  bool reinject_at_fixed_point = true;
  std::optional<HistogramSpec> histogram = HistogramSpec{};

  [[nodiscard]] double kick() const;
  [[nodiscard]] double effective_tau() const;
  void validate() const;
};

struct LatticeState {
  std::vector<double> x;
  std::vector<double> y;
};

/// x_i ~ U(-1,1) i.i.d. in site order from derive_seed(seed, 0); y = 0.
[[nodiscard]] LatticeState initial_lattice(const LatticeConfig& config);

/// Scratch buffers for lattice_step; reuse across steps to avoid allocation.
struct LatticeWorkspace {
  std::vector<double> mapped;
  std::vector<double> next;
};

/// One synchronous update: y_i <- lambda y_i + sqrt(tau) x_i, then
/// x_i <- (1-alpha) T(x_i) + alpha/2 (T(x_{i-1}) + T(x_{i+1})) with periodic
/// indices. T is applied once per site. Throws SimulationFault on a
/// non-finite site.
void lattice_step(LatticeState& state, const LatticeConfig& config, LatticeWorkspace& work);

struct LatticeRunResult {
  std::optional<Histogram> histogram;
  MomentAccumulator pooled;
  std::vector<MomentAccumulator> groups;  // per contiguous site group
  std::uint64_t reinjections = 0;
  LatticeState final_state;

  [[nodiscard]] CentralMoments moments() const { return central_moments(pooled); }
  [[nodiscard]] double kurtosis() const { return kickdyn::kurtosis(moments()); }
  /// Kurtosis with standard error from site-group spread (independent groups
  /// only for alpha = 0).
  [[nodiscard]] EstimateWithError kurtosis_estimate() const;
};

/// Burn-in, then pools every site velocity of every step.
[[nodiscard]] LatticeRunResult run_lattice(const LatticeConfig& config);
[[nodiscard]] LatticeRunResult run_lattice(const LatticeConfig& config, LatticeState initial);

struct AlphaGrid {
  double start = 0.0;
  double end = 1.0;
  double step = 0.005;
  /// start + i * step for i = 0.. while <= end (+ 1e-9 slack).
  [[nodiscard]] std::vector<double> values() const;
};

struct KurtosisCell {
  double lambda = 0.0;
  double alpha = 0.0;
  double kappa = 0.0;
  double m2 = 0.0;
  std::uint64_t samples = 0;
};

/// Kurtosis of the pooled velocity distribution for each (lambda, alpha),
/// lambda-major. Cell k runs with seed derive_seed(base.seed, k).
[[nodiscard]] std::vector<KurtosisCell> kurtosis_scan(MapOrder order, const std::vector<double>& lambdas,
                                                      const AlphaGrid& grid, const LatticeConfig& base,
                                                      unsigned threads = 1);

}  // namespace kickdyn
