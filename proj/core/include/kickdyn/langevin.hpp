#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kickdyn/chebyshev.hpp"
#include "kickdyn/rng.hpp"
#include "kickdyn/stats.hpp"

namespace kickdyn {

struct HistogramSpec {
  double lo = -3.0;
  double hi = 3.0;
  std::size_t bins = 1000;
  [[nodiscard]] Histogram make() const { return Histogram(lo, hi, bins); }
};

/// Configuration of the skew product y' = lambda y + sqrt(tau) x, x' = T(x),
/// with gamma = 1 so lambda = exp(-tau).
struct SkewProductParams {
  ChaoticMap map = ChaoticMap::chebyshev(2);
  double lambda = 0.0;
  double tau = 0.0;
  std::uint64_t steps = 1;        // accepted (post burn-in) samples
  std::uint64_t burn_in = 10000;  // discarded leading steps per shard
  std::uint64_t seed = kDefaultSeed;
  double y0 = 0.0;
  // Overrides the random x0 of shard 0 (other shards still draw theirs).
  std::optional<double> x0;
  // Independent sub-trajectories, each with its own x0 ~ U(-1,1) and burn-in.
  // The result depends on the shard count but never on the thread count.
  unsigned shards = 1;
  // Moment batches per shard, for standard errors.
  unsigned batches_per_shard = 16;
  // Floating-point orbits occasionally land exactly on the fixed point +-1 of
  // T_N (from within ~1e-8 of a critical point) and would stay there; such an
  // x is redrawn from the shard's generator and counted.
  bool reinject_at_fixed_point = true;
  HistogramSpec histogram;

  /// Sets lambda and derives tau = -ln(lambda). Throws for lambda outside (0,1).
  static SkewProductParams with_lambda(ChaoticMap map, double lambda, std::uint64_t steps);
  /// Sets tau and derives lambda = exp(-tau). Throws for tau <= 0.
  static SkewProductParams with_tau(ChaoticMap map, double tau, std::uint64_t steps);

  void validate() const;
};

[[nodiscard]] double lambda_from_tau(double tau);
[[nodiscard]] double tau_from_lambda(double lambda);

struct SkewState {
  double x = 0.0;
  double y = 0.0;
};

/// One iteration: the kick uses the current x, then x advances.
/// Throws SimulationFault on a non-finite state, DomainError for |x| > 1.
[[nodiscard]] SkewState step(const SkewState& state, const SkewProductParams& params);

struct TrajectoryAccumulator {
  Histogram histogram;
  MomentAccumulator moments;
  std::vector<MomentAccumulator> batches;  // shard-major, consecutive blocks
  std::uint64_t reinjections = 0;

  [[nodiscard]] std::uint64_t count() const noexcept { return moments.count(); }
  void merge(const TrajectoryAccumulator& other);
};

/// Runs all shards (in parallel when threads > 1) and merges them in shard
/// order. Bitwise identical for identical params regardless of `threads`.
[[nodiscard]] TrajectoryAccumulator simulate(const SkewProductParams& params, unsigned threads = 1);

/// Samples allotted to shard `index` (the first steps % shards get one extra).
[[nodiscard]] std::uint64_t shard_steps(std::uint64_t steps, unsigned shards, unsigned index);

}  // namespace kickdyn
