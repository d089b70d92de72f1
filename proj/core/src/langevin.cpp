#include "kickdyn/langevin.hpp"

#include <cmath>
#include <string>

#include "kickdyn/errors.hpp"
#include "kickdyn/parallel.hpp"

namespace kickdyn {

double lambda_from_tau(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ArgumentError("tau must be finite and > 0");
  return std::exp(-tau);
}

double tau_from_lambda(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw ArgumentError("lambda must lie in (0, 1)");
  return -std::log(lambda);
}

SkewProductParams SkewProductParams::with_lambda(ChaoticMap map, double lambda, std::uint64_t steps) {
  SkewProductParams p;
  p.map = map;
  p.lambda = lambda;
  p.tau = tau_from_lambda(lambda);
  p.steps = steps;
  return p;
}

SkewProductParams SkewProductParams::with_tau(ChaoticMap map, double tau, std::uint64_t steps) {
  SkewProductParams p;
  p.map = map;
  p.tau = tau;
  p.lambda = lambda_from_tau(tau);
  p.steps = steps;
  return p;
}

void SkewProductParams::validate() const {
  if (!(lambda > 0.0 && lambda < 1.0)) throw ArgumentError("lambda must lie in (0, 1)");
  if (!(tau > 0.0)) throw ArgumentError("tau must be > 0");
  if (steps < 1) throw ArgumentError("steps must be >= 1");
  if (shards < 1) throw ArgumentError("shards must be >= 1");
  if (batches_per_shard < 1) throw ArgumentError("batches_per_shard must be >= 1");
  if (!std::isfinite(y0)) throw ArgumentError("y0 must be finite");
  if (x0 && !(std::abs(*x0) <= 1.0)) throw ArgumentError("x0 must lie in [-1, 1]");
}

SkewState step(const SkewState& state, const SkewProductParams& params) {
  if (!std::isfinite(state.x) || !std::isfinite(state.y)) {
    throw SimulationFault("step: non-finite state (x = " + std::to_string(state.x) +
                          ", y = " + std::to_string(state.y) + ")");
  }
  SkewState next;
  next.y = params.lambda * state.y + std::sqrt(params.tau) * state.x;
  next.x = params.map(state.x);
  return next;
}

void TrajectoryAccumulator::merge(const TrajectoryAccumulator& other) {
  histogram.merge(other.histogram);
  moments.merge(other.moments);
  batches.insert(batches.end(), other.batches.begin(), other.batches.end());
  reinjections += other.reinjections;
}

std::uint64_t shard_steps(std::uint64_t steps, unsigned shards, unsigned index) {
  return steps / shards + (index < steps % shards ? 1 : 0);
}

namespace {

TrajectoryAccumulator run_shard(const SkewProductParams& params, unsigned index) {
  Rng rng(derive_seed(params.seed, index));
  const ChaoticMap map = params.map;
  const double lambda = params.lambda;
  const double kick = std::sqrt(params.tau);
  const bool reinject = params.reinject_at_fixed_point;

  TrajectoryAccumulator acc{params.histogram.make(), {}, {}, 0};
  const std::uint64_t n = shard_steps(params.steps, params.shards, index);
  const std::uint64_t nb = std::min<std::uint64_t>(params.batches_per_shard, std::max<std::uint64_t>(n, 1));
  acc.batches.resize(nb);

  double x = rng.uniform_open_unit();
  if (index == 0 && params.x0) x = *params.x0;
  double y = params.y0;
  auto advance = [&] {
    y = lambda * y + kick * x;
    x = map.apply(x);
    if (reinject && (x == 1.0 || x == -1.0)) {
      x = rng.uniform_open_unit();
      ++acc.reinjections;
    }
  };

  for (std::uint64_t i = 0; i < params.burn_in; ++i) advance();
  for (std::uint64_t b = 0; b < nb; ++b) {
    const std::uint64_t begin = b * n / nb;
    const std::uint64_t end = (b + 1) * n / nb;
    MomentAccumulator& batch = acc.batches[b];
    for (std::uint64_t i = begin; i < end; ++i) {
      advance();
      if (!std::isfinite(y)) {
        throw SimulationFault("simulate: non-finite velocity in shard " + std::to_string(index) +
                              " at sample " + std::to_string(i));
      }
      acc.histogram.accumulate(y);
      batch.add(y);
    }
    acc.moments.merge(batch);
  }
  return acc;
}

}  // namespace

TrajectoryAccumulator simulate(const SkewProductParams& params, unsigned threads) {
  params.validate();
  std::vector<TrajectoryAccumulator> parts;
  parts.reserve(params.shards);
  for (unsigned s = 0; s < params.shards; ++s) {
    parts.push_back({params.histogram.make(), {}, {}, 0});
  }
  parallel_for(params.shards, threads, [&](std::size_t s) {
    parts[s] = run_shard(params, static_cast<unsigned>(s));
  });
  TrajectoryAccumulator total{params.histogram.make(), {}, {}, 0};
  for (const auto& p : parts) total.merge(p);
  return total;
}

}  // namespace kickdyn
