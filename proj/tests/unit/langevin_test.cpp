#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "kickdyn/errors.hpp"
#include "kickdyn/langevin.hpp"

namespace {

using kickdyn::ChaoticMap;
using kickdyn::SkewProductParams;
using kickdyn::SkewState;

SkewProductParams small(ChaoticMap map, double lambda, std::uint64_t steps) {
  auto p = SkewProductParams::with_lambda(map, lambda, steps);
  p.histogram = {-3.0, 3.0, 200};
  return p;
}

TEST(Step, KickUsesCurrentX) {
  auto p = SkewProductParams::with_tau(ChaoticMap::chebyshev(2), 0.09, 1);
  const SkewState s = kickdyn::step({0.5, 0.0}, p);
  EXPECT_DOUBLE_EQ(s.y, 0.3 * 0.5);
  EXPECT_DOUBLE_EQ(s.x, -0.5);

  const SkewState f = kickdyn::step({1.0, 0.0}, p);
  EXPECT_DOUBLE_EQ(f.x, 1.0);
  EXPECT_DOUBLE_EQ(f.y, 0.3);

  const SkewState g = kickdyn::step({0.5, 2.0}, p);
  EXPECT_DOUBLE_EQ(g.y, p.lambda * 2.0 + 0.3 * 0.5);
}

TEST(Step, Faults) {
  auto p = SkewProductParams::with_tau(ChaoticMap::chebyshev(3), 0.1, 1);
  EXPECT_THROW((void)kickdyn::step({std::numeric_limits<double>::quiet_NaN(), 0.0}, p),
               kickdyn::SimulationFault);
  EXPECT_THROW((void)kickdyn::step({0.1, std::numeric_limits<double>::infinity()}, p),
               kickdyn::SimulationFault);
}

TEST(Step, ZeroLambdaVelocityIsPreviousX) {
  SkewProductParams p;
  p.map = ChaoticMap::chebyshev(2);
  p.lambda = 0.0;
  p.tau = 0.25;
  SkewState s{0.3, 0.0};
  std::vector<double> ys;
  for (int i = 0; i < 200000; ++i) {
    const SkewState n = kickdyn::step(s, p);
    // Velocity carries x_n, position carries T(x_n).
    ASSERT_DOUBLE_EQ(n.y, 0.5 * s.x);
    ASSERT_DOUBLE_EQ(n.x, p.map(s.x));
    ys.push_back(n.y / 0.5);
    s = n;
  }
  // Scaled velocities follow the arcsine law.
  std::sort(ys.begin(), ys.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < ys.size(); i += 97) {
    const double cdf = 0.5 + std::asin(ys[i]) / std::numbers::pi;
    ks = std::max(ks, std::abs(cdf - static_cast<double>(i) / ys.size()));
  }
  EXPECT_LT(ks, 0.01);
}

TEST(Params, Validation) {
  EXPECT_THROW((void)SkewProductParams::with_lambda(ChaoticMap::chebyshev(2), 1.0, 10), kickdyn::ArgumentError);
  EXPECT_THROW((void)SkewProductParams::with_lambda(ChaoticMap::chebyshev(2), 0.0, 10), kickdyn::ArgumentError);
  EXPECT_THROW((void)SkewProductParams::with_tau(ChaoticMap::chebyshev(2), -0.1, 10), kickdyn::ArgumentError);
  auto p = SkewProductParams::with_lambda(ChaoticMap::chebyshev(2), 0.5, 10);
  EXPECT_NEAR(p.tau, std::log(2.0), 1e-15);
  p.shards = 0;
  EXPECT_THROW(p.validate(), kickdyn::ArgumentError);
  p.shards = 1;
  p.x0 = 1.5;
  EXPECT_THROW(p.validate(), kickdyn::ArgumentError);
  p.x0.reset();
  p.steps = 0;
  EXPECT_THROW(p.validate(), kickdyn::ArgumentError);
}

TEST(ShardSteps, SumToTotal) {
  for (std::uint64_t steps : {1ULL, 7ULL, 1000ULL, 1000003ULL}) {
    for (unsigned shards : {1U, 3U, 8U}) {
      std::uint64_t sum = 0;
      for (unsigned i = 0; i < shards; ++i) sum += kickdyn::shard_steps(steps, shards, i);
      EXPECT_EQ(sum, steps);
    }
  }
}

TEST(Simulate, IndependentOfThreadCount) {
  auto p = small(ChaoticMap::chebyshev(3), 0.9, 200000);
  p.shards = 6;
  const auto a = kickdyn::simulate(p, 1);
  const auto b = kickdyn::simulate(p, 4);
  EXPECT_EQ(a.histogram, b.histogram);
  for (int k = 1; k <= 4; ++k) EXPECT_EQ(a.moments.raw_moment(k), b.moments.raw_moment(k));
  EXPECT_EQ(a.count(), 200000U);
  EXPECT_EQ(a.batches.size(), 6U * p.batches_per_shard);
}

TEST(Simulate, SeedChangesResult) {
  auto p = small(ChaoticMap::chebyshev(4), 0.9, 10000);
  const auto a = kickdyn::simulate(p);
  p.seed += 1;
  const auto b = kickdyn::simulate(p);
  EXPECT_NE(a.moments.raw_moment(2), b.moments.raw_moment(2));
}

TEST(Simulate, VarianceMatchesPrediction) {
  auto p = small(ChaoticMap::chebyshev(4), 0.98, 1000000);
  p.batches_per_shard = 32;
  const auto r = kickdyn::simulate(p);
  const auto v = kickdyn::batch_estimate(r.batches, [](const kickdyn::CentralMoments& m) { return m.m2; });
  EXPECT_NEAR(v.value, 0.25 * (1.0 + p.tau), 3.0 * v.standard_error);
  EXPECT_LT(v.standard_error, 0.01);
}

TEST(Simulate, SkewnessSignFollowsMap) {
  auto t2 = small(ChaoticMap::chebyshev(2), 0.9, 1000000);
  t2.batches_per_shard = 32;
  auto ulam = t2;
  ulam.map = ChaoticMap::ulam();
  auto skew = [](const kickdyn::CentralMoments& m) { return kickdyn::skewness(m); };
  const auto a = kickdyn::batch_estimate(kickdyn::simulate(t2).batches, skew);
  const auto b = kickdyn::batch_estimate(kickdyn::simulate(ulam).batches, skew);
  EXPECT_GT(a.value, 3.0 * a.standard_error);
  EXPECT_LT(b.value, -3.0 * b.standard_error);
}

TEST(Simulate, HalvesAgree) {
  auto p = small(ChaoticMap::chebyshev(3), 0.95, 600000);
  p.batches_per_shard = 40;
  const auto r = kickdyn::simulate(p);
  const std::span<const kickdyn::MomentAccumulator> all(r.batches);
  auto var = [](const kickdyn::CentralMoments& m) { return m.m2; };
  const auto first = kickdyn::batch_estimate(all.first(20), var);
  const auto second = kickdyn::batch_estimate(all.last(20), var);
  const double se = std::hypot(first.standard_error, second.standard_error);
  EXPECT_LT(std::abs(first.value - second.value), 4.0 * se);
}

TEST(Simulate, ApproachesGaussianAsLambdaGrows) {
  auto p0 = [](double y) { return std::sqrt(2.0 / std::numbers::pi) * std::exp(-2.0 * y * y); };
  double previous = 10.0;
  for (double lambda : {0.76, 0.9, 0.98}) {
    auto p = small(ChaoticMap::chebyshev(4), lambda, 2000000);
    p.histogram = {-3.0, 3.0, 120};
    const auto r = kickdyn::simulate(p);
    const double l1 = kickdyn::l1_distance(r.histogram, p0);
    EXPECT_LT(l1, previous) << "lambda " << lambda;
    previous = l1;
  }
}

TEST(Simulate, ReinjectionLeavesFixedPoint) {
  // T2(0) = -1 lands on a fixed point of T2 after one more step.
  auto p = small(ChaoticMap::chebyshev(2), 0.9, 1000);
  p.burn_in = 0;
  p.x0 = 0.0;
  const auto guarded = kickdyn::simulate(p);
  EXPECT_GE(guarded.reinjections, 1U);

  p.reinject_at_fixed_point = false;
  const auto stuck = kickdyn::simulate(p);
  EXPECT_EQ(stuck.reinjections, 0U);
  // Trapped orbit: y relaxes to sqrt(tau) / (1 - lambda).
  const double limit = std::sqrt(p.tau) / (1.0 - p.lambda);
  EXPECT_GT(kickdyn::central_moments(stuck.moments).mean, 0.9 * limit);
}

}  // namespace
