#include "kickdyn/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kickdyn/errors.hpp"

namespace kickdyn {

namespace {

void require_unit_interval(double x, const char* what) {
  if (!(std::abs(x) <= 1.0)) {
    throw DomainError(std::string(what) + ": argument " + std::to_string(x) +
                      " outside [-1, 1]");
  }
}

// U_n(x): U_0 = 1, U_1 = 2x, same recurrence as T.
double chebyshev_u(int n, double x) {
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace

MapOrder::MapOrder(int n) : n_(n) {
  if (n < 2) {
    throw ArgumentError("map order must be >= 2, got " + std::to_string(n));
  }
}

ChaoticMap::ChaoticMap(MapKind kind, MapOrder order) : kind_(kind), order_(order) {
  if (kind == MapKind::UlamNegT2 && order.value() != 2) {
    throw ArgumentError("Ulam variant requires N = 2");
  }
}

double ChaoticMap::operator()(double x) const { return eval_map(kind_, order_, x); }

std::string ChaoticMap::name() const {
  if (kind_ == MapKind::UlamNegT2) return "ulam";
  return "T" + std::to_string(order_.value());
}

double eval_map(MapKind kind, MapOrder order, double x) {
  require_unit_interval(x, "eval_map");
  return ChaoticMap(kind, order).apply(x);
}

double eval_derivative(MapOrder order, double x) {
  require_unit_interval(x, "eval_derivative");
  const int n = order.value();
  return n * chebyshev_u(n - 1, x);
}

double invariant_density(double x) {
  if (!(std::abs(x) < 1.0)) {
    throw DomainError("invariant_density: diverges at |x| >= 1 (x = " + std::to_string(x) + ")");
  }
  return 1.0 / (std::numbers::pi * std::sqrt(1.0 - x * x));
}

PreimageSet preimages(MapOrder order, double x_prime) {
  require_unit_interval(x_prime, "preimages");
  const int n = order.value();
  const double theta0 = std::acos(x_prime) / n;  // pi u0
  PreimageSet set;
  set.source = x_prime;
  set.points.reserve(static_cast<std::size_t>(n));
  // Twice the index j, so the odd-N half-integer range stays integral.
  // Even N: j = -N/2+1 .. N/2.  Odd N: j = -(N-1)/2 .. (N-1)/2.
  const int twice_first = (n % 2 == 0) ? (-n + 2) : (-n + 1);
  for (int i = 0; i < n; ++i) {
    const int twice_j = twice_first + 2 * i;
    const double j = (n % 2 == 0) ? twice_j / 2 : twice_j / 2.0;
    set.points.push_back(std::cos(theta0 + 2.0 * std::numbers::pi * j / n));
  }
  if (std::abs(x_prime) < 1.0) {
    set.weight = 1.0 / (n * std::numbers::pi * std::sqrt(1.0 - x_prime * x_prime));
  }
  return set;
}

double preimage_sum(MapOrder order, int m, double x_prime) {
  if (m < 1 || m >= order.value()) {
    throw ArgumentError("preimage_sum requires 1 <= M < N (M = " + std::to_string(m) +
                        ", N = " + std::to_string(order.value()) + ")");
  }
  const PreimageSet set = preimages(order, x_prime);
  double sum = 0.0;
  for (double p : set.points) sum += chebyshev_t(m, p);
  return sum;
}

WeightCheck weight_constancy_check(MapOrder order, double x_prime, double rel_tol) {
  if (!(std::abs(x_prime) < 1.0)) {
    throw DomainError("weight_constancy_check: singular weight at x' = " +
                      std::to_string(x_prime));
  }
  const PreimageSet set = preimages(order, x_prime);
  WeightCheck check;
  check.expected_weight = *set.weight;
  for (std::size_t i = 0; i < set.points.size(); ++i) {
    const double p = set.points[i];
    const double slope = std::abs(eval_derivative(order, p));
    if (slope == 0.0 || std::abs(p) >= 1.0) {
      check.excluded.push_back(i);
      continue;
    }
    const double w = invariant_density(p) / slope;
    const double dev = std::abs(w - check.expected_weight) / check.expected_weight;
    check.max_relative_deviation = std::max(check.max_relative_deviation, dev);
  }
  check.consistent = check.max_relative_deviation <= rel_tol &&
                     check.excluded.size() < set.points.size();
  return check;
}

}  // namespace kickdyn
