#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace kickdyn {

/// Order N >= 2 of a Chebyshev map T_N. N = 1 (the identity) is rejected.
class MapOrder {
 public:
  explicit MapOrder(int n);
  [[nodiscard]] int value() const noexcept { return n_; }
  friend bool operator==(MapOrder, MapOrder) = default;

 private:
  int n_;
};

enum class MapKind {
  ChebyshevTN,  // x -> T_N(x)
  UlamNegT2,    // x -> 1 - 2x^2 = -T_2(x); only valid with N = 2
};

/// A chaotic driving map of [-1,1]: either T_N or the Ulam map -T_2.
class ChaoticMap {
 public:
  ChaoticMap(MapKind kind, MapOrder order);

  static ChaoticMap chebyshev(int n) { return {MapKind::ChebyshevTN, MapOrder(n)}; }
  static ChaoticMap ulam() { return {MapKind::UlamNegT2, MapOrder(2)}; }

  [[nodiscard]] MapKind kind() const noexcept { return kind_; }
  [[nodiscard]] MapOrder order() const noexcept { return order_; }
  [[nodiscard]] int n() const noexcept { return order_.value(); }
  [[nodiscard]] bool is_order_two() const noexcept { return order_.value() == 2; }

  /// Checked evaluation; throws DomainError for |x| > 1.
  [[nodiscard]] double operator()(double x) const;

  /// Hot-loop evaluation without the domain check. Result clamped to [-1,1].
  [[nodiscard]] double apply(double x) const noexcept;

  [[nodiscard]] std::string name() const;

  friend bool operator==(const ChaoticMap&, const ChaoticMap&) = default;

 private:
  MapKind kind_;
  MapOrder order_;
};

/// T_n(x) by the three-term recurrence T_{k+1} = 2x T_k - T_{k-1}, unclamped.
[[nodiscard]] inline double chebyshev_t(int n, double x) noexcept {
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  const double two_x = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    const double next = two_x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

[[nodiscard]] inline double clamp_unit(double v) noexcept {
  return v > 1.0 ? 1.0 : (v < -1.0 ? -1.0 : v);
}

inline double ChaoticMap::apply(double x) const noexcept {
  const double t = clamp_unit(chebyshev_t(order_.value(), x));
  return kind_ == MapKind::UlamNegT2 ? -t : t;
}

[[nodiscard]] double eval_map(MapKind kind, MapOrder order, double x);

/// T_N'(x) = N U_{N-1}(x), with U evaluated by its own recurrence.
[[nodiscard]] double eval_derivative(MapOrder order, double x);

/// Arcsine density 1/(pi sqrt(1-x^2)), the invariant density of every T_N.
[[nodiscard]] double invariant_density(double x);

struct PreimageSet {
  double source = 0.0;
  std::vector<double> points;
  // h(x)/|T'(x)| shared by all preimages; empty at the singular images +-1.
  std::optional<double> weight;
};

/// All N preimages cos(pi u0 + 2 pi j / N) of x' under T_N, j running over N
/// consecutive (half-)integers centred on zero. Degenerate preimages at the
/// critical values x' = +-1 are kept with multiplicity.
[[nodiscard]] PreimageSet preimages(MapOrder order, double x_prime);

/// Sum of T_M(x) over the preimages of x' under T_N, for 1 <= M < N.
/// Identically zero; returned value is the floating-point residual.
[[nodiscard]] double preimage_sum(MapOrder order, int m, double x_prime);

struct WeightCheck {
  bool consistent = false;
  double expected_weight = 0.0;        // 1/(N pi sqrt(1-x'^2))
  double max_relative_deviation = 0.0;  // over non-excluded preimages
  std::vector<std::size_t> excluded;    // preimages with T'(x) = 0
};

/// Checks that h(x)/|T_N'(x)| takes the same value on every preimage of x'.
/// Throws DomainError at the singular images x' = +-1.
[[nodiscard]] WeightCheck weight_constancy_check(MapOrder order, double x_prime,
                                                 double rel_tol = 1e-9);

}  // namespace kickdyn
