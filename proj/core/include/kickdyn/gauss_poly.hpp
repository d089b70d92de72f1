#pragma once

#include "kickdyn/rational_poly.hpp"

namespace kickdyn {

/// The function q(y) exp(-2y^2) for a rational polynomial q.
///
/// The Gaussian factor is fixed: it is the stationary Fokker-Planck solution
/// with diffusion constant 1/4, so every stationary density and correction
/// term of the kicked-relaxation problem lives in this space. All operations
/// are closed on it and exact.
class PolyGauss {
 public:
  PolyGauss() = default;
  explicit PolyGauss(RationalPoly poly) : poly_(std::move(poly)) {}

  [[nodiscard]] const RationalPoly& poly() const noexcept { return poly_; }
  [[nodiscard]] bool is_zero() const noexcept { return poly_.is_zero(); }

  /// q(y) exp(-2y^2) in double precision.
  [[nodiscard]] double value_at(double y) const;

  friend bool operator==(const PolyGauss&, const PolyGauss&) = default;

 private:
  RationalPoly poly_;
};

/// d/dy [q e^{-2y^2}] = (q' - 4yq) e^{-2y^2}.
[[nodiscard]] PolyGauss differentiate(const PolyGauss& f);
[[nodiscard]] PolyGauss differentiate(const PolyGauss& f, int times);
[[nodiscard]] PolyGauss multiply_by_y(const PolyGauss& f);
[[nodiscard]] PolyGauss multiply_by_poly(const PolyGauss& f, const RationalPoly& p);
[[nodiscard]] PolyGauss add(const PolyGauss& f, const PolyGauss& g);
[[nodiscard]] PolyGauss scale(const PolyGauss& f, const Rational& c);
[[nodiscard]] bool is_zero(const PolyGauss& f);

/// Stationary Fokker-Planck operator d/dy(y f) + D d^2 f/dy^2, built from
/// differentiate and multiply_by_y. Throws ArgumentError for D <= 0.
[[nodiscard]] PolyGauss stationary_fp_apply(const PolyGauss& f, const Rational& diffusion);

/// (2k-1)!!/4^k for even powers 2k, zero for odd powers: the integral of
/// y^power e^{-2y^2} over the real line in units of sqrt(pi/2).
[[nodiscard]] Rational gaussian_moment_ratio(std::size_t power);

/// c such that the integral of f over the real line equals c sqrt(pi/2).
[[nodiscard]] Rational integrate_real_line(const PolyGauss& f);

/// Solves (1/4) q'' - y q' = target for q, the stationary Fokker-Planck
/// equation with D = 1/4 reduced to polynomials. The kernel is the constants;
/// the constant term is chosen so q e^{-2y^2} integrates to zero. Throws
/// ArgumentError when target e^{-2y^2} does not integrate to zero (no
/// polynomial solution exists).
[[nodiscard]] RationalPoly solve_reduced_stationary(const RationalPoly& target);

/// Adds the constant that makes q e^{-2y^2} integrate to zero.
[[nodiscard]] RationalPoly zero_mean_normalized(const RationalPoly& q);

}  // namespace kickdyn
