#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace kickdyn {

using Rational = mpq_class;

/// Exact rational p/q, normalised.
[[nodiscard]] Rational rational(long num, long den = 1);

/// Dense univariate polynomial in y with exact rational coefficients.
/// coeffs()[k] is the coefficient of y^k; trailing zeros are always trimmed,
/// so the zero polynomial has no coefficients.
class RationalPoly {
 public:
  RationalPoly() = default;
  explicit RationalPoly(std::vector<Rational> coeffs);
  RationalPoly(std::initializer_list<Rational> coeffs);

  static RationalPoly constant(const Rational& c);
  static RationalPoly monomial(const Rational& c, std::size_t power);

  [[nodiscard]] const std::vector<Rational>& coeffs() const noexcept { return coeffs_; }
  [[nodiscard]] bool is_zero() const noexcept { return coeffs_.empty(); }
  /// Degree; -1 for the zero polynomial.
  [[nodiscard]] int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  [[nodiscard]] Rational coeff(std::size_t k) const;
  [[nodiscard]] bool is_even() const;
  [[nodiscard]] bool is_odd() const;

  [[nodiscard]] RationalPoly derivative() const;
  [[nodiscard]] RationalPoly shifted(std::size_t powers) const;  // times y^powers

  [[nodiscard]] Rational evaluate(const Rational& y) const;
  [[nodiscard]] double evaluate(double y) const;

  [[nodiscard]] std::string to_string(const std::string& var = "y") const;

  RationalPoly& operator+=(const RationalPoly& rhs);
  RationalPoly& operator-=(const RationalPoly& rhs);
  RationalPoly& operator*=(const Rational& c);

  friend RationalPoly operator+(RationalPoly a, const RationalPoly& b) { return a += b; }
  friend RationalPoly operator-(RationalPoly a, const RationalPoly& b) { return a -= b; }
  friend RationalPoly operator*(RationalPoly a, const Rational& c) { return a *= c; }
  friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b);
  friend RationalPoly operator-(RationalPoly a) { return a *= Rational(-1); }
  friend bool operator==(const RationalPoly& a, const RationalPoly& b) {
    return a.coeffs_ == b.coeffs_;
  }

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

}  // namespace kickdyn
