#include "kickdyn/gauss_poly.hpp"

#include <cmath>

#include "kickdyn/errors.hpp"

namespace kickdyn {

double PolyGauss::value_at(double y) const { return poly_.evaluate(y) * std::exp(-2.0 * y * y); }

PolyGauss differentiate(const PolyGauss& f) {
  const RationalPoly& q = f.poly();
  return PolyGauss(q.derivative() - q.shifted(1) * Rational(4));
}

PolyGauss differentiate(const PolyGauss& f, int times) {
  PolyGauss out = f;
  for (int i = 0; i < times; ++i) out = differentiate(out);
  return out;
}

PolyGauss multiply_by_y(const PolyGauss& f) { return PolyGauss(f.poly().shifted(1)); }

PolyGauss multiply_by_poly(const PolyGauss& f, const RationalPoly& p) {
  return PolyGauss(f.poly() * p);
}

PolyGauss add(const PolyGauss& f, const PolyGauss& g) { return PolyGauss(f.poly() + g.poly()); }

PolyGauss scale(const PolyGauss& f, const Rational& c) { return PolyGauss(f.poly() * c); }

bool is_zero(const PolyGauss& f) { return f.is_zero(); }

PolyGauss stationary_fp_apply(const PolyGauss& f, const Rational& diffusion) {
  if (diffusion <= 0) throw ArgumentError("stationary_fp_apply: diffusion constant must be > 0");
  const PolyGauss drift = differentiate(multiply_by_y(f));
  const PolyGauss diff = scale(differentiate(f, 2), diffusion);
  return add(drift, diff);
}

Rational gaussian_moment_ratio(std::size_t power) {
  if (power % 2 == 1) return Rational(0);
  Rational r(1);
  for (std::size_t k = 1; k <= power / 2; ++k) {
    r *= rational(static_cast<long>(2 * k - 1), 4);
  }
  r.canonicalize();
  return r;
}

Rational integrate_real_line(const PolyGauss& f) {
  const auto& c = f.poly().coeffs();
  Rational total(0);
  for (std::size_t k = 0; k < c.size(); k += 2) total += c[k] * gaussian_moment_ratio(k);
  return total;
}

RationalPoly zero_mean_normalized(const RationalPoly& q) {
  const Rational mass = integrate_real_line(PolyGauss(q));
  return q - RationalPoly::constant(mass);
}

RationalPoly solve_reduced_stationary(const RationalPoly& target) {
  // On monomials: (1/4)(y^k)'' - y (y^k)' = k(k-1)/4 y^{k-2} - k y^k.
  // Matching y^k for k >= 1 gives -k c_k + (k+2)(k+1)/4 c_{k+2} = r_k.
  // The k = 0 row (1/2) c_2 = r_0 is the solvability condition.
  if (integrate_real_line(PolyGauss(target)) != 0) {
    throw ArgumentError("solve_reduced_stationary: source has nonzero total mass");
  }
  const int d = target.degree();
  if (d < 0) return {};
  std::vector<Rational> c(static_cast<std::size_t>(d) + 3, Rational(0));
  for (int k = d; k >= 1; --k) {
    const auto ku = static_cast<std::size_t>(k);
    const Rational upper = rational((k + 2) * (k + 1), 4) * c[ku + 2];
    c[ku] = (upper - target.coeff(ku)) / Rational(k);
  }
  return zero_mean_normalized(RationalPoly(std::move(c)));
}

}  // namespace kickdyn
