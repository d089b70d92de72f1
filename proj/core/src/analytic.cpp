#include "kickdyn/analytic.hpp"

#include <cmath>
#include <numbers>

#include "kickdyn/errors.hpp"

namespace kickdyn {

namespace {

const Rational kQuarter = rational(1, 4);

// Correction polynomials of the order-two maps (Ulam sign convention).
RationalPoly ulam_first_order() { return {0, 2, 0, rational(-8, 3)}; }
RationalPoly order_two_second_order() {
  return {rational(-37, 48), 0, rational(15, 2), 0, rational(-31, 3), 0, rational(32, 9)};
}
RationalPoly cubic_second_order() { return {rational(-7, 16), 0, rational(3, 2), 0, rational(1, 3)}; }
RationalPoly higher_second_order() { return {rational(-11, 16), 0, rational(7, 2), 0, -1}; }

PolyGauss p0() { return PolyGauss(RationalPoly::constant(1)); }

// [1/2 y d + 1/2 (y^2+1) d^2 + 1/4 y d^3 + c4 d^4 - 1/2] applied to f.
PolyGauss second_order_operator(const PolyGauss& f, const Rational& c4) {
  const PolyGauss d1 = differentiate(f);
  const PolyGauss d2 = differentiate(d1);
  const PolyGauss d3 = differentiate(d2);
  const PolyGauss d4 = differentiate(d3);
  PolyGauss out = scale(multiply_by_y(d1), rational(1, 2));
  out = add(out, multiply_by_poly(d2, RationalPoly{rational(1, 2), 0, rational(1, 2)}));
  out = add(out, scale(multiply_by_y(d3), kQuarter));
  out = add(out, scale(d4, c4));
  out = add(out, scale(f, rational(-1, 2)));
  return out;
}

std::string describe(const PolyGauss& f) { return f.poly().to_string(); }

// Truncated products of sqrt(tau) series, keeping half-powers <= kMaxHalfPower.
constexpr std::size_t kMaxHalfPower = 2;

std::vector<Rational> truncated_mul(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  std::vector<Rational> out(kMaxHalfPower + 1, Rational(0));
  for (std::size_t i = 0; i < a.size() && i <= kMaxHalfPower; ++i) {
    for (std::size_t j = 0; j < b.size() && i + j <= kMaxHalfPower; ++j) {
      out[i + j] += a[i] * b[j];
    }
  }
  return out;
}

// (1 + u)^{-p} truncated, for u with zero constant term; p given by its
// first two binomial coefficients c1 = -p, c2 = p(p+1)/2.
std::vector<Rational> inverse_power(const std::vector<Rational>& u, const Rational& c1,
                                    const Rational& c2) {
  std::vector<Rational> out(kMaxHalfPower + 1, Rational(0));
  out[0] = 1;
  const auto u2 = truncated_mul(u, u);
  for (std::size_t k = 0; k <= kMaxHalfPower; ++k) out[k] += c1 * u[k] + c2 * u2[k];
  return out;
}

Rational exact_sqrt(const Rational& r) {
  mpz_class num = r.get_num();
  mpz_class den = r.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) {
    throw ArgumentError("exact_sqrt: " + r.get_str() + " is not a rational square");
  }
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  Rational out(rn, rd);
  out.canonicalize();
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

const RationalPoly* CorrectionSet::term(int half_power) const {
  for (const auto& t : terms) {
    if (t.half_power == half_power) return &t.poly;
  }
  return nullptr;
}

int CorrectionSet::leading_half_power() const { return map.is_order_two() ? 1 : 2; }

const RationalPoly& CorrectionSet::leading_correction() const {
  return *term(leading_half_power());
}

CorrectionSet correction_set(const ChaoticMap& map) {
  CorrectionSet set{map, {{0, RationalPoly::constant(1)}}, 0};
  if (map.is_order_two()) {
    RationalPoly first = ulam_first_order();
    if (map.kind() == MapKind::ChebyshevTN) first = -first;
    set.terms.push_back({1, std::move(first)});
    set.terms.push_back({2, order_two_second_order()});
    set.error_order = 3;
  } else if (map.n() == 3) {
    set.terms.push_back({2, cubic_second_order()});
    set.error_order = 4;
  } else {
    set.terms.push_back({2, higher_second_order()});
    set.error_order = 3;
  }
  return set;
}

CorrectionSet correction_set(MapKind kind, int n) { return correction_set(ChaoticMap(kind, MapOrder(n))); }

double density(const CorrectionSet& set, double tau, double y) {
  const double s = std::sqrt(tau);
  double bracket = 0.0;
  for (const auto& t : set.terms) bracket += std::pow(s, t.half_power) * t.poly.evaluate(y);
  return std::sqrt(2.0 / std::numbers::pi) * bracket * std::exp(-2.0 * y * y);
}

double density(const ChaoticMap& map, double tau, double y) {
  return density(correction_set(map), tau, y);
}

// ---------------------------------------------------------------------------

std::string to_string(EquationId id) {
  switch (id) {
    case EquationId::AAlpha: return "A-alpha";
    case EquationId::ABeta: return "A-beta";
    case EquationId::N4Beta: return "N4-beta";
    case EquationId::N3Beta: return "N3-beta";
  }
  return "unknown";
}

EquationId parse_equation_id(std::string_view text) {
  for (EquationId id : kAllEquations) {
    if (text == to_string(id)) return id;
  }
  throw ArgumentError("unknown equation id '" + std::string(text) + "'");
}

InhomogeneousSource source_polynomial(EquationId id) {
  switch (id) {
    case EquationId::AAlpha:
      return {id, PolyGauss({0, -6, 0, 8}), SourceSide::Equated, Rational(1)};
    case EquationId::ABeta:
      return {id, PolyGauss({rational(-15, 4), 0, 46, 0, -68, 0, rational(64, 3)}),
              SourceSide::Added, Rational(1)};
    case EquationId::N4Beta:
      return {id, PolyGauss({rational(-7, 4), 0, 10, 0, -4}), SourceSide::Added, Rational(1)};
    case EquationId::N3Beta:
      return {id, PolyGauss({rational(3, 4), 0, -2, 0, rational(-4, 3)}), SourceSide::Equated,
              Rational(1)};
  }
  throw ArgumentError("unknown equation id");
}

InhomogeneousSource source_polynomial(std::string_view id) {
  return source_polynomial(parse_equation_id(id));
}

PolyGauss assemble_source(EquationId id) {
  switch (id) {
    case EquationId::AAlpha:
      return scale(differentiate(p0(), 3), rational(-1, 8));
    case EquationId::ABeta: {
      const PolyGauss alpha(stated_solution(EquationId::AAlpha));
      return add(second_order_operator(p0(), rational(5, 64)),
                 scale(differentiate(alpha, 3), rational(1, 8)));
    }
    case EquationId::N4Beta:
      return second_order_operator(p0(), rational(1, 64));
    case EquationId::N3Beta: {
      // d/dy int x c dx with c = h(x)gamma0 + x h(x) gamma1, <x^2> = 1/2 and
      // gamma1 = -(1/24) p0''', minus the N >= 4 operator contribution.
      const Rational second_moment = rational(1, 2);
      const PolyGauss gamma1 = scale(differentiate(p0(), 3), rational(-1, 24));
      const PolyGauss flux_derivative = differentiate(scale(gamma1, second_moment));
      return add(flux_derivative, scale(second_order_operator(p0(), rational(1, 64)), Rational(-1)));
    }
  }
  throw ArgumentError("unknown equation id");
}

RationalPoly stated_solution(EquationId id) {
  switch (id) {
    case EquationId::AAlpha: return ulam_first_order();
    case EquationId::ABeta: return order_two_second_order();
    case EquationId::N4Beta: return higher_second_order();
    case EquationId::N3Beta: return cubic_second_order();
  }
  throw ArgumentError("unknown equation id");
}

PolyGauss residual(const PolyGauss& solution, const InhomogeneousSource& source) {
  const PolyGauss applied = stationary_fp_apply(solution, kQuarter);
  const Rational sign = source.side == SourceSide::Added ? Rational(1) : Rational(-1);
  return add(applied, scale(source.source, sign * source.prefactor));
}

bool VerificationReport::all_passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

std::vector<std::string> VerificationReport::failures() const {
  std::vector<std::string> out;
  for (const auto& c : checks) {
    if (!c.passed) out.push_back(c.name);
  }
  return out;
}

VerificationReport verify_residuals(const SolutionOverrides& overrides) {
  VerificationReport report;
  for (EquationId id : kAllEquations) {
    const std::string tag = to_string(id);
    const auto it = overrides.find(id);
    const RationalPoly solution = it != overrides.end() ? it->second : stated_solution(id);
    const InhomogeneousSource src = source_polynomial(id);

    const PolyGauss res = residual(PolyGauss(solution), src);
    report.checks.push_back({"residual " + tag, is_zero(res),
                             is_zero(res) ? "L f " + std::string(src.side == SourceSide::Added ? "+" : "-") +
                                                " s = 0 exactly"
                                          : "residual " + describe(res)});

    const PolyGauss assembled = assemble_source(id);
    const bool same = assembled == src.source;
    report.checks.push_back({"source-assembly " + tag, same,
                             same ? "operator expression reproduces " + describe(src.source)
                                  : "assembled " + describe(assembled)});

    const Rational mass = integrate_real_line(PolyGauss(solution));
    report.checks.push_back({"normalization " + tag, mass == 0,
                             "integral = " + mass.get_str() + " sqrt(pi/2)"});

    const RationalPoly target =
        src.side == SourceSide::Added ? -src.source.poly() : src.source.poly();
    const RationalPoly solved = solve_reduced_stationary(target);
    report.checks.push_back({"solver " + tag, solved == solution,
                             "zero-mass polynomial solution " + solved.to_string()});
  }

  const std::array<ChaoticMap, 4> maps = {ChaoticMap::ulam(), ChaoticMap::chebyshev(2),
                                          ChaoticMap::chebyshev(3), ChaoticMap::chebyshev(4)};
  for (const auto& map : maps) {
    const CorrectionSet set = correction_set(map);
    Rational total(0);
    bool ok = set.terms.front().half_power == 0 && set.terms.front().poly == RationalPoly{1};
    for (const auto& t : set.terms) {
      const Rational mass = integrate_real_line(PolyGauss(t.poly));
      total += mass;
      if (t.half_power > 0 && mass != 0) ok = false;
    }
    ok = ok && total == 1;
    report.checks.push_back({"density-normalization " + map.name(), ok,
                             "integral of p(y) = " + total.get_str() + " at every tau"});
  }
  return report;
}

// ---------------------------------------------------------------------------

Rational TauSeries::coeff(std::size_t half_power) const {
  return half_power < coeffs.size() ? coeffs[half_power] : Rational(0);
}

double TauSeries::at(double tau) const {
  const double s = std::sqrt(tau);
  double acc = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * s + coeffs[k].get_d();
  return acc;
}

double MomentPrediction::skewness_at(double tau) const {
  return third_central.at(tau) / std::pow(variance.at(tau), 1.5);
}

double MomentPrediction::kurtosis_at(double tau) const {
  const double v = variance.at(tau);
  return fourth_central.at(tau) / (v * v);
}

MomentPrediction predicted_moments(const ChaoticMap& map) {
  const CorrectionSet set = correction_set(map);
  std::array<std::vector<Rational>, 5> raw;
  for (std::size_t k = 1; k <= 4; ++k) {
    raw[k].assign(kMaxHalfPower + 1, Rational(0));
    for (const auto& t : set.terms) {
      const auto h = static_cast<std::size_t>(t.half_power);
      raw[k][h] += integrate_real_line(PolyGauss(t.poly.shifted(k)));
    }
  }
  const auto& m1 = raw[1];
  const auto m1sq = truncated_mul(m1, m1);
  const auto m1cu = truncated_mul(m1sq, m1);
  const auto m1qu = truncated_mul(m1cu, m1);
  std::vector<Rational> c2(kMaxHalfPower + 1), c3(kMaxHalfPower + 1), c4(kMaxHalfPower + 1);
  const auto m1m2 = truncated_mul(m1, raw[2]);
  const auto m1m3 = truncated_mul(m1, raw[3]);
  const auto m1sqm2 = truncated_mul(m1sq, raw[2]);
  for (std::size_t k = 0; k <= kMaxHalfPower; ++k) {
    c2[k] = raw[2][k] - m1sq[k];
    c3[k] = raw[3][k] - 3 * m1m2[k] + 2 * m1cu[k];
    c4[k] = raw[4][k] - 4 * m1m3[k] + 6 * m1sqm2[k] - 3 * m1qu[k];
  }

  MomentPrediction p{map, {m1}, {c2}, {c3}, {c4}, {}, {}};

  // Normalised moments: write m2 = a0 (1 + u).
  const Rational a0 = c2[0];
  std::vector<Rational> u(kMaxHalfPower + 1, Rational(0));
  for (std::size_t k = 1; k <= kMaxHalfPower; ++k) u[k] = c2[k] / a0;
  const Rational sqrt_a0 = exact_sqrt(a0);
  const auto inv_three_halves = inverse_power(u, rational(-3, 2), rational(15, 8));
  const auto inv_square = inverse_power(u, Rational(-2), Rational(3));
  const auto skew = truncated_mul(c3, inv_three_halves);
  const auto kurt = truncated_mul(c4, inv_square);
  for (std::size_t k = 0; k <= kMaxHalfPower; ++k) {
    p.skewness_expansion[k] = skew[k] / (a0 * sqrt_a0);
    p.kurtosis_expansion[k] = kurt[k] / (a0 * a0);
    p.skewness_expansion[k].canonicalize();
    p.kurtosis_expansion[k].canonicalize();
  }
  return p;
}

// ---------------------------------------------------------------------------

double extraction_exponent(const ChaoticMap& map) { return map.is_order_two() ? 0.5 : 1.0; }

std::vector<DensitySample> extract_correction(std::span<const DensitySample> samples, double tau,
                                              const ChaoticMap& map, double window) {
  if (!(tau > 0.0)) throw ArgumentError("extract_correction: tau must be > 0");
  if (!(window > 0.0)) throw ArgumentError("extract_correction: window must be > 0");
  const double scale_factor = std::pow(tau, -extraction_exponent(map));
  const double root = std::sqrt(std::numbers::pi / 2.0);
  std::vector<DensitySample> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    if (std::abs(s.y) > window) continue;
    const double ratio = root * s.density * std::exp(2.0 * s.y * s.y);
    out.push_back({s.y, (ratio - 1.0) * scale_factor});
  }
  return out;
}

}  // namespace kickdyn
