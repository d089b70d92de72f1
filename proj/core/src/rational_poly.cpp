#include "kickdyn/rational_poly.hpp"

#include <algorithm>
#include <sstream>

#include "kickdyn/errors.hpp"

namespace kickdyn {

Rational rational(long num, long den) {
  if (den == 0) throw ArgumentError("rational: zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

RationalPoly::RationalPoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
  for (auto& c : coeffs_) c.canonicalize();
  trim();
}

RationalPoly::RationalPoly(std::initializer_list<Rational> coeffs)
    : RationalPoly(std::vector<Rational>(coeffs)) {}

RationalPoly RationalPoly::constant(const Rational& c) { return RationalPoly({c}); }

RationalPoly RationalPoly::monomial(const Rational& c, std::size_t power) {
  std::vector<Rational> v(power + 1, Rational(0));
  v[power] = c;
  return RationalPoly(std::move(v));
}

void RationalPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational RationalPoly::coeff(std::size_t k) const {
  return k < coeffs_.size() ? coeffs_[k] : Rational(0);
}

bool RationalPoly::is_even() const {
  for (std::size_t k = 1; k < coeffs_.size(); k += 2) {
    if (coeffs_[k] != 0) return false;
  }
  return true;
}

bool RationalPoly::is_odd() const {
  for (std::size_t k = 0; k < coeffs_.size(); k += 2) {
    if (coeffs_[k] != 0) return false;
  }
  return true;
}

RationalPoly RationalPoly::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<Rational> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) {
    d[k - 1] = coeffs_[k] * Rational(static_cast<long>(k));
  }
  return RationalPoly(std::move(d));
}

RationalPoly RationalPoly::shifted(std::size_t powers) const {
  if (is_zero()) return {};
  std::vector<Rational> v(powers, Rational(0));
  v.insert(v.end(), coeffs_.begin(), coeffs_.end());
  return RationalPoly(std::move(v));
}

Rational RationalPoly::evaluate(const Rational& y) const {
  Rational acc(0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * y + *it;
  }
  return acc;
}

double RationalPoly::evaluate(double y) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * y + it->get_d();
  }
  return acc;
}

std::string RationalPoly::to_string(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = coeffs_.size(); i-- > 0;) {
    const Rational& c = coeffs_[i];
    if (c == 0) continue;
    Rational mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    const bool unit = (mag == 1);
    if (!unit || i == 0) os << mag.get_str();
    if (i >= 1) {
      if (!unit) os << "*";
      os << var;
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

RationalPoly& RationalPoly::operator+=(const RationalPoly& rhs) {
  if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), Rational(0));
  for (std::size_t k = 0; k < rhs.coeffs_.size(); ++k) coeffs_[k] += rhs.coeffs_[k];
  trim();
  return *this;
}

RationalPoly& RationalPoly::operator-=(const RationalPoly& rhs) {
  if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), Rational(0));
  for (std::size_t k = 0; k < rhs.coeffs_.size(); ++k) coeffs_[k] -= rhs.coeffs_[k];
  trim();
  return *this;
}

RationalPoly& RationalPoly::operator*=(const Rational& c) {
  for (auto& v : coeffs_) v *= c;
  trim();
  return *this;
}

RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> v(a.coeffs_.size() + b.coeffs_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
      v[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return RationalPoly(std::move(v));
}

}  // namespace kickdyn
