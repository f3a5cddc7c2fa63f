#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qfock/error.hpp"

namespace qfock {

/**
 * Univariate polynomial in the indeterminate q with exact rational
 * coefficients. Index j of coeffs() holds the coefficient of q^j.
 *
 * The representation is canonical: trailing zeros are stripped, so the zero
 * polynomial has an empty coefficient list and equality is coefficient-wise.
 */
class qpoly {
public:
  using coeff_type = mpq_class;

  qpoly() = default;
  qpoly(long c) : qpoly(mpq_class(c)) {}
  explicit qpoly(mpq_class c) {
    if (c != 0) coeffs_.push_back(std::move(c));
  }
  explicit qpoly(std::vector<mpq_class> coeffs) : coeffs_(std::move(coeffs)) {
    trim();
  }

  static qpoly monomial(std::size_t power, const mpq_class& c = 1) {
    if (c == 0) return {};
    std::vector<mpq_class> v(power + 1, mpq_class(0));
    v[power] = c;
    return qpoly(std::move(v));
  }

  const std::vector<mpq_class>& coeffs() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_constant() const noexcept { return coeffs_.size() <= 1; }
  bool is_one() const noexcept { return coeffs_.size() == 1 && coeffs_[0] == 1; }

  mpq_class coeff(std::size_t j) const {
    return j < coeffs_.size() ? coeffs_[j] : mpq_class(0);
  }
  const mpq_class& lead() const { return coeffs_.back(); }

  /// Index of the lowest nonzero coefficient; 0 for the zero polynomial.
  std::size_t min_power() const noexcept {
    for (std::size_t j = 0; j < coeffs_.size(); ++j)
      if (coeffs_[j] != 0) return j;
    return 0;
  }

  qpoly operator-() const {
    qpoly r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
  }

  qpoly& operator+=(const qpoly& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), mpq_class(0));
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j) coeffs_[j] += o.coeffs_[j];
    trim();
    return *this;
  }
  qpoly& operator-=(const qpoly& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), mpq_class(0));
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j) coeffs_[j] -= o.coeffs_[j];
    trim();
    return *this;
  }
  qpoly& operator*=(const qpoly& o) {
    *this = *this * o;
    return *this;
  }

  friend qpoly operator+(qpoly a, const qpoly& b) { return a += b; }
  friend qpoly operator-(qpoly a, const qpoly& b) { return a -= b; }
  friend qpoly operator*(const qpoly& a, const qpoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<mpq_class> r(a.coeffs_.size() + b.coeffs_.size() - 1, mpq_class(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (a.coeffs_[i] == 0) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) r[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return qpoly(std::move(r));
  }

  qpoly scaled(const mpq_class& c) const {
    if (c == 0) return {};
    qpoly r = *this;
    for (auto& x : r.coeffs_) x *= c;
    return r;
  }

  /// Long division; throws on a zero divisor.
  friend std::pair<qpoly, qpoly> divmod(const qpoly& a, const qpoly& b) {
    if (b.is_zero()) throw error(error_kind::division_by_zero, "polynomial division by zero");
    if (a.degree() < b.degree()) return {qpoly{}, a};
    std::vector<mpq_class> rem = a.coeffs_;
    std::vector<mpq_class> quot(a.coeffs_.size() - b.coeffs_.size() + 1, mpq_class(0));
    const mpq_class& lb = b.lead();
    const std::size_t db = b.coeffs_.size() - 1;
    for (std::size_t k = quot.size(); k-- > 0;) {
      const mpq_class& top = rem[k + db];
      if (top == 0) continue;
      mpq_class f = top / lb;
      for (std::size_t j = 0; j <= db; ++j) rem[k + j] -= f * b.coeffs_[j];
      quot[k] = std::move(f);
    }
    return {qpoly(std::move(quot)), qpoly(std::move(rem))};
  }

  qpoly monic() const {
    if (is_zero() || lead() == 1) return *this;
    return scaled(1 / lead());
  }

  /// Monic greatest common divisor; gcd(0, 0) = 0.
  friend qpoly gcd(qpoly a, qpoly b) {
    while (!b.is_zero()) {
      qpoly r = divmod(a, b).second;
      a = std::move(b);
      b = r.monic();
    }
    return a.monic();
  }

  friend bool operator==(const qpoly& a, const qpoly& b) { return a.coeffs_ == b.coeffs_; }

  /// Horner evaluation in double precision.
  double eval(double q0) const {
    double acc = 0.0;
    for (std::size_t j = coeffs_.size(); j-- > 0;) acc = acc * q0 + coeffs_[j].get_d();
    return acc;
  }

  mpq_class eval_exact(const mpq_class& q0) const {
    mpq_class acc = 0;
    for (std::size_t j = coeffs_.size(); j-- > 0;) acc = acc * q0 + coeffs_[j];
    return acc;
  }

  /// Ascending monomials, e.g. "1+2q+q^2", "3q^3-q^5", "(1/2)q".
  std::string to_string(char var = 'q') const {
    if (is_zero()) return "0";
    std::string out;
    bool first = true;
    for (std::size_t j = 0; j < coeffs_.size(); ++j) {
      const mpq_class& c = coeffs_[j];
      if (c == 0) continue;
      const bool neg = c < 0;
      mpq_class mag = neg ? mpq_class(-c) : c;
      if (neg) out += "-";
      else if (!first) out += "+";
      first = false;
      const bool unit = mag == 1;
      if (j == 0 || !unit) {
        if (mag.get_den() != 1 && j != 0) out += "(" + mag.get_str() + ")";
        else out += mag.get_str();
      }
      if (j >= 1) {
        out += var;
        if (j >= 2) out += "^" + std::to_string(j);
      }
    }
    return out;
  }

private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }

  std::vector<mpq_class> coeffs_;
};

} // namespace qfock
