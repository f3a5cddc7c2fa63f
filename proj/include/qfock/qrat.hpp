#pragma once

#include <cmath>
#include <cstdio>
#include <complex>
#include <string>
#include <utility>

#include "qfock/error.hpp"
#include "qfock/qpoly.hpp"

namespace qfock {

using num_scalar = std::complex<double>;

/**
 * Exact rational function num/den in q.
 *
 * Always canonical: gcd(num, den) = 1 and den is monic, so two values are
 * equal exactly when their numerators and denominators are equal.
 */
class qrat {
public:
  qrat() : den_(1) {}
  qrat(long c) : num_(c), den_(1) {}
  explicit qrat(mpq_class c) : num_(std::move(c)), den_(1) {}
  qrat(qpoly p) : num_(std::move(p)), den_(1) {}
  qrat(qpoly num, qpoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw error(error_kind::division_by_zero, "rational function with zero denominator");
    canonicalize();
  }

  /// The indeterminate q itself.
  static qrat q() { return qrat(qpoly::monomial(1)); }

  const qpoly& num() const noexcept { return num_; }
  const qpoly& den() const noexcept { return den_; }
  bool is_zero() const noexcept { return num_.is_zero(); }
  bool is_polynomial() const noexcept { return den_.is_one(); }

  qrat operator-() const {
    qrat r = *this;
    r.num_ = -r.num_;
    return r;
  }

  friend qrat operator+(const qrat& a, const qrat& b) { return add(a, b, false); }
  friend qrat operator-(const qrat& a, const qrat& b) { return add(a, b, true); }

  friend qrat operator*(const qrat& a, const qrat& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.is_polynomial() && b.is_polynomial()) return qrat(a.num_ * b.num_);
    // Cross-cancel; the inputs are already reduced so the product is too.
    qpoly g1 = gcd(a.num_, b.den_);
    qpoly g2 = gcd(b.num_, a.den_);
    qpoly n = divmod(a.num_, g1).first * divmod(b.num_, g2).first;
    qpoly d = divmod(a.den_, g2).first * divmod(b.den_, g1).first;
    qrat r;
    r.num_ = std::move(n);
    r.den_ = std::move(d);
    r.make_monic();
    return r;
  }

  friend qrat operator/(const qrat& a, const qrat& b) {
    if (b.is_zero()) throw error(error_kind::division_by_zero, "division by the zero rational function");
    return a * b.inverse();
  }

  qrat inverse() const {
    if (is_zero()) throw error(error_kind::division_by_zero, "inverse of the zero rational function");
    qrat r;
    r.num_ = den_;
    r.den_ = num_;
    r.make_monic();
    return r;
  }

  qrat& operator+=(const qrat& o) { return *this = *this + o; }
  qrat& operator-=(const qrat& o) { return *this = *this - o; }
  qrat& operator*=(const qrat& o) { return *this = *this * o; }
  qrat& operator/=(const qrat& o) { return *this = *this / o; }

  friend bool operator==(const qrat& a, const qrat& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

  /// Value at q = q0; throws error_kind::pole when the denominator vanishes.
  num_scalar eval(double q0) const {
    const double d = den_.eval(q0);
    if (d == 0.0 || std::abs(d) < 1e-12 * den_scale(q0)) {
      if (den_.eval_exact(mpq_class(q0)) == 0)
        throw error(error_kind::pole, "denominator " + den_.to_string() + " vanishes at q=" + std::to_string(q0));
    }
    return {num_.eval(q0) / d, 0.0};
  }

  std::string to_string() const {
    if (is_polynomial()) return num_.to_string();
    auto wrap = [](const qpoly& p) {
      std::string s = p.to_string();
      return p.coeffs().size() > 1 || p.min_power() > 0 ? "(" + s + ")" : s;
    };
    return wrap(num_) + "/" + wrap(den_);
  }

private:
  static qrat add(const qrat& a, const qrat& b, bool subtract) {
    if (b.is_zero()) return a;
    if (a.is_zero()) return subtract ? -b : b;
    if (a.den_ == b.den_) {
      qrat r;
      r.num_ = subtract ? a.num_ - b.num_ : a.num_ + b.num_;
      r.den_ = a.den_;
      if (!r.den_.is_one()) r.canonicalize();
      return r;
    }
    qpoly g = gcd(a.den_, b.den_);
    qpoly da = divmod(a.den_, g).first;
    qpoly db = divmod(b.den_, g).first;
    qrat r;
    r.num_ = subtract ? a.num_ * db - b.num_ * da : a.num_ * db + b.num_ * da;
    r.den_ = a.den_ * db;
    r.canonicalize();
    return r;
  }

  double den_scale(double q0) const {
    double s = 0.0, p = 1.0;
    for (const auto& c : den_.coeffs()) {
      s += std::abs(c.get_d()) * p;
      p *= std::abs(q0);
    }
    return s;
  }

  void canonicalize() {
    if (num_.is_zero()) {
      den_ = qpoly(1);
      return;
    }
    if (!den_.is_constant()) {
      qpoly g = gcd(num_, den_);
      if (g.degree() > 0) {
        num_ = divmod(num_, g).first;
        den_ = divmod(den_, g).first;
      }
    }
    make_monic();
  }

  void make_monic() {
    if (den_.lead() == 1) return;
    mpq_class inv = 1 / den_.lead();
    num_ = num_.scaled(inv);
    den_ = den_.scaled(inv);
  }

  qpoly num_;
  qpoly den_;
};

enum class arith_op { add, sub, mul, div };

/// Exact arithmetic on polynomials or rational functions, always returning a
/// canonical rational function.
inline qrat qpoly_arith(const qrat& a, const qrat& b, arith_op op) {
  switch (op) {
  case arith_op::add: return a + b;
  case arith_op::sub: return a - b;
  case arith_op::mul: return a * b;
  case arith_op::div: return a / b;
  }
  return {};
}

inline num_scalar qrat_eval(const qrat& x, double q0) { return x.eval(q0); }

// Uniform scalar helpers so templates can treat exact and numeric values alike.
inline bool is_zero(const qrat& x) { return x.is_zero(); }
inline bool is_zero(const num_scalar& x) { return x == num_scalar{}; }
inline qrat conjugate(const qrat& x) { return x; }
inline num_scalar conjugate(const num_scalar& x) { return std::conj(x); }
inline std::string scalar_to_string(const qrat& x) { return x.to_string(); }
inline std::string scalar_to_string(const num_scalar& x) {
  char buf[64];
  if (x.imag() == 0.0) std::snprintf(buf, sizeof buf, "%.17g", x.real());
  else std::snprintf(buf, sizeof buf, "%.17g%+.17gi", x.real(), x.imag());
  return buf;
}

} // namespace qfock
