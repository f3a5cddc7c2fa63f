#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "qfock/context.hpp"
#include "qfock/error.hpp"
#include "qfock/qnum.hpp"
#include "qfock/qrat.hpp"

namespace qfock {

/**
 * First N+1 Taylor coefficients of a power series in z. Coefficients with
 * index <= exact_to() are exact for the represented function; the rest may
 * have been damaged by truncation.
 */
template <class S>
class truncated_series {
public:
  truncated_series() = default;
  explicit truncated_series(int order) : coeffs_(static_cast<std::size_t>(order) + 1), exact_to_(order) {}
  truncated_series(std::vector<S> coeffs, int exact_to) : coeffs_(std::move(coeffs)), exact_to_(exact_to) {
    if (coeffs_.empty()) throw error(error_kind::domain, "truncated series needs at least one coefficient");
    exact_to_ = std::min(exact_to_, order());
  }

  /// z^k at the given order (zero when k exceeds the order).
  static truncated_series monomial(int order, int k, const S& one) {
    truncated_series s(order);
    if (k >= 0 && k <= order) s.coeffs_[static_cast<std::size_t>(k)] = one;
    return s;
  }

  int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  int exact_to() const noexcept { return exact_to_; }
  const std::vector<S>& coeffs() const noexcept { return coeffs_; }
  const S& operator[](int n) const { return coeffs_[static_cast<std::size_t>(n)]; }
  S& operator[](int n) { return coeffs_[static_cast<std::size_t>(n)]; }

  friend bool operator==(const truncated_series& a, const truncated_series& b) {
    return a.coeffs_ == b.coeffs_ && a.exact_to_ == b.exact_to_;
  }

private:
  std::vector<S> coeffs_;
  int exact_to_ = -1;
};

/**
 * Dense (N+1)x(N+1) matrix of an operator on the monomial basis; column m is
 * the image of z^m. degree_shift is how far the operator moves degrees
 * (-1 for backward shifts, +1 for multiplication by z).
 */
template <class S>
class series_operator {
public:
  series_operator() = default;
  series_operator(int order, int degree_shift)
      : order_(order), shift_(degree_shift),
        m_(static_cast<std::size_t>(order + 1) * static_cast<std::size_t>(order + 1)) {}

  static series_operator identity(int order, const S& one) {
    series_operator r(order, 0);
    for (int i = 0; i <= order; ++i) r(i, i) = one;
    return r;
  }

  int order() const noexcept { return order_; }
  int dim() const noexcept { return order_ + 1; }
  int degree_shift() const noexcept { return shift_; }
  void set_degree_shift(int s) noexcept { shift_ = s; }

  S& operator()(int row, int col) { return m_[index(row, col)]; }
  const S& operator()(int row, int col) const { return m_[index(row, col)]; }

  truncated_series<S> apply(const truncated_series<S>& f) const {
    if (f.order() != order_) throw error(error_kind::domain, "operator and series orders differ");
    std::vector<S> out(static_cast<std::size_t>(dim()));
    for (int c = 0; c <= order_; ++c) {
      if (is_zero(f[c])) continue;
      for (int r = 0; r <= order_; ++r)
        if (!is_zero((*this)(r, c))) out[static_cast<std::size_t>(r)] += (*this)(r, c) * f[c];
    }
    return {std::move(out), f.exact_to() - std::max(0, shift_)};
  }

  series_operator& operator+=(const series_operator& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < m_.size(); ++i)
      if (!is_zero(o.m_[i])) m_[i] += o.m_[i];
    return *this;
  }
  series_operator& operator-=(const series_operator& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < m_.size(); ++i)
      if (!is_zero(o.m_[i])) m_[i] -= o.m_[i];
    return *this;
  }
  friend series_operator operator+(series_operator a, const series_operator& b) { return a += b; }
  friend series_operator operator-(series_operator a, const series_operator& b) { return a -= b; }

  friend series_operator operator*(const S& c, series_operator a) {
    for (auto& x : a.m_)
      if (!is_zero(x)) x = c * x;
    return a;
  }

  /// Matrix product (this after that), degree shifts add. Zero entries are skipped.
  friend series_operator operator*(const series_operator& a, const series_operator& b) {
    a.check_compatible(b);
    series_operator r(a.order_, a.shift_ + b.shift_);
    const int n = a.dim();
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        const S& aik = a(i, k);
        if (is_zero(aik)) continue;
        for (int j = 0; j < n; ++j) {
          const S& bkj = b(k, j);
          if (!is_zero(bkj)) r(i, j) += aik * bkj;
        }
      }
    return r;
  }

  /// Equality of the matrix entries (the shift metadata is not compared).
  friend bool operator==(const series_operator& a, const series_operator& b) {
    return a.order_ == b.order_ && a.m_ == b.m_;
  }

private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(order_ + 1) + static_cast<std::size_t>(col);
  }
  void check_compatible(const series_operator& o) const {
    if (o.order_ != order_) throw error(error_kind::domain, "operator orders differ");
  }

  int order_ = 0;
  int shift_ = 0;
  std::vector<S> m_;
};

template <q_context C>
using operator_t = series_operator<typename C::value_type>;
template <q_context C>
using series_t = truncated_series<typename C::value_type>;

template <q_context C>
operator_t<C> op_identity(const C& ctx) {
  return operator_t<C>::identity(ctx.order, ctx.from_int(1));
}

/// Backward shift f -> (f(z) - f(0))/z.
template <q_context C>
operator_t<C> op_R0(const C& ctx) {
  operator_t<C> r(ctx.order, -1);
  for (int n = 1; n <= ctx.order; ++n) r(n - 1, n) = ctx.from_int(1);
  return r;
}

/// Ordinary derivative z^n -> n z^{n-1}.
template <q_context C>
operator_t<C> op_derivative(const C& ctx) {
  operator_t<C> r(ctx.order, -1);
  for (int n = 1; n <= ctx.order; ++n) r(n - 1, n) = ctx.from_int(n);
  return r;
}

/// Jackson derivative z^n -> [n]_q z^{n-1}; the classical derivative at q = 1.
template <q_context C>
operator_t<C> op_Rq(const C& ctx) {
  if (ctx.classical()) return op_derivative(ctx);
  operator_t<C> r(ctx.order, -1);
  for (int n = 1; n <= ctx.order; ++n) r(n - 1, n) = q_int(n, ctx);
  return r;
}

/// Dilation f(z) -> f(qz).
template <q_context C>
operator_t<C> op_Lambda(const C& ctx) {
  operator_t<C> r(ctx.order, 0);
  typename C::value_type qn = ctx.from_int(1);
  const auto q = ctx.q();
  for (int n = 0; n <= ctx.order; ++n) {
    r(n, n) = qn;
    qn = qn * q;
  }
  return r;
}

/// Multiplication by z; the image of z^N falls off the truncation.
template <q_context C>
operator_t<C> op_Mz(const C& ctx) {
  operator_t<C> r(ctx.order, 1);
  for (int n = 0; n < ctx.order; ++n) r(n + 1, n) = ctx.from_int(1);
  return r;
}

/// Jackson antiderivative z^l -> z^{l+1}/[l+1]_q (ordinary integration at q = 1).
template <q_context C>
operator_t<C> op_jackson_antiderivative(const C& ctx) {
  operator_t<C> r(ctx.order, 1);
  for (int l = 0; l < ctx.order; ++l) r(l + 1, l) = ctx.from_int(1) / q_int(l + 1, ctx);
  return r;
}

/// Point evaluation at 0 as a 1x(N+1) row, stored as row 0 of a square matrix.
template <q_context C>
operator_t<C> op_C(const C& ctx) {
  operator_t<C> r(ctx.order, 0);
  r(0, 0) = ctx.from_int(1);
  return r;
}

template <class S>
series_operator<S> op_compose(const series_operator<S>& a, const series_operator<S>& b) {
  return a * b;
}

template <class S>
series_operator<S> op_power(const series_operator<S>& a, int n, const S& one) {
  if (n < 0) throw error(error_kind::domain, "negative operator power");
  series_operator<S> r = series_operator<S>::identity(a.order(), one);
  for (int k = 0; k < n; ++k) r = r * a;
  r.set_degree_shift(a.degree_shift() * n);
  return r;
}

/// Entrywise evaluation of an exact operator at a numeric q0.
inline series_operator<num_scalar> evaluate(const series_operator<qrat>& a, double q0) {
  series_operator<num_scalar> r(a.order(), a.degree_shift());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      if (!a(i, j).is_zero()) r(i, j) = a(i, j).eval(q0);
  return r;
}

inline truncated_series<num_scalar> evaluate(const truncated_series<qrat>& f, double q0) {
  std::vector<num_scalar> v;
  v.reserve(f.coeffs().size());
  for (const auto& c : f.coeffs()) v.push_back(c.eval(q0));
  return {std::move(v), f.exact_to()};
}

/// c_n = C R_q^n f / [n]_q! for n = 0..N; reproduces the Taylor coefficients.
template <q_context C>
std::vector<typename C::value_type> coefficient_recovery(const series_t<C>& f, const C& ctx) {
  if (f.order() != ctx.order) throw error(error_kind::domain, "series order does not match the context");
  const operator_t<C> rq = op_Rq(ctx);
  std::vector<typename C::value_type> out;
  out.reserve(static_cast<std::size_t>(ctx.order) + 1);
  series_t<C> g = f;
  typename C::value_type fact = ctx.from_int(1);
  for (int n = 0; n <= ctx.order; ++n) {
    if (n > 0) {
      g = rq.apply(g);
      fact = fact * (ctx.classical() ? ctx.from_int(n) : q_int(n, ctx));
    }
    out.push_back(g[0] / fact);
  }
  return out;
}

} // namespace qfock
