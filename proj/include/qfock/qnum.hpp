#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "qfock/context.hpp"
#include "qfock/error.hpp"
#include "qfock/qrat.hpp"

namespace qfock {

/// [n]_q = 1 + q + ... + q^{n-1}, with [0]_q = 0.
template <q_context C>
typename C::value_type q_int(long n, const C& ctx) {
  if (n < 0) throw error(error_kind::domain, "q-integer of a negative index");
  if constexpr (C::is_exact) {
    return qrat(qpoly(std::vector<mpq_class>(static_cast<std::size_t>(n), mpq_class(1))));
  } else {
    if (ctx.classical()) return {static_cast<double>(n), 0.0};
    double s = 0.0;
    for (long j = 0; j < n; ++j) s = 1.0 + ctx.q0 * s;
    return {s, 0.0};
  }
}

/// [n]_q! = [1]_q [2]_q ... [n]_q, with [0]_q! = 1 (empty product).
template <q_context C>
typename C::value_type q_factorial(long n, const C& ctx) {
  if (n < 0) throw error(error_kind::domain, "q-factorial of a negative index");
  typename C::value_type acc = ctx.from_int(1);
  for (long k = 2; k <= n; ++k) acc = acc * q_int(k, ctx);
  return acc;
}

/// Finite q-Pochhammer symbol (a;q)_n.
template <q_context C>
typename C::value_type pochhammer(const typename C::value_type& a, long n, const C& ctx) {
  if (n < 0) throw error(error_kind::domain, "Pochhammer symbol of a negative length");
  using S = typename C::value_type;
  S acc = ctx.from_int(1);
  S qj = ctx.from_int(1);
  const S q = ctx.q();
  for (long j = 0; j < n; ++j) {
    acc = acc * (ctx.from_int(1) - a * qj);
    qj = qj * q;
  }
  return acc;
}

struct truncated_value {
  num_scalar value;
  /// Number of factors or summands actually used.
  int terms = 0;
};

/**
 * (a;q)_inf at a numeric q0 < 1. Factors are multiplied until the remaining
 * tail satisfies |a| q0^j / (1 - q0) < tail_tol, which bounds the log of the
 * omitted product (and in particular |1 - a q0^j| is within tail_tol of 1).
 */
template <q_context C>
truncated_value pochhammer_infinite(const num_scalar& a, const C& ctx) {
  if constexpr (C::is_exact) {
    throw error(error_kind::unsupported, "infinite Pochhammer product requires numeric mode");
  } else {
    if (ctx.classical()) throw error(error_kind::unsupported, "infinite Pochhammer product is undefined at q=1");
    const long double q = ctx.q0;
    const std::complex<long double> al(a.real(), a.imag());
    const long double mag = std::abs(al);
    std::complex<long double> acc = 1.0L;
    long double qj = 1.0L;
    int j = 0;
    for (; j < 200000; ++j) {
      if (j > 0 && mag * qj / (1.0L - q) < ctx.tail_tol) break;
      acc *= 1.0L - al * qj;
      qj *= q;
    }
    if (j >= 200000) throw error(error_kind::divergence, "infinite Pochhammer product did not settle");
    return {num_scalar(static_cast<double>(acc.real()), static_cast<double>(acc.imag())), j};
  }
}

enum class eq_method { series, product };

/// Radius of the disk where E_q converges; infinity at q = 1.
inline double eq_radius(double q0) { return q0 >= 1.0 ? INFINITY : 1.0 / (1.0 - q0); }

namespace detail {

inline void check_eq_domain(const num_scalar& z, const numeric_context& ctx) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw error(error_kind::domain, "non-finite argument to the q-exponential");
  if (!ctx.classical() && std::abs(z) >= eq_radius(ctx.q0))
    throw error(error_kind::domain, "|z| = " + std::to_string(std::abs(z)) + " outside the disk of radius 1/(1-q) = " +
                                        std::to_string(eq_radius(ctx.q0)));
}

// Sum z^k / [k]_q! in extended precision. The stop rule uses the fact that the
// ratio of consecutive summands |z|/[k+1]_q decreases in k, so once it is below
// one the remaining tail is bounded by a geometric series.
// Same sum in GMP floats. Used when cancellation between summands would eat
// the long double mantissa (large |z| away from the positive axis).
inline truncated_value eq_exp_series_mpf(const num_scalar& z, const numeric_context& ctx, mp_bitcnt_t bits) {
  mpf_class zr(z.real(), bits), zi(z.imag(), bits), q(ctx.q0, bits), qint(0, bits);
  mpf_class sr(1, bits), si(0, bits), tr(1, bits), ti(0, bits), tmp(0, bits);
  const double az = std::abs(z);
  int k = 0;
  for (;; ++k) {
    if (k >= 1000000) throw error(error_kind::divergence, "q-exponential series did not converge");
    qint = 1 + q * qint;
    tmp = (tr * zr - ti * zi) / qint;
    ti = (tr * zi + ti * zr) / qint;
    tr = tmp;
    sr += tr;
    si += ti;
    const double term_abs = std::hypot(tr.get_d(), ti.get_d());
    const double ratio = az / (1.0 + ctx.q0 * qint.get_d());
    if (ratio < 1.0 && term_abs / (1.0 - ratio) <= ctx.tail_tol * std::hypot(sr.get_d(), si.get_d())) break;
    if (term_abs == 0.0) break;
  }
  return {num_scalar(sr.get_d(), si.get_d()), k + 2};
}

inline truncated_value eq_exp_series(const num_scalar& z, const numeric_context& ctx) {
  using ld = long double;
  const std::complex<ld> zl(z.real(), z.imag());
  const ld q = ctx.q0;
  const ld az = std::abs(zl);
  std::complex<ld> sum = 1.0L, term = 1.0L;
  ld abs_sum = 1.0L, qint = 0.0L;
  int k = 0;
  for (;; ++k) {
    if (k >= 1000000) throw error(error_kind::divergence, "q-exponential series did not converge");
    qint = 1.0L + q * qint; // [k+1]_q
    term *= zl / qint;      // z^{k+1}/[k+1]_q!
    sum += term;
    abs_sum += std::abs(term);
    const ld ratio = az / (1.0L + q * qint);
    if (ratio < 1.0L && std::abs(term) / (1.0L - ratio) <= ctx.tail_tol * std::abs(sum)) break;
    if (term == std::complex<ld>(0.0L)) break;
  }
  // rounding grows like eps * sum|t_k|; redo the sum with more bits when that
  // can reach a tenth of the tail tolerance
  const ld cond = abs_sum / std::abs(sum);
  if (cond * std::numeric_limits<ld>::epsilon() * (k + 2) > 0.1L * ctx.tail_tol) {
    const auto extra = static_cast<mp_bitcnt_t>(std::ceil(std::log2(static_cast<double>(cond * (k + 2)))));
    return eq_exp_series_mpf(z, ctx, 64 + extra + 8);
  }
  return {num_scalar(static_cast<double>(sum.real()), static_cast<double>(sum.imag())), k + 2};
}

} // namespace detail

/// E_q(z) with truncation metadata. At q0 = 1 both methods return exp(z).
inline truncated_value eq_exp_detailed(const num_scalar& z, const numeric_context& ctx, eq_method method = eq_method::series) {
  detail::check_eq_domain(z, ctx);
  if (ctx.classical()) return {std::exp(z), 0};
  if (method == eq_method::series) return detail::eq_exp_series(z, ctx);
  truncated_value p = pochhammer_infinite(z * (1.0 - ctx.q0), ctx);
  return {1.0 / p.value, p.terms};
}

inline num_scalar eq_exp(const num_scalar& z, const numeric_context& ctx, eq_method method = eq_method::series) {
  return eq_exp_detailed(z, ctx, method).value;
}

/// |E_q(qz) - (1 - z(1-q)) E_q(z)|, both sides summed as series.
inline double eq_functional_check(const num_scalar& z, const numeric_context& ctx) {
  detail::check_eq_domain(z, ctx);
  const num_scalar lhs = eq_exp(ctx.q0 * z, ctx);
  const num_scalar rhs = (1.0 - z * (1.0 - ctx.q0)) * eq_exp(z, ctx);
  return std::abs(lhs - rhs);
}

/// True when 1 <= [0]_q! <= [1]_q! <= ... <= [n_max]_q! at a numeric q0.
inline bool q_factorials_monotone(long n_max, const numeric_context& ctx) {
  double prev = 1.0;
  for (long n = 0; n <= n_max; ++n) {
    const double cur = q_factorial(n, ctx).real();
    if (cur < prev || cur < 1.0) return false;
    prev = cur;
  }
  return true;
}

} // namespace qfock
