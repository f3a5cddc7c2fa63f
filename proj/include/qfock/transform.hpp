#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "qfock/context.hpp"
#include "qfock/error.hpp"
#include "qfock/qnum.hpp"
#include "qfock/report.hpp"

namespace qfock {

/// Shortest truncation any q-grid sum is allowed to use.
inline constexpr int min_grid_terms = 64;

struct jackson_result {
  num_scalar value;
  int terms = 0;
  double tail_estimate = 0.0;
};

namespace detail {

inline void require_proper_q(const numeric_context& ctx, const char* what) {
  if (ctx.classical()) throw error(error_kind::unsupported, std::string(what) + " is defined for q < 1 only");
}

} // namespace detail

/**
 * Jackson integral of f over [0, a]: (1-q) a sum_k q^k f(q^k a).
 *
 * Terms are added until the geometric tail estimate |t_k| q/(1-q) drops below
 * tail_tol relative to the partial sum (at least min_grid_terms terms). A
 * summand sequence that stops shrinking raises a divergence error.
 */
template <class F>
jackson_result jackson_integral(F&& f, double a, const numeric_context& ctx) {
  detail::require_proper_q(ctx, "the Jackson integral");
  const double q = ctx.q0;
  if (q == 0.0) return {a * num_scalar(f(a)), 1, 0.0};
  std::complex<long double> partial = 0.0L;
  std::vector<double> mags;
  long double qk = 1.0L;
  constexpr int max_terms = 200000;
  for (int k = 0; k < max_terms; ++k) {
    const num_scalar fk = f(static_cast<double>(qk) * a);
    const std::complex<long double> t = qk * std::complex<long double>(fk.real(), fk.imag());
    partial += t;
    mags.push_back(static_cast<double>(std::abs(t)));
    qk *= q;
    if (k + 1 >= min_grid_terms) {
      const double tail = mags.back() * q / (1.0 - q);
      if (tail <= ctx.tail_tol * static_cast<double>(std::abs(partial)) || (mags.back() == 0.0 && partial == 0.0L)) {
        const double scale = (1.0 - q) * a;
        return {num_scalar(static_cast<double>(partial.real()), static_cast<double>(partial.imag())) * scale, k + 1,
                tail * std::abs(scale)};
      }
      if (k + 1 >= 2 * min_grid_terms && mags.back() > mags[mags.size() - 1 - min_grid_terms])
        throw error(error_kind::divergence, "Jackson integral summands are not decreasing");
    }
  }
  throw error(error_kind::divergence, "Jackson integral did not converge");
}

/**
 * Function sampled on the q-grid x_k = q^{k+1}/(1-q), k = 0..K-1. When a
 * generating rule is kept, values past K are computed on demand.
 */
class grid_function {
public:
  using rule_type = std::function<num_scalar(double)>;

  grid_function(double q0, std::vector<num_scalar> values, rule_type rule = {})
      : q0_(q0), values_(std::move(values)), rule_(std::move(rule)) {}

  /// Default grid length: the point where q^K falls to tail_tol^2, and at
  /// least min_grid_terms.
  static int default_length(const numeric_context& ctx) {
    if (ctx.q0 == 0.0) return min_grid_terms;
    const double k = 2.0 * std::log(ctx.tail_tol) / std::log(ctx.q0);
    return std::max(min_grid_terms, static_cast<int>(std::ceil(k)) + 1);
  }

  static grid_function sample(rule_type rule, const numeric_context& ctx, int length = 0) {
    detail::require_proper_q(ctx, "a q-grid");
    if (length <= 0) length = default_length(ctx);
    std::vector<num_scalar> v;
    v.reserve(static_cast<std::size_t>(length));
    for (int k = 0; k < length; ++k) v.push_back(rule(point(ctx.q0, k)));
    return {ctx.q0, std::move(v), std::move(rule)};
  }

  static double point(double q0, int k) { return std::pow(q0, k + 1) / (1.0 - q0); }

  double q0() const noexcept { return q0_; }
  int size() const noexcept { return static_cast<int>(values_.size()); }
  bool has_rule() const noexcept { return static_cast<bool>(rule_); }
  const std::vector<num_scalar>& values() const noexcept { return values_; }
  double point(int k) const { return point(q0_, k); }

  num_scalar at(int k) const {
    if (k < size()) return values_[static_cast<std::size_t>(k)];
    if (!rule_) throw error(error_kind::divergence, "q-grid exhausted before the sum converged");
    return rule_(point(k));
  }

  double sup() const {
    double s = 0.0;
    for (const auto& v : values_) s = std::max(s, std::abs(v));
    return s;
  }

private:
  double q0_;
  std::vector<num_scalar> values_;
  rule_type rule_;
};

/// E_q^{-1}(x) = (x(1-q); q)_inf sampled on the q-grid.
inline grid_function eq_inverse_grid(const numeric_context& ctx, int length = 0) {
  return grid_function::sample(
      [ctx](double x) { return pochhammer_infinite(num_scalar(x * (1.0 - ctx.q0)), ctx).value; }, ctx, length);
}

/**
 * M_q f(s) = sum_k q^k (q^k/(1-q))^{s-1} f(q^{k+1}/(1-q)) at a positive integer
 * s. The sum stops once q^k sup|f| (q^k/(1-q))^{s-1} < tail_tol |partial|,
 * after at least min_grid_terms summands.
 */
inline jackson_result mq_transform(const grid_function& f, int s, const numeric_context& ctx) {
  detail::require_proper_q(ctx, "the q-integral transform");
  if (s < 1) throw error(error_kind::domain, "the q-integral transform is evaluated at integers s >= 1 only");
  if (f.q0() != ctx.q0) throw error(error_kind::grid_mismatch, "grid function sampled at a different q");
  const long double q = ctx.q0;
  const long double inv = 1.0L / (1.0L - q);
  double sup = f.sup();
  std::complex<long double> partial = 0.0L;
  long double qk = 1.0L;
  for (int k = 0; k < 1000000; ++k) {
    const long double weight = qk * std::pow(qk * inv, static_cast<long double>(s - 1));
    const num_scalar fk = f.at(k);
    sup = std::max(sup, std::abs(fk));
    partial += weight * std::complex<long double>(fk.real(), fk.imag());
    qk *= q;
    const long double next_weight = qk * std::pow(qk * inv, static_cast<long double>(s - 1));
    const double bound = static_cast<double>(next_weight) * sup;
    if (k + 1 >= min_grid_terms && (bound <= ctx.tail_tol * static_cast<double>(std::abs(partial)) || bound == 0.0))
      return {num_scalar(static_cast<double>(partial.real()), static_cast<double>(partial.imag())), k + 1, bound};
  }
  throw error(error_kind::divergence, "q-integral transform did not converge");
}

/// (f1 o f2)(x_m) = sum_{k=0}^m f1(x_k) f2(x_{m-k}) on a shared q-grid.
inline grid_function grid_convolution(const grid_function& f1, const grid_function& f2) {
  if (f1.q0() != f2.q0() || f1.size() != f2.size())
    throw error(error_kind::grid_mismatch, "convolution of functions on different q-grids");
  const int n = f1.size();
  std::vector<num_scalar> out(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) {
    std::complex<long double> acc = 0.0L;
    for (int k = 0; k <= m; ++k) {
      const num_scalar p = f1.values()[static_cast<std::size_t>(k)] * f2.values()[static_cast<std::size_t>(m - k)];
      acc += std::complex<long double>(p.real(), p.imag());
    }
    out[static_cast<std::size_t>(m)] = {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
  }
  return {f1.q0(), std::move(out)};
}

/// (q;q)_inf / (1-q)^n sum_k q^{(n+1)k} / (q;q)_k.
inline double moment_closed_form(int n, const numeric_context& ctx) {
  detail::require_proper_q(ctx, "the moment series");
  const long double q = ctx.q0;
  const long double qq_inf = pochhammer_infinite(num_scalar(ctx.q0), ctx).value.real();
  long double sum = 0.0L, qk_n1 = 1.0L, poch = 1.0L; // poch = (q;q)_k
  long double qk = 1.0L;
  for (int k = 0; k < 1000000; ++k) {
    const long double t = qk_n1 / poch;
    sum += t;
    qk *= q;
    poch *= 1.0L - qk;
    qk_n1 *= std::pow(q, static_cast<long double>(n + 1));
    if (k + 1 >= min_grid_terms && t <= ctx.tail_tol * sum * (1.0L - q)) break;
  }
  return static_cast<double>(qq_inf * sum / std::pow(1.0L - q, static_cast<long double>(n)));
}

/// Radial model of the measure: circles of radius r_k = q^{k/2}/sqrt(1-q)
/// carrying mass (q;q)_inf q^k / (q;q)_k.
struct measure_series {
  double q0 = 0.0;
  std::vector<double> radii;
  std::vector<double> weights;

  double total_mass() const {
    long double s = 0.0L;
    for (double w : weights) s += w;
    return static_cast<double>(s);
  }
};

inline measure_series build_measure_series(const numeric_context& ctx) {
  detail::require_proper_q(ctx, "the measure series");
  measure_series m;
  m.q0 = ctx.q0;
  const long double q = ctx.q0;
  const long double qq_inf = pochhammer_infinite(num_scalar(ctx.q0), ctx).value.real();
  long double qk = 1.0L, poch = 1.0L;
  const int k_max = grid_function::default_length(ctx);
  for (int k = 0; k < k_max; ++k) {
    m.radii.push_back(static_cast<double>(std::sqrt(qk / (1.0L - q))));
    m.weights.push_back(static_cast<double>(qq_inf * qk / poch));
    qk *= q;
    poch *= 1.0L - qk;
  }
  return m;
}

/// <z^n, z^m> under the measure: the angular integral gives delta_{nm}, the
/// radial part sums weight_k r_k^{2n}.
inline num_scalar measure_inner_product(int n, int m, const numeric_context& ctx) {
  if (n < 0 || m < 0) throw error(error_kind::domain, "negative monomial degree");
  const measure_series ms = build_measure_series(ctx);
  if (n != m) return 0.0;
  long double s = 0.0L;
  for (std::size_t k = 0; k < ms.weights.size(); ++k) {
    const long double t = ms.weights[k] * std::pow(static_cast<long double>(ms.radii[k]), 2.0L * n);
    s += t;
    if (static_cast<int>(k) + 1 >= min_grid_terms && t <= ctx.tail_tol * s * 1e-2L) break;
  }
  return static_cast<double>(s);
}

namespace detail {

inline double rel_err(num_scalar got, double expect) { return std::abs(got - expect) / std::abs(expect); }

} // namespace detail

/// M_q(E_q^{-1})(n+1), the closed-form series and the measure moment against [n]_q!.
inline report moment_check(int n, const numeric_context& ctx, double tol = 1e-10) {
  report rep = make_report("MOMENT_IDENTITY", ctx, 0);
  const double expect = q_factorial(n, ctx).real();
  const num_scalar via_transform = mq_transform(eq_inverse_grid(ctx), n + 1, ctx).value;
  const double via_closed = moment_closed_form(n, ctx);
  const num_scalar via_measure = measure_inner_product(n, n, ctx);
  const double e1 = detail::rel_err(via_transform, expect);
  const double e2 = detail::rel_err(num_scalar(via_closed), expect);
  const double e3 = detail::rel_err(via_measure, expect);
  rep.max_defect = std::max({e1, e2, e3});
  rep.holds = std::max({e1, e2, e3}) <= tol;
  rep.details = {{"n", n},
                 {"q_factorial", expect},
                 {"transform", via_transform.real()},
                 {"closed_form", via_closed},
                 {"measure", via_measure.real()},
                 {"relative_errors", {e1, e2, e3}},
                 {"tolerance", tol}};
  return rep;
}

/// (1/(1-q))^n M_q(E_q^{-1} o E_q^{-1})(n+1) = ([n]_q!)^2, with a cross-check
/// through the Pochhammer form of the convolution.
inline report density_moment_check(int n, const numeric_context& ctx, double tol = 1e-8) {
  if (n < 0) throw error(error_kind::domain, "density moment needs n >= 0");
  report rep = make_report("DENSITY_MOMENT", ctx, 0);
  const double fact = q_factorial(n, ctx).real();
  const double expect = fact * fact;
  const auto einv = eq_inverse_grid(ctx);
  const auto conv = grid_convolution(einv, einv);
  const double pre = std::pow(1.0 / (1.0 - ctx.q0), n);
  const num_scalar via_conv = pre * mq_transform(conv, n + 1, ctx).value;

  // sum_m q^m (q^m/(1-q))^n sum_{k<=m} (q^{k+1};q)_inf (q^{m+1-k};q)_inf, scaled by (1/(1-q))^n
  const int len = grid_function::default_length(ctx);
  std::vector<long double> poch(static_cast<std::size_t>(len) + 1);
  for (int j = 1; j <= len; ++j)
    poch[static_cast<std::size_t>(j)] = pochhammer_infinite(num_scalar(std::pow(ctx.q0, j)), ctx).value.real();
  long double cross = 0.0L;
  for (int m = 0; m < len; ++m) {
    long double inner = 0.0L;
    for (int k = 0; k <= m; ++k) inner += poch[static_cast<std::size_t>(k + 1)] * poch[static_cast<std::size_t>(m + 1 - k)];
    const long double qm = std::pow(static_cast<long double>(ctx.q0), m);
    cross += qm * std::pow(qm / (1.0L - ctx.q0), static_cast<long double>(n)) * inner;
  }
  const double via_poch = static_cast<double>(cross) * pre;

  const double e1 = detail::rel_err(via_conv, expect);
  const double e2 = detail::rel_err(num_scalar(via_poch), expect);
  rep.max_defect = std::max(e1, e2);
  rep.holds = std::max(e1, e2) <= tol;
  rep.details = {{"n", n},
                 {"expected", expect},
                 {"convolution", via_conv.real()},
                 {"pochhammer_form", via_poch},
                 {"relative_errors", {e1, e2}},
                 {"tolerance", tol}};
  return rep;
}

/// M_q(f1)(n+1) M_q(f2)(n+1) = (1/(1-q))^n M_q(f1 o f2)(n+1).
inline double convolution_identity_residual(const grid_function& f1, const grid_function& f2, int n,
                                            const numeric_context& ctx) {
  const num_scalar lhs = mq_transform(f1, n + 1, ctx).value * mq_transform(f2, n + 1, ctx).value;
  const num_scalar rhs = std::pow(1.0 / (1.0 - ctx.q0), n) * mq_transform(grid_convolution(f1, f2), n + 1, ctx).value;
  return std::abs(lhs - rhs) / std::max(std::abs(lhs), 1e-300);
}

inline report convolution_check(const numeric_context& ctx, int n_max = 8, double tol = 1e-10) {
  report rep = make_report("CONVOLUTION_IDENTITY", ctx, 0);
  const auto one = grid_function::sample([](double) { return num_scalar(1.0); }, ctx);
  const auto einv = eq_inverse_grid(ctx);
  const auto poly = grid_function::sample([](double x) { return num_scalar(1.0 - 0.5 * x + 0.25 * x * x); }, ctx);
  const std::vector<std::pair<std::string, const grid_function*>> fns{{"one", &one}, {"eq_inverse", &einv}, {"poly", &poly}};
  double worst = 0.0;
  for (const auto& [n1, g1] : fns)
    for (const auto& [n2, g2] : fns)
      for (int n = 0; n <= n_max; ++n) worst = std::max(worst, convolution_identity_residual(*g1, *g2, n, ctx));
  rep.max_defect = worst;
  rep.holds = worst <= tol;
  rep.details = {{"functions", {"one", "eq_inverse", "1-x/2+x^2/4"}}, {"n_max", n_max}, {"tolerance", tol}};
  return rep;
}

/// Jackson integral of x^l over [0, a] against the antiderivative a^{l+1}/[l+1]_q.
inline report jackson_monomial_check(const numeric_context& ctx, int l_max = 8, double tol = 1e-12) {
  report rep = make_report("JACKSON_MONOMIALS", ctx, 0);
  double worst = 0.0;
  for (double a : {1.0, 0.7, 1.5})
    for (int l = 0; l <= l_max; ++l) {
      const num_scalar got = jackson_integral([l](double x) { return num_scalar(std::pow(x, l)); }, a, ctx).value;
      const double expect = std::pow(a, l + 1) / q_int(l + 1, ctx).real();
      worst = std::max(worst, std::abs(got - expect) / std::abs(expect));
    }
  rep.max_defect = worst;
  rep.holds = worst <= tol;
  rep.details = {{"endpoints", {1.0, 0.7, 1.5}}, {"l_max", l_max}, {"tolerance", tol}};
  return rep;
}

inline report measure_mass_check(const numeric_context& ctx, double tol = 1e-12) {
  report rep = make_report("MEASURE_MASS", ctx, 0);
  const auto ms = build_measure_series(ctx);
  const double err = std::abs(ms.total_mass() - 1.0);
  rep.max_defect = err;
  rep.holds = err <= tol;
  rep.details = {{"terms", ms.weights.size()}, {"total_mass", ms.total_mass()}, {"tolerance", tol}};
  return rep;
}

} // namespace qfock
