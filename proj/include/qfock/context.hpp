#pragma once

#include <cmath>
#include <concepts>
#include <string>

#include "qfock/error.hpp"
#include "qfock/qrat.hpp"

namespace qfock {

/// Symbolic mode: every scalar is an exact rational function of q.
struct exact_context {
  using value_type = qrat;
  static constexpr bool is_exact = true;

  int order = 32;
  double tail_tol = 1e-14;

  exact_context() = default;
  explicit exact_context(int n) : order(n) {
    if (n < 0) throw error(error_kind::domain, "series order must be nonnegative");
  }

  value_type q() const { return qrat::q(); }
  value_type from_int(long n) const { return qrat(n); }
  bool classical() const noexcept { return false; }
  bool hardy() const noexcept { return false; }
  std::string mode_name() const { return "exact"; }
};

/// Numeric mode at a fixed q0 in [0,1]. q0 = 1 selects the classical branches.
struct numeric_context {
  using value_type = num_scalar;
  static constexpr bool is_exact = false;

  double q0 = 0.5;
  int order = 64;
  double tail_tol = 1e-14;

  numeric_context() = default;
  explicit numeric_context(double q, int n = 64, double tol = 1e-14) : q0(q), order(n), tail_tol(tol) {
    if (!std::isfinite(q) || q < 0.0 || q > 1.0)
      throw error(error_kind::domain, "numeric q must lie in [0,1], got " + std::to_string(q));
    if (n < 0) throw error(error_kind::domain, "series order must be nonnegative");
    if (!(tol > 0.0)) throw error(error_kind::domain, "tail tolerance must be positive");
  }

  value_type q() const { return {q0, 0.0}; }
  value_type from_int(long n) const { return {static_cast<double>(n), 0.0}; }
  bool classical() const noexcept { return q0 == 1.0; }
  bool hardy() const noexcept { return q0 == 0.0; }
  std::string mode_name() const { return "numeric"; }
};

template <class C>
concept q_context = requires(const C& c, long n) {
  typename C::value_type;
  { C::is_exact } -> std::convertible_to<bool>;
  { c.order } -> std::convertible_to<int>;
  { c.q() } -> std::same_as<typename C::value_type>;
  { c.from_int(n) } -> std::same_as<typename C::value_type>;
  { c.classical() } -> std::same_as<bool>;
};

template <q_context C>
C with_order(C ctx, int n) {
  if (n < 0) throw error(error_kind::domain, "series order must be nonnegative");
  ctx.order = n;
  return ctx;
}

} // namespace qfock
