#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "qfock/realization.hpp"
#include "qfock/series_identities.hpp"
#include "qfock/spaces.hpp"
#include "qfock/stirling.hpp"
#include "qfock/transform.hpp"

namespace qfock {

// ---------------------------------------------------------------------------
// Analytic checks on E_q, the kernels and the weights

/// Rings of points with |z| <= 0.9/(1-q), radius 5 at q = 1.
inline std::vector<num_scalar> eq_test_grid(double q0) {
  const double radius = q0 >= 1.0 ? 5.0 : 0.9 * eq_radius(q0);
  auto pts = disk_grid(8, 8, radius);
  pts.emplace_back(0.0);
  pts.emplace_back(-radius);
  return pts;
}

inline constexpr double eq_agreement_tol = 1e-12;

/// |series - product| <= 1e-12 |E_q(z)| on the test grid.
inline report eq_agreement_check(const numeric_context& ctx) {
  report rep = make_report("EQ_SERIES_PRODUCT", ctx, 0);
  double worst = 0.0;
  int max_terms = 0;
  for (const auto& z : eq_test_grid(ctx.q0)) {
    const auto s = eq_exp_detailed(z, ctx, eq_method::series);
    const auto p = eq_exp_detailed(z, ctx, eq_method::product);
    worst = std::max(worst, std::abs(s.value - p.value) / std::abs(s.value));
    max_terms = std::max({max_terms, s.terms, p.terms});
  }
  rep.max_defect = worst;
  rep.holds = worst <= eq_agreement_tol;
  rep.details = {{"relative", true}, {"tolerance", eq_agreement_tol}, {"points", eq_test_grid(ctx.q0).size()},
                 {"max_terms", max_terms}};
  return rep;
}

/// |E_q(qz) - (1 - z(1-q)) E_q(z)| <= 1e-12 |E_q(z)| on the test grid.
inline report eq_functional_report(const numeric_context& ctx) {
  report rep = make_report("EQ_FUNCTIONAL", ctx, 0);
  double worst = 0.0;
  for (const auto& z : eq_test_grid(ctx.q0))
    worst = std::max(worst, eq_functional_check(z, ctx) / std::abs(eq_exp(z, ctx)));
  rep.max_defect = worst;
  rep.holds = worst <= eq_agreement_tol;
  rep.details = {{"relative", true}, {"tolerance", eq_agreement_tol}};
  return rep;
}

inline constexpr double gram_tol = 1e-10;

/// Minimum Gram eigenvalue on 8 random points with |z|^2 < 0.9/(1-q).
inline report gram_psd_report(kernel_id kid, const numeric_context& ctx, std::uint64_t seed = 0) {
  report rep = make_report("GRAM_PSD_" + std::string(to_string(kid)), ctx, 0);
  const double radius = ctx.classical() ? 2.0 : std::sqrt(0.9 / (1.0 - ctx.q0));
  const auto pts = random_disk_points(8, radius, seed);
  const Eigen::MatrixXcd g = gram_matrix(kid, pts, ctx);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  const double diag = g.diagonal().cwiseAbs().maxCoeff();
  rep.max_defect = std::max(0.0, -min_eig);
  rep.holds = min_eig >= -gram_tol * std::max(1.0, diag);
  rep.details = {{"min_eigenvalue", min_eig}, {"max_diagonal", diag}, {"points", 8}, {"radius", radius}, {"seed", seed}};
  return rep;
}

/// ||M_z|| on the H2Q truncation stays below 1/(1-q) and grows with N.
inline report mz_norm_report(const numeric_context& ctx) {
  report rep = make_report("MZ_NORM", ctx, 0);
  const double bound = 1.0 / (1.0 - ctx.q0);
  const double value = mz_norm_bound(ctx);
  bool monotone = true;
  double prev = 0.0;
  nlohmann::json nested = nlohmann::json::array();
  for (int n = 4; n <= ctx.order; n *= 2) {
    const double v = mz_norm_bound(with_order(ctx, n));
    monotone = monotone && v >= prev - 1e-14;
    prev = v;
    nested.push_back({{"N", n}, {"norm", v}});
  }
  monotone = monotone && value >= prev - 1e-14;
  rep.max_defect = std::max(0.0, value - bound);
  rep.holds = value <= bound + 1e-10 && monotone;
  rep.details = {{"norm", value}, {"bound", bound}, {"monotone_in_N", monotone}, {"nested", nested}};
  return rep;
}

/// 1 <= [0]_q! <= [1]_q! <= ... <= [N]_q!.
inline report weight_monotone_report(const numeric_context& ctx) {
  report rep = make_report("WEIGHT_MONOTONE", ctx, 0);
  rep.holds = q_factorials_monotone(ctx.order, ctx);
  rep.max_defect = 0.0;
  rep.details = {{"n_max", ctx.order}};
  return rep;
}

/// Random coefficients in [-1, 1] for a polynomial of the given degree.
inline std::vector<double> random_coefficients(int degree, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> c;
  for (int k = 0; k <= degree; ++k) c.push_back(u(gen));
  return c;
}

inline constexpr int recovery_degree = 16;
inline constexpr double recovery_tol = 1e-13;

/// C R_q^n f / [n]_q! on random degree-16 polynomials against their
/// coefficients, and on the E_q partial sum against 1/[n]_q!.
template <q_context C>
report coefficient_recovery_report(const C& ctx, std::uint64_t seed = 0, int trials = 4) {
  using S = typename C::value_type;
  report rep = make_report("COEFFICIENT_RECOVERY", ctx, 0);
  const C c16 = with_order(ctx, std::max(ctx.order, recovery_degree));
  std::mt19937_64 gen(seed);
  double worst = 0.0;
  bool exact_ok = true;
  for (int t = 0; t < trials; ++t) {
    const auto coeffs = random_coefficients(recovery_degree, gen);
    series_t<C> f(c16.order);
    for (int k = 0; k <= recovery_degree; ++k) {
      if constexpr (C::is_exact) f[k] = qrat(mpq_class(coeffs[static_cast<std::size_t>(k)]));
      else f[k] = coeffs[static_cast<std::size_t>(k)];
    }
    const auto rec = coefficient_recovery(f, c16);
    for (int k = 0; k <= c16.order; ++k) {
      if constexpr (C::is_exact) exact_ok = exact_ok && rec[static_cast<std::size_t>(k)] == f[k];
      else worst = std::max(worst, std::abs(rec[static_cast<std::size_t>(k)] - f[k]));
    }
  }
  // E_q partial sum
  series_t<C> e(c16.order);
  S fact = c16.from_int(1);
  for (int k = 0; k <= c16.order; ++k) {
    if (k > 0) fact = fact * q_int(k, c16);
    e[k] = c16.from_int(1) / fact;
  }
  const auto rec = coefficient_recovery(e, c16);
  for (int k = 0; k <= c16.order; ++k) {
    if constexpr (C::is_exact) exact_ok = exact_ok && rec[static_cast<std::size_t>(k)] == e[k];
    else worst = std::max(worst, std::abs(rec[static_cast<std::size_t>(k)] - e[k]) / std::abs(e[k]));
  }
  if constexpr (C::is_exact) {
    rep.holds = exact_ok;
    rep.max_defect = std::string(exact_ok ? "0" : "nonzero");
  } else {
    rep.holds = worst <= recovery_tol;
    rep.max_defect = worst;
  }
  rep.details = {{"degree", recovery_degree}, {"trials", trials}, {"seed", seed}, {"tolerance", recovery_tol}};
  return rep;
}

// ---------------------------------------------------------------------------
// Stirling reports (always exact)

/// Rows 1..4 of the published table, coefficients ascending from q^0.
inline const std::vector<std::vector<std::vector<long>>>& stirling_golden_rows() {
  static const std::vector<std::vector<std::vector<long>>> rows{
      {{1}},
      {{1}, {0, 1}},
      {{1}, {0, 2, 1}, {0, 0, 0, 1}},
      {{1}, {0, 3, 3, 1}, {0, 0, 0, 3, 2, 1}, {0, 0, 0, 0, 0, 0, 1}},
  };
  return rows;
}

inline report stirling_golden_report() {
  report rep = make_report("STIRLING_GOLDEN", exact_context{}, 0);
  const auto t = stirling_recursive(4);
  const auto& golden = stirling_golden_rows();
  nlohmann::json mismatches = nlohmann::json::array();
  for (int n = 1; n <= 4; ++n)
    for (int k = 1; k <= n; ++k) {
      std::vector<mpq_class> c;
      for (long v : golden[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k - 1)]) c.emplace_back(v);
      if (!(t.at(n, k) == qpoly(std::move(c)))) mismatches.push_back({n, k});
    }
  rep.holds = mismatches.empty();
  rep.max_defect = std::string(rep.holds ? "0" : "nonzero");
  rep.details = {{"rows", 4}, {"mismatches", mismatches}, {"table", stirling_table_text(t)}};
  return rep;
}

inline report stirling_oracle_report(int n_max = 8) {
  exact_context ctx(2 * n_max);
  report rep = make_report("STIRLING_ORACLE", ctx, 0);
  const auto t = stirling_recursive(n_max, ctx);
  nlohmann::json mismatches = nlohmann::json::array();
  for (int n = 1; n <= n_max; ++n) {
    const auto row = stirling_oracle(n, ctx);
    for (int k = 1; k <= n; ++k)
      if (!(row[static_cast<std::size_t>(k - 1)] == qrat(t.at(n, k)))) mismatches.push_back({n, k});
  }
  rep.holds = mismatches.empty();
  rep.max_defect = std::string(rep.holds ? "0" : "nonzero");
  rep.details = {{"n_max", n_max}, {"mismatches", mismatches}};
  return rep;
}

/// At q = 1 the table reduces to Stirling numbers of the second kind; the
/// degree of S(n,k) is (k-1)k/2 + (n-k)(k-1).
inline report stirling_classical_report(int n_max = 8) {
  report rep = make_report("STIRLING_CLASSICAL", exact_context{}, 0);
  const auto t = stirling_recursive(n_max);
  std::vector<std::vector<long>> s2(static_cast<std::size_t>(n_max) + 1, std::vector<long>(static_cast<std::size_t>(n_max) + 1, 0));
  s2[0][0] = 1;
  for (int n = 1; n <= n_max; ++n)
    for (int k = 1; k <= n; ++k)
      s2[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)] =
          k * s2[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k)] + s2[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k - 1)];
  bool values = true, degrees = true, nonneg = true;
  for (int n = 1; n <= n_max; ++n) {
    const auto row = stirling_row_at_one(t, n);
    for (int k = 1; k <= n; ++k) {
      values = values && row[static_cast<std::size_t>(k - 1)] == s2[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
      degrees = degrees && t.at(n, k).degree() == (k - 1) * k / 2 + (n - k) * (k - 1);
      for (const auto& c : t.at(n, k).coeffs()) nonneg = nonneg && c >= 0 && c.get_den() == 1;
    }
  }
  rep.holds = values && degrees && nonneg;
  rep.max_defect = std::string(rep.holds ? "0" : "nonzero");
  rep.details = {{"n_max", n_max}, {"second_kind_at_q1", values}, {"degree_formula", degrees}, {"nonnegative_integer_coefficients", nonneg}};
  return rep;
}

// ---------------------------------------------------------------------------
// Suites

enum class suite_id { series, stirling, spaces, transform, realization, all };

constexpr std::string_view to_string(suite_id s) noexcept {
  switch (s) {
  case suite_id::series: return "series";
  case suite_id::stirling: return "stirling";
  case suite_id::spaces: return "spaces";
  case suite_id::transform: return "transform";
  case suite_id::realization: return "realization";
  case suite_id::all: return "all";
  }
  return "";
}

inline suite_id parse_suite(std::string_view s) {
  for (auto id : {suite_id::series, suite_id::stirling, suite_id::spaces, suite_id::transform, suite_id::realization,
                  suite_id::all})
    if (to_string(id) == s) return id;
  throw error(error_kind::usage, "unknown suite '" + std::string(s) + "'");
}

struct suite_options {
  std::uint64_t seed = 0;
  int moment_n_max = 10;
  int density_n_max = 8;
};

/// Reports plus the checks that do not apply at this q (with the reason).
struct suite_result {
  std::vector<report> reports;
  std::vector<std::pair<std::string, std::string>> skipped;
};

namespace detail {

inline void run_guarded(suite_result& out, const std::string& name, const std::function<report()>& fn) {
  try {
    out.reports.push_back(fn());
  } catch (const error& e) {
    if (e.kind() != error_kind::unsupported) throw;
    out.skipped.emplace_back(name, e.what());
  }
}

template <q_context C>
void series_suite(suite_result& out, const C& ctx, const suite_options& opt) {
  for (auto id : all_series_identities)
    run_guarded(out, std::string(to_string(id)), [&] { return verify_series_identity(id, ctx); });
  run_guarded(out, "COEFFICIENT_RECOVERY", [&] { return coefficient_recovery_report(ctx, opt.seed); });
}

inline void stirling_suite(suite_result& out) {
  out.reports.push_back(stirling_golden_report());
  out.reports.push_back(stirling_oracle_report());
  out.reports.push_back(stirling_classical_report());
}

template <q_context C>
void spaces_suite(suite_result& out, const C& ctx, const suite_options& opt) {
  for (auto id : all_space_identities) {
    if constexpr (C::is_exact) {
      if (!is_matrix_identity(id)) continue;
      run_guarded(out, std::string(to_string(id)), [&] { return verify_space_identity(id, ctx); });
    } else {
      run_guarded(out, std::string(to_string(id)),
                  [&] { return verify_space_identity(id, ctx, std::nullopt, functional_grid{opt.seed}); });
    }
  }
  run_guarded(out, "TQ_ISOMETRY", [&] { return verify_Tq(ctx); });
  if constexpr (!C::is_exact) {
    run_guarded(out, "EQ_SERIES_PRODUCT", [&] { return eq_agreement_check(ctx); });
    run_guarded(out, "EQ_FUNCTIONAL", [&] { return eq_functional_report(ctx); });
    run_guarded(out, "GRAM_PSD_K1Q", [&] { return gram_psd_report(kernel_id::k1q, ctx, opt.seed); });
    run_guarded(out, "GRAM_PSD_K1_MINUS_K2", [&] { return gram_psd_report(kernel_id::k1_minus_k2, ctx, opt.seed); });
    run_guarded(out, "MZ_NORM", [&] { return mz_norm_report(ctx); });
    run_guarded(out, "WEIGHT_MONOTONE", [&] { return weight_monotone_report(ctx); });
  }
}

inline report moment_suite_report(const numeric_context& ctx, int n_max) {
  report rep = make_report("MOMENT_IDENTITY", ctx, 0);
  double worst = 0.0;
  nlohmann::json per_n = nlohmann::json::array();
  for (int n = 0; n <= n_max; ++n) {
    const report r = moment_check(n, ctx);
    rep.holds = rep.holds && r.holds;
    worst = std::max(worst, std::get<double>(r.max_defect));
    per_n.push_back(r.details);
  }
  rep.max_defect = worst;
  rep.details = {{"n_max", n_max}, {"moments", per_n}};
  return rep;
}

inline report density_suite_report(const numeric_context& ctx, int n_max) {
  report rep = make_report("DENSITY_MOMENT", ctx, 0);
  double worst = 0.0;
  nlohmann::json per_n = nlohmann::json::array();
  for (int n = 0; n <= n_max; ++n) {
    const report r = density_moment_check(n, ctx);
    rep.holds = rep.holds && r.holds;
    worst = std::max(worst, std::get<double>(r.max_defect));
    per_n.push_back(r.details);
  }
  rep.max_defect = worst;
  rep.details = {{"n_max", n_max}, {"moments", per_n}};
  return rep;
}

inline void transform_suite(suite_result& out, const numeric_context& ctx, const suite_options& opt) {
  run_guarded(out, "MOMENT_IDENTITY", [&] { return moment_suite_report(ctx, opt.moment_n_max); });
  run_guarded(out, "DENSITY_MOMENT", [&] { return density_suite_report(ctx, opt.density_n_max); });
  run_guarded(out, "CONVOLUTION_IDENTITY", [&] { return convolution_check(ctx); });
  run_guarded(out, "JACKSON_MONOMIALS", [&] { return jackson_monomial_check(ctx); });
  run_guarded(out, "MEASURE_MASS", [&] { return measure_mass_check(ctx); });
}

inline void realization_suite(suite_result& out, const numeric_context& ctx, const suite_options& opt) {
  if (ctx.classical()) {
    out.skipped.emplace_back("REALIZATION", "the realization is built for q < 1");
    return;
  }
  out.reports.push_back(verify_realization(ctx, opt.seed));
}

} // namespace detail

/**
 * Runs one suite (or all) in the given mode. Numeric-only suites are listed
 * as skipped in exact mode; so are checks that do not apply at q = 1.
 * Reports come back sorted by identity.
 */
template <q_context C>
suite_result run_suite(suite_id suite, const C& ctx, const suite_options& opt = {}) {
  suite_result out;
  const bool all = suite == suite_id::all;
  if (all || suite == suite_id::series) detail::series_suite(out, ctx, opt);
  if (all || suite == suite_id::stirling) detail::stirling_suite(out);
  if (all || suite == suite_id::spaces) detail::spaces_suite(out, ctx, opt);
  if (all || suite == suite_id::transform) {
    if constexpr (C::is_exact) out.skipped.emplace_back("transform", "numeric-only suite");
    else detail::transform_suite(out, ctx, opt);
  }
  if (all || suite == suite_id::realization) {
    if constexpr (C::is_exact) {
      out.skipped.emplace_back("realization", "numeric-only suite");
    } else {
      detail::realization_suite(out, ctx, opt);
    }
  }
  std::stable_sort(out.reports.begin(), out.reports.end(),
                   [](const report& a, const report& b) { return a.identity < b.identity; });
  return out;
}

} // namespace qfock
