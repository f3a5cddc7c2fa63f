#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "qfock/series_identities.hpp"
#include "qfock/suites.hpp"

using namespace qfock;

TEST(Series, RqActsAsDividedDifference) {
  // R_q z^m = [m]_q z^{m-1}, checked against (f(z) - f(qz))/((1-q)z) at points
  const numeric_context c(0.6, 12);
  const auto rq = op_Rq(c);
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<num_scalar> coeffs(13);
  for (auto& x : coeffs) x = {u(gen), u(gen)};
  truncated_series<num_scalar> f(std::vector<num_scalar>(coeffs), 12);
  const auto g = rq.apply(f);
  std::vector<num_scalar> gc(g.coeffs().begin(), g.coeffs().end());
  for (num_scalar z : {num_scalar(0.3, 0.1), num_scalar(-0.8, 0.5), num_scalar(1.1, 0.0)}) {
    const auto fd = oracle::jackson_difference([&](num_scalar x) { return oracle::horner(coeffs, x); }, z, 0.6);
    EXPECT_LE(std::abs(oracle::horner(gc, z) - fd), 1e-12);
  }
  // f is a polynomial of degree 12, so R_q f loses nothing; M_z f drops z^13
  EXPECT_EQ(g.exact_to(), 12);
  EXPECT_EQ(op_Mz(c).apply(f).exact_to(), 11);
}

TEST(Series, HardyAndClassicalLimits) {
  const numeric_context hardy(0.0, 10), fock(1.0, 10);
  EXPECT_EQ(op_Rq(hardy), op_R0(hardy));
  EXPECT_EQ(op_Rq(fock), op_derivative(fock));
}

TEST(Series, MzShiftsAndDropsTop) {
  const exact_context ex(6);
  const auto mz = op_Mz(ex);
  EXPECT_EQ(mz.degree_shift(), 1);
  const auto f = truncated_series<qrat>::monomial(6, 6, qrat(1));
  const auto g = mz.apply(f);
  for (int k = 0; k <= 6; ++k) EXPECT_TRUE(g[k].is_zero());
}

TEST(Series, ExactIdentitiesAtN32) {
  const exact_context ex(32);
  for (auto id : all_series_identities) {
    const report r = verify_series_identity(id, ex);
    EXPECT_TRUE(r.holds) << r.identity;
    EXPECT_EQ(std::get<std::string>(r.max_defect), "0") << r.identity;
  }
}

TEST(Series, IteratedPowersUsesPerPowerMargin) {
  const report r = verify_series_identity(series_identity::iterated_powers, exact_context(16));
  ASSERT_EQ(r.details["powers"].size(), 8u);
  for (int n = 1; n <= 8; ++n) {
    EXPECT_EQ(r.details["powers"][n - 1]["checked_degrees"][1].get<int>(), 16 - n);
    EXPECT_TRUE(r.details["powers"][n - 1]["holds"].get<bool>());
  }
}

TEST(Series, NumericIdentitiesOnGrid) {
  for (double q : {0.0, 0.1, 0.5, 0.9}) {
    const numeric_context c(q, 32);
    for (auto id : all_series_identities) EXPECT_TRUE(verify_series_identity(id, c).holds) << to_string(id) << " q=" << q;
  }
}

TEST(Series, ClassicalCommutatorAndUnsupported) {
  const numeric_context fock(1.0, 20);
  EXPECT_TRUE(verify_series_identity(series_identity::q_commutator, fock).holds);
  for (auto id : {series_identity::iterated_powers, series_identity::rq_factored}) {
    try {
      (void)verify_series_identity(id, fock);
      FAIL();
    } catch (const error& e) {
      EXPECT_EQ(e.kind(), error_kind::unsupported);
    }
  }
}

TEST(Series, BrokenIdentityIsCaught) {
  // q M_z R_q - R_q M_z must not equal the identity; the comparison has to say so
  const exact_context ex(8);
  const auto rq = op_Rq(ex);
  const auto mz = op_Mz(ex);
  const auto d = compare_columns(qrat::q() * (mz * rq) - rq * mz, op_identity(ex), 7);
  EXPECT_FALSE(d.zero);
  EXPECT_NE(std::get<std::string>(d.max_entry), "0");
}

TEST(Series, MarginOutOfRange) {
  try {
    (void)verify_series_identity(series_identity::q_commutator, exact_context(4), 5);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.kind(), error_kind::domain);
  }
  EXPECT_THROW((void)parse_series_identity("NOPE"), error);
}

TEST(Series, EvaluateMatchesNumericMode) {
  for (double q : {0.0, 0.25, 0.8}) {
    const exact_context ex(14);
    const numeric_context c(q, 14);
    const std::vector<std::pair<operator_t<exact_context>, operator_t<numeric_context>>> pairs{
        {op_Rq(ex), op_Rq(c)}, {op_Lambda(ex), op_Lambda(c)}, {op_jackson_antiderivative(ex), op_jackson_antiderivative(c)},
        {op_Rq(ex) * op_Mz(ex) * op_R0(ex), op_Rq(c) * op_Mz(c) * op_R0(c)}};
    for (const auto& [e, n] : pairs) {
      const auto ev = evaluate(e, q);
      for (int r = 0; r < n.dim(); ++r)
        for (int col = 0; col < n.dim(); ++col) EXPECT_LE(std::abs(ev(r, col) - n(r, col)), 1e-14 * std::max(1.0, std::abs(n(r, col))));
    }
  }
}

TEST(Series, CompositionIsLinearAndAssociative) {
  const exact_context ex(10);
  const auto a = op_Rq(ex), b = op_Lambda(ex) + op_Mz(ex);
  std::mt19937 gen(4);
  std::uniform_int_distribution<int> v(-5, 5);
  for (int t = 0; t < 5; ++t) {
    truncated_series<qrat> f(10), g(10);
    for (int k = 0; k <= 10; ++k) {
      f[k] = qrat(v(gen));
      g[k] = qrat(qpoly(v(gen)) + qpoly::monomial(1, v(gen)));
    }
    EXPECT_EQ(op_compose(a, b).apply(f).coeffs(), a.apply(b.apply(f)).coeffs());
    truncated_series<qrat> fg(10);
    for (int k = 0; k <= 10; ++k) fg[k] = f[k] + qrat::q() * g[k];
    const auto lhs = a.apply(fg);
    const auto fa = a.apply(f), ga = a.apply(g);
    for (int k = 0; k <= 10; ++k) EXPECT_EQ(lhs[k], fa[k] + qrat::q() * ga[k]);
  }
}

TEST(Series, CoefficientRecoveryExamples) {
  const numeric_context c(0.3, 8);
  truncated_series<num_scalar> f(8);
  f[0] = f[1] = f[2] = 1.0;
  const auto rec = coefficient_recovery(f, c);
  for (int k = 0; k <= 8; ++k) EXPECT_NEAR(std::abs(rec[static_cast<std::size_t>(k)] - (k <= 2 ? 1.0 : 0.0)), 0.0, 1e-15);

  // E_q partial sum recovers 1/[n]_q!, exactly
  const exact_context ex(10);
  truncated_series<qrat> e(10);
  for (int k = 0; k <= 10; ++k) e[k] = qrat(1) / q_factorial(k, ex);
  const auto er = coefficient_recovery(e, ex);
  for (int k = 0; k <= 10; ++k) EXPECT_EQ(er[static_cast<std::size_t>(k)], e[k]);
}

TEST(Series, CoefficientRecoveryIndependentOfQ) {
  std::mt19937_64 gen(0);
  for (int t = 0; t < 4; ++t) {
    const auto coeffs = random_coefficients(16, gen);
    std::vector<std::vector<num_scalar>> got;
    for (double q : {0.3, 0.7}) {
      truncated_series<num_scalar> f(16);
      for (int k = 0; k <= 16; ++k) f[k] = coeffs[static_cast<std::size_t>(k)];
      got.push_back(coefficient_recovery(f, numeric_context(q, 16)));
    }
    for (int k = 0; k <= 16; ++k) {
      EXPECT_LE(std::abs(got[0][k] - got[1][k]), 1e-13);
      EXPECT_LE(std::abs(got[0][k] - coeffs[static_cast<std::size_t>(k)]), 1e-13);
    }
  }
}

TEST(Series, ExactCoefficientRecoveryReport) {
  const report r = coefficient_recovery_report(exact_context(16));
  EXPECT_TRUE(r.holds);
}
