#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "qfock/qnum.hpp"

using namespace qfock;

namespace {

qpoly from(const oracle::cvec& c) { return qpoly(c); }

oracle::cvec random_cvec(std::mt19937& gen, int max_degree) {
  std::uniform_int_distribution<int> deg(0, max_degree), val(-9, 9), den(1, 4);
  oracle::cvec c;
  const int d = deg(gen);
  for (int i = 0; i <= d; ++i) c.emplace_back(val(gen), den(gen));
  for (auto& x : c) x.canonicalize();
  oracle::trim(c);
  return c;
}

} // namespace

TEST(QPoly, RendersAscending) {
  EXPECT_EQ(from(oracle::parse_table_poly("q^2+2q+1")).to_string(), "1+2q+q^2");
  EXPECT_EQ(from(oracle::parse_table_poly("q^5+2q^4+3q^3")).to_string(), "3q^3+2q^4+q^5");
  EXPECT_EQ(qpoly().to_string(), "0");
  EXPECT_EQ(qpoly::monomial(1, mpq_class(1, 2)).to_string(), "(1/2)q");
  EXPECT_EQ((qpoly(1) - qpoly::monomial(1)).to_string(), "1-q");
}

TEST(QPoly, MultiplicationMatchesSchoolbook) {
  std::mt19937 gen(0);
  for (int t = 0; t < 200; ++t) {
    const auto a = random_cvec(gen, 7), b = random_cvec(gen, 7);
    EXPECT_EQ(from(a) * from(b), from(oracle::mul(a, b)));
    EXPECT_EQ(from(a) + from(b), from(oracle::add(a, b)));
  }
}

TEST(QPoly, DivmodReconstructs) {
  std::mt19937 gen(1);
  for (int t = 0; t < 100; ++t) {
    const auto a = from(random_cvec(gen, 8));
    auto b = from(random_cvec(gen, 4));
    if (b.is_zero()) continue;
    const auto [quo, rem] = divmod(a, b);
    EXPECT_EQ(quo * b + rem, a);
    EXPECT_LT(rem.degree(), b.degree() == 0 ? 0 : b.degree());
  }
}

TEST(QPoly, DivisionByZeroThrows) {
  try {
    (void)divmod(qpoly(1), qpoly());
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.kind(), error_kind::division_by_zero);
  }
}

TEST(QPoly, GcdOfCommonFactor) {
  const qpoly f = qpoly(1) + qpoly::monomial(1);                       // 1+q
  const qpoly g = qpoly(1) + qpoly::monomial(1) + qpoly::monomial(2);  // 1+q+q^2
  EXPECT_EQ(gcd(f * g, f * f), f);
  EXPECT_TRUE(gcd(f, g).is_one());
}

TEST(QRat, CanonicalForm) {
  const qpoly f = qpoly(1) + qpoly::monomial(1);
  const qpoly g = qpoly(2) + qpoly::monomial(2);
  const qrat r(f * g, f.scaled(3));
  EXPECT_TRUE(r.den().is_one());
  EXPECT_EQ(r.num(), g.scaled(mpq_class(1, 3)));
  EXPECT_EQ(qrat(1) / qrat(f) * qrat(f), qrat(1));
  EXPECT_EQ((qrat(f) / qrat(g)).den().lead(), 1);
}

TEST(QRat, RandomFieldLaws) {
  std::mt19937 gen(2);
  for (int t = 0; t < 60; ++t) {
    const qrat a(from(random_cvec(gen, 3)));
    const qrat b(from(random_cvec(gen, 3)), qpoly(1) + qpoly::monomial(static_cast<std::size_t>(1 + t % 3)));
    const qrat c(qpoly(2) - qpoly::monomial(1), from(random_cvec(gen, 2)) + qpoly(10));
    EXPECT_EQ((a + b) * c, a * c + b * c);
    EXPECT_EQ(a - a, qrat(0));
    if (!b.is_zero()) EXPECT_EQ(a / b * b, a);
    EXPECT_NEAR(std::abs((a * b).eval(0.3) - a.eval(0.3) * b.eval(0.3)), 0.0, 1e-12);
  }
}

TEST(QRat, PoleRaises) {
  const qrat r(qpoly(1), qpoly(1) - qpoly::monomial(1));
  EXPECT_NEAR(r.eval(0.5).real(), 2.0, 1e-15);
  try {
    (void)r.eval(1.0);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.kind(), error_kind::pole);
  }
}

TEST(QNum, QIntegers) {
  const exact_context ex;
  EXPECT_EQ(q_int(3, ex), qrat(from(oracle::q_int(3))));
  EXPECT_EQ(q_int(3, ex).to_string(), "1+q+q^2");
  EXPECT_TRUE(q_int(0, ex).is_zero());
  EXPECT_DOUBLE_EQ(q_int(4, numeric_context(0.5)).real(), 1.875);
  for (int n = 0; n < 12; ++n) {
    EXPECT_DOUBLE_EQ(q_int(n, numeric_context(1.0)).real(), n);
    EXPECT_EQ(q_int(n + 1, ex), qrat(1) + qrat::q() * q_int(n, ex));
  }
}

TEST(QNum, QFactorials) {
  const exact_context ex;
  EXPECT_EQ(q_factorial(3, ex).to_string(), "1+2q+2q^2+q^3");
  double fact = 1.0;
  for (int n = 0; n <= 12; ++n) {
    if (n > 0) fact *= n;
    EXPECT_DOUBLE_EQ(q_factorial(n, numeric_context(1.0)).real(), fact);
    EXPECT_DOUBLE_EQ(q_factorial(n, numeric_context(0.0)).real(), 1.0);
    const qrat f = q_factorial(n, ex);
    EXPECT_EQ(f.num(), from(oracle::q_factorial(n)));
    EXPECT_EQ(f.num().degree(), n * (n - 1) / 2);
    for (const auto& c : f.num().coeffs()) EXPECT_GT(c, 0);
    EXPECT_NEAR(q_factorial(n, numeric_context(0.7)).real(), oracle::q_factorial(n, 0.7), 1e-12 * fact);
  }
}

TEST(QNum, FinitePochhammer) {
  const exact_context ex;
  const qrat a(qpoly::monomial(2)); // stands in for a symbol: any rational function works
  EXPECT_EQ(pochhammer(a, 0, ex), qrat(1));
  EXPECT_EQ(pochhammer(a, 2, ex), (qrat(1) - a) * (qrat(1) - a * qrat::q()));
}

TEST(QNum, InfinitePochhammer) {
  const numeric_context c(0.5);
  const auto r = pochhammer_infinite(num_scalar(0.5), c);
  // relative tail tolerance 1e-14
  EXPECT_NEAR(r.value.real(), 0.2887880950866024, 0.29e-14);
  EXPECT_NEAR(r.value.real(), static_cast<double>(oracle::pochhammer_fixed(0.5L, 0.5L, 200)), 0.29e-14);
  EXPECT_GT(r.terms, 0);
  try {
    (void)pochhammer_infinite(num_scalar(0.5), numeric_context(1.0));
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.kind(), error_kind::unsupported);
  }
  try {
    (void)pochhammer_infinite(num_scalar(0.5), exact_context{});
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.kind(), error_kind::unsupported);
  }
}

TEST(QNum, EqExpSpecialValues) {
  EXPECT_NEAR(eq_exp(0.5, numeric_context(0.0)).real(), 2.0, 2e-14);
  EXPECT_NEAR(eq_exp(0.5, numeric_context(0.0), eq_method::product).real(), 2.0, 2e-14);
  EXPECT_NEAR(std::abs(eq_exp(num_scalar(0.3, -1.2), numeric_context(1.0)) - std::exp(num_scalar(0.3, -1.2))), 0.0, 1e-15);
  for (double q : {0.0, 0.2, 0.9, 1.0}) EXPECT_EQ(eq_exp(0.0, numeric_context(q)), num_scalar(1.0));
}

TEST(QNum, EqExpAgainstFixedTermSums) {
  for (double q : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const numeric_context c(q);
    const double r = 0.9 / (1.0 - q);
    for (int a = 0; a < 12; ++a) {
      const num_scalar z = std::polar(r * (a + 1) / 12.0, 0.7 * a);
      const auto ref = oracle::eq_series_fixed({z.real(), z.imag()}, q, 6000);
      const num_scalar expect(static_cast<double>(ref.real()), static_cast<double>(ref.imag()));
      EXPECT_LE(std::abs(eq_exp(z, c) - expect), 1e-12 * std::abs(expect)) << "q=" << q << " z=" << z;
      EXPECT_LE(std::abs(eq_exp(z, c, eq_method::product) - expect), 1e-12 * std::abs(expect)) << "q=" << q << " z=" << z;
    }
  }
}

TEST(QNum, EqExpCancellingSeries) {
  // alternating terms peak near 1e4 while E_q(-9) at q = 0.9 is 5.7e-4; value from a 40-digit product
  const numeric_context c(0.9);
  const double expect = 0.000573339059986422857308;
  EXPECT_NEAR(eq_exp(-9.0, c).real(), expect, 1e-14 * expect);
  EXPECT_NEAR(eq_exp(-9.0, c, eq_method::product).real(), expect, 2e-14 * expect); // omitted factors bounded by tail_tol
}

TEST(QNum, EqExpDomain) {
  try {
    (void)eq_exp(2.0, numeric_context(0.5));
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.kind(), error_kind::domain);
  }
}

TEST(QNum, FunctionalEquation) {
  EXPECT_EQ(eq_functional_check(0.0, numeric_context(0.4)), 0.0);
  EXPECT_LE(eq_functional_check(1.0, numeric_context(0.5)), 1e-12 * std::abs(eq_exp(1.0, numeric_context(0.5))));
  EXPECT_LE(eq_functional_check(num_scalar(0.3, 0.4), numeric_context(0.0)), 1e-14);
}

TEST(QNum, FactorialMonotone) {
  for (double q : {0.05, 0.5, 0.95, 1.0}) EXPECT_TRUE(q_factorials_monotone(60, numeric_context(q)));
}
