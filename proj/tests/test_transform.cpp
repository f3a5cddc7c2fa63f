#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qfock/transform.hpp"

using namespace qfock;

TEST(Transform, JacksonMonomials) {
  const numeric_context c(0.5);
  auto mono = [](int l) { return [l](double x) { return num_scalar(std::pow(x, l)); }; };
  EXPECT_NEAR(jackson_integral(mono(1), 1.0, c).value.real(), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(jackson_integral(mono(2), 1.0, c).value.real(), 0.5714285714285714, 1e-15);
  for (double q : {0.1, 0.6, 0.95})
    for (int l = 0; l <= 6; ++l)
      EXPECT_NEAR(jackson_integral(mono(l), 0.8, numeric_context(q)).value.real(), std::pow(0.8, l + 1) / oracle::q_int(l + 1, q),
                  1e-13);
}

TEST(Transform, JacksonLimits) {
  const auto r = jackson_integral([](double x) { return num_scalar(3.0 * x + 1.0); }, 2.0, numeric_context(0.0));
  EXPECT_EQ(r.terms, 1);
  EXPECT_DOUBLE_EQ(r.value.real(), 14.0);
  try {
    (void)jackson_integral([](double) { return num_scalar(1.0); }, 1.0, numeric_context(1.0));
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.kind(), error_kind::unsupported);
  }
  try {
    (void)jackson_integral([](double x) { return num_scalar(1.0 / (x * x)); }, 1.0, numeric_context(0.5));
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.kind(), error_kind::divergence);
  }
}

TEST(Transform, GridShape) {
  const numeric_context c(0.7);
  const auto g = grid_function::sample([](double x) { return num_scalar(x); }, c);
  EXPECT_GE(g.size(), min_grid_terms);
  EXPECT_LT(g.point(g.size() - 1), c.tail_tol);
  for (int k = 1; k < g.size(); ++k) EXPECT_LT(g.point(k), g.point(k - 1));
  EXPECT_NEAR(g.point(0), 0.7 / 0.3, 1e-15);
}

TEST(Transform, SpikeConvolution) {
  const numeric_context c(0.5);
  const int n = grid_function::default_length(c);
  std::vector<num_scalar> spike(static_cast<std::size_t>(n), 0.0);
  spike[0] = 1.0;
  const auto f = grid_function::sample([](double x) { return num_scalar(std::sin(x) + 2.0); }, c);
  const auto conv = grid_convolution(f, grid_function(c.q0, spike));
  for (int m = 0; m < n; ++m) EXPECT_EQ(conv.values()[static_cast<std::size_t>(m)], f.values()[static_cast<std::size_t>(m)]);
}

TEST(Transform, GridMismatch) {
  const auto a = grid_function::sample([](double) { return num_scalar(1.0); }, numeric_context(0.5));
  const auto b = grid_function::sample([](double) { return num_scalar(1.0); }, numeric_context(0.6));
  try {
    (void)grid_convolution(a, b);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.kind(), error_kind::grid_mismatch);
  }
  EXPECT_THROW((void)mq_transform(a, 1, numeric_context(0.6)), error);
  EXPECT_THROW((void)mq_transform(a, 0, numeric_context(0.5)), error);
}

TEST(Transform, MomentValues) {
  const numeric_context c(0.5);
  const auto einv = eq_inverse_grid(c);
  EXPECT_NEAR(mq_transform(einv, 4, c).value.real(), 2.625, 1e-12);
  EXPECT_NEAR(moment_closed_form(3, c), 2.625, 1e-12);
  EXPECT_NEAR(measure_inner_product(3, 3, c).real(), 2.625, 1e-12);
  EXPECT_EQ(measure_inner_product(2, 3, c), num_scalar(0.0));
  const report d = density_moment_check(2, c);
  EXPECT_TRUE(d.holds);
  EXPECT_NEAR(d.details["convolution"].get<double>(), 2.25, 1e-10);
}

TEST(Transform, MomentIdentitiesOverGrid) {
  for (int i = 1; i <= 9; ++i) {
    const numeric_context c(i / 10.0);
    for (int n = 0; n <= 10; ++n) EXPECT_TRUE(moment_check(n, c).holds) << "q=" << c.q0 << " n=" << n;
    EXPECT_TRUE(measure_mass_check(c).holds);
  }
}

TEST(Transform, MeasureMomentsByDirectSum) {
  // sum_k (q;q)_inf q^k/(q;q)_k (q^k/(1-q))^n with a fixed number of terms
  for (double q : {0.2, 0.8}) {
    const long double qq = oracle::pochhammer_fixed(q, q, 4000);
    for (int n : {0, 4, 9}) {
      long double s = 0.0L, poch = 1.0L, qk = 1.0L;
      for (int k = 0; k < 4000; ++k) {
        s += qq * qk / poch * std::pow(qk / (1.0L - q), static_cast<long double>(n));
        qk *= q;
        poch *= 1.0L - qk;
      }
      EXPECT_NEAR(measure_inner_product(n, n, numeric_context(q)).real(), static_cast<double>(s), 1e-12 * static_cast<double>(s));
      EXPECT_NEAR(static_cast<double>(s), oracle::q_factorial(n, q), 1e-11 * oracle::q_factorial(n, q));
    }
  }
}

TEST(Transform, ConvolutionIdentity) {
  for (double q : {0.2, 0.5, 0.9}) EXPECT_TRUE(convolution_check(numeric_context(q)).holds);
}

TEST(Transform, DensityIdentity) {
  for (double q : {0.1, 0.5, 0.9})
    for (int n = 0; n <= 8; ++n) EXPECT_TRUE(density_moment_check(n, numeric_context(q)).holds) << q << " " << n;
}

TEST(Transform, HardyPointDegenerates) {
  const numeric_context c(0.0);
  EXPECT_NEAR(mq_transform(eq_inverse_grid(c), 3, c).value.real(), 1.0, 1e-15);
}
