#include <gtest/gtest.h>

#include <random>

#include "qfock/realization.hpp"

using namespace qfock;

TEST(Realization, AIsDownShift) {
  for (double q : {0.0, 0.4, 0.9}) {
    const auto s = build_realization(numeric_context(q, 12));
    for (int i = 0; i <= 12; ++i)
      for (int j = 0; j <= 12; ++j) EXPECT_NEAR(std::abs(s.A(i, j) - (j == i + 1 ? 1.0 : 0.0)), 0.0, 1e-14);
    EXPECT_EQ(s.C(0), num_scalar(1.0));
  }
}

TEST(Realization, DefectIsRankOneProjection) {
  for (double q : {0.0, 0.3, 0.5, 0.9}) {
    for (int n : {1, 5, 48}) {
      const auto s = build_realization(numeric_context(q, n));
      EXPECT_EQ(s.d, 1);
      EXPECT_LE(s.projection_deviation, 1e-12);
      EXPECT_NEAR(std::abs(s.B(n, 0)), 1.0, 1e-12);
      EXPECT_LE(std::abs(s.D(0)), 1e-12);
    }
  }
}

TEST(Realization, CoIsometry) {
  for (double q : {0.0, 0.5, 0.9}) {
    const auto s = build_realization(numeric_context(q, 48));
    EXPECT_LE(s.coisometry_residual, 1e-12);
    EXPECT_LE(s.column_isometry_residual, 1e-12);
  }
}

TEST(Realization, TransferFunction) {
  const auto s = build_realization(numeric_context(0.5, 20));
  EXPECT_EQ(eval_Sq(s, 0.0), s.D(0));
  for (const auto& z : disk_grid(10, 10, 1.0)) {
    const double m = std::abs(eval_Sq(s, z));
    EXPECT_LE(m, 1.0 + 1e-12);
    EXPECT_NEAR(m, std::pow(std::abs(z), 21), 1e-12);
  }
}

TEST(Realization, KernelAtOrigin) {
  const auto s = build_realization(numeric_context(0.7, 16));
  EXPECT_LE(verify_schur_kernel(s, 0.0, 0.0), 1e-14);
}

TEST(Realization, KernelRandomGridHardy) {
  const auto s = build_realization(numeric_context(0.0, 16));
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> r(0.0, 0.95), t(0.0, 6.283185307179586);
  for (int i = 0; i < 50; ++i) {
    const num_scalar z = std::polar(r(gen), t(gen)), w = std::polar(r(gen), t(gen));
    EXPECT_LE(verify_schur_kernel(s, z, w), 1e-10);
  }
}

TEST(Realization, KernelDiagonalOracle) {
  const auto s = build_realization(numeric_context(0.3, 48));
  for (double rad : {0.2, 0.7, 0.95}) {
    const num_scalar z = std::polar(rad, 1.1);
    const double r2 = rad * rad;
    double sum = 0.0;
    for (int k = 0; k <= 48; ++k) sum += std::pow(r2, k);
    EXPECT_NEAR(schur_kernel_rhs(s, z, z).real(), sum, 1e-12 * sum);
    EXPECT_NEAR(sum, (1.0 - std::pow(r2, 49)) / (1.0 - r2), 1e-12 * sum);
  }
}

TEST(Realization, PhaseInvariance) {
  const auto s = build_realization(numeric_context(0.9, 24));
  const auto t = with_phase(s, std::polar(1.0, 2.1));
  EXPECT_LE(detail::coisometry_residual(t), 1e-12);
  for (const auto& z : disk_grid(2, 5, 0.95)) {
    EXPECT_NEAR(std::abs(eval_Sq(t, z)), std::abs(eval_Sq(s, z)), 1e-14);
    EXPECT_NEAR(verify_schur_kernel(t, z, 0.3), verify_schur_kernel(s, z, 0.3), 1e-13);
  }
}

TEST(Realization, SuiteReport) {
  for (double q : {0.0, 0.3, 0.5, 0.9}) {
    const report r = verify_realization(numeric_context(q, 48));
    EXPECT_TRUE(r.holds) << nlohmann::json(r).dump();
    EXPECT_EQ(r.details["defect_rank"], 1);
    EXPECT_LE(r.details["kernel_residual_max"].get<double>(), 1e-10);
  }
}

TEST(Realization, Domain) {
  EXPECT_THROW(build_realization(numeric_context(1.0, 8)), error);
  EXPECT_THROW(build_realization(numeric_context(0.5, 0)), error);
  EXPECT_THROW((void)verify_schur_kernel(build_realization(numeric_context(0.5, 4)), 1.0, 1.0), error);
}
