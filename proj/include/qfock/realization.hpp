#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qfock/context.hpp"
#include "qfock/error.hpp"
#include "qfock/report.hpp"
#include "qfock/series.hpp"
#include "qfock/spaces.hpp"

namespace qfock {

/**
 * Block system [[A, B], [C, D]] on the truncated F_{2,q} in the orthonormal
 * basis z^n/[n]_q!, with A the matrix of R_q and C evaluation at 0. B and D
 * complete [A; C] to a co-isometry through the square root of the defect.
 *
 * The transfer function of this finite model is not the characteristic
 * function of the infinite-dimensional system.
 */
struct realization_system {
  int N = 0;
  double q0 = 0.0;
  Eigen::MatrixXcd A;
  Eigen::MatrixXcd B;
  Eigen::RowVectorXcd C;
  Eigen::RowVectorXcd D;
  int d = 0;
  /// Eigenvalues of the defect I - [A;C][A;C]*, ascending.
  Eigen::VectorXd defect_eigenvalues;
  double coisometry_residual = 0.0;
  double column_isometry_residual = 0.0;
  /// Largest distance of a defect eigenvalue from {0, 1}.
  double projection_deviation = 0.0;
};

inline constexpr double defect_eigen_tol = 1e-12;

namespace detail {

inline Eigen::MatrixXcd block_matrix(const realization_system& s) {
  const int n = s.N + 1;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n + 1, n + s.d);
  m.topLeftCorner(n, n) = s.A;
  m.topRightCorner(n, s.d) = s.B;
  m.bottomLeftCorner(1, n) = s.C;
  m.bottomRightCorner(1, s.d) = s.D;
  return m;
}

inline double coisometry_residual(const realization_system& s) {
  const Eigen::MatrixXcd m = block_matrix(s);
  const Eigen::MatrixXcd e = m * m.adjoint() - Eigen::MatrixXcd::Identity(m.rows(), m.rows());
  return e.cwiseAbs().maxCoeff();
}

} // namespace detail

inline realization_system build_realization(const numeric_context& ctx) {
  if (ctx.q0 < 0.0 || ctx.q0 >= 1.0) throw error(error_kind::domain, "realization needs q in [0, 1)");
  if (ctx.order < 1) throw error(error_kind::domain, "realization needs N >= 1");
  realization_system s;
  s.N = ctx.order;
  s.q0 = ctx.q0;
  const int n = ctx.order + 1;

  // R_q in orthonormal coordinates: entries scale by sqrt(w_row / w_col).
  const auto rq = op_Rq(ctx);
  const auto sp = make_space(space_kind::f2q, ctx);
  s.A = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!is_zero(rq(i, j)))
        s.A(i, j) = rq(i, j) * std::sqrt(sp.weights[static_cast<std::size_t>(i)].real() /
                                         sp.weights[static_cast<std::size_t>(j)].real());
  s.C = Eigen::RowVectorXcd::Zero(n);
  s.C(0) = std::sqrt(sp.weights[0].real());

  Eigen::MatrixXcd ac(n + 1, n);
  ac.topRows(n) = s.A;
  ac.bottomRows(1) = s.C;
  const Eigen::MatrixXcd defect = Eigen::MatrixXcd::Identity(n + 1, n + 1) - ac * ac.adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(defect);
  if (eig.info() != Eigen::Success) throw error(error_kind::singular, "defect eigensolve failed");
  s.defect_eigenvalues = eig.eigenvalues();
  if (s.defect_eigenvalues(0) < -defect_eigen_tol)
    throw error(error_kind::truncation,
                "defect is not positive semidefinite, smallest eigenvalue " + scalar_to_string(num_scalar(s.defect_eigenvalues(0))));

  std::vector<int> kept;
  for (int i = 0; i < s.defect_eigenvalues.size(); ++i) {
    const double lam = s.defect_eigenvalues(i);
    s.projection_deviation = std::max(s.projection_deviation, std::min(std::abs(lam), std::abs(lam - 1.0)));
    if (lam > defect_eigen_tol) kept.push_back(i);
  }
  s.d = static_cast<int>(kept.size());
  Eigen::MatrixXcd factor(n + 1, s.d);
  for (int c = 0; c < s.d; ++c) {
    const int i = kept[static_cast<std::size_t>(c)];
    factor.col(c) = eig.eigenvectors().col(i) * std::sqrt(s.defect_eigenvalues(i));
  }
  s.B = factor.topRows(n);
  s.D = factor.bottomRows(1);

  s.coisometry_residual = detail::coisometry_residual(s);
  const Eigen::MatrixXcd col = s.A.adjoint() * s.A + s.C.adjoint() * s.C - Eigen::MatrixXcd::Identity(n, n);
  s.column_isometry_residual = col.topLeftCorner(n - 1, n - 1).cwiseAbs().maxCoeff();
  return s;
}

/// Same system with the defect factor [B; D] multiplied by a unimodular u.
inline realization_system with_phase(realization_system s, num_scalar u) {
  s.B *= u;
  s.D *= u;
  return s;
}

/// Row S_q(z) = D + z C (I - zA)^{-1} B of length d.
inline Eigen::RowVectorXcd eval_Sq_row(const realization_system& s, num_scalar z) {
  const int n = s.N + 1;
  const Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n, n) - z * s.A;
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
  if (!lu.isInvertible()) throw error(error_kind::singular, "I - zA is singular");
  const Eigen::MatrixXcd x = lu.solve(s.B);
  return s.D + z * (s.C * x);
}

inline num_scalar eval_Sq(const realization_system& s, num_scalar z) {
  if (s.d != 1) throw error(error_kind::unsupported, "scalar S_q needs defect rank 1");
  return eval_Sq_row(s, z)(0);
}

namespace detail {

/// ((I - zA)^{-1})^* C^*, so that the kernel side is a(z)^* a(w).
inline Eigen::VectorXcd kernel_vector(const realization_system& s, num_scalar z) {
  const int n = s.N + 1;
  const Eigen::MatrixXcd m = (Eigen::MatrixXcd::Identity(n, n) - z * s.A).adjoint();
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
  if (!lu.isInvertible()) throw error(error_kind::singular, "I - zA is singular");
  return lu.solve(Eigen::VectorXcd(s.C.adjoint()));
}

} // namespace detail

/// C (I - zA)^{-1} [(I - wA)^*]^{-1} C^*.
inline num_scalar schur_kernel_rhs(const realization_system& s, num_scalar z, num_scalar w) {
  return detail::kernel_vector(s, z).dot(detail::kernel_vector(s, w));
}

/// |(1 - S(z)S(w)^*)/(1 - z conj(w)) - C(I - zA)^{-1}[(I - wA)^*]^{-1}C^*|.
inline double verify_schur_kernel(const realization_system& s, num_scalar z, num_scalar w) {
  const num_scalar denom = 1.0 - z * std::conj(w);
  if (std::abs(denom) == 0.0) throw error(error_kind::domain, "kernel identity needs z conj(w) != 1");
  const num_scalar sz_sw = eval_Sq_row(s, z).dot(eval_Sq_row(s, w)); // dot conjugates its first argument
  const num_scalar lhs = (1.0 - std::conj(sz_sw)) / denom;
  return std::abs(lhs - schur_kernel_rhs(s, z, w));
}

/// Deterministic points inside the disk of the given radius: rings of equal
/// spacing, angles rotated per ring.
inline std::vector<num_scalar> disk_grid(int rings, int per_ring, double radius) {
  std::vector<num_scalar> pts;
  for (int r = 1; r <= rings; ++r)
    for (int a = 0; a < per_ring; ++a) {
      const double rho = radius * r / rings;
      const double th = 2.0 * std::numbers::pi * (a + 0.5 * r) / per_ring;
      pts.push_back(std::polar(rho, th));
    }
  return pts;
}

inline constexpr double coisometry_tol = 1e-12;
inline constexpr double kernel_tol = 1e-10;
inline constexpr double modulus_tol = 1e-12;

/// Kernel identity on a 10x10 (z, w) grid, contractivity and the modulus
/// |S_q(z)| = |z|^{N+1} on 100 points of the closed disk, and invariance of
/// the kernel residual under two random phases of B.
inline report verify_realization(const numeric_context& ctx, std::uint64_t seed = 0) {
  report rep = make_report("REALIZATION", ctx, 0);
  const realization_system s = build_realization(ctx);

  const auto zs = disk_grid(2, 5, 0.95);
  double kernel_max = 0.0, kernel_rel_max = 0.0, diag_oracle = 0.0;
  std::vector<double> residuals;
  for (const auto& z : zs)
    for (const auto& w : zs) {
      const double r = verify_schur_kernel(s, z, w);
      residuals.push_back(r);
      kernel_max = std::max(kernel_max, r);
      kernel_rel_max = std::max(kernel_rel_max, r / std::max(1.0, std::abs(schur_kernel_rhs(s, z, w))));
    }
  for (const auto& z : zs) {
    const double r2 = std::norm(z);
    const double expect = (1.0 - std::pow(r2, s.N + 1)) / (1.0 - r2);
    diag_oracle = std::max(diag_oracle, std::abs(schur_kernel_rhs(s, z, z) - expect) / expect);
  }

  double sup = 0.0, modulus_dev = 0.0;
  for (const auto& z : disk_grid(10, 10, 1.0)) {
    const double m = eval_Sq_row(s, z).norm();
    sup = std::max(sup, m);
    modulus_dev = std::max(modulus_dev, std::abs(m - std::pow(std::abs(z), s.N + 1)));
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  double phase_dev = 0.0;
  for (int t = 0; t < 2; ++t) {
    const auto sp = with_phase(s, std::polar(1.0, angle(rng)));
    std::size_t i = 0;
    for (const auto& z : zs)
      for (const auto& w : zs) phase_dev = std::max(phase_dev, std::abs(verify_schur_kernel(sp, z, w) - residuals[i++]));
  }

  const bool ok_coiso = s.coisometry_residual <= coisometry_tol;
  const bool ok_col = s.column_isometry_residual <= coisometry_tol;
  const bool ok_proj = s.projection_deviation <= defect_eigen_tol;
  const bool ok_kernel = kernel_rel_max <= kernel_tol;
  const bool ok_schur = sup <= 1.0 + modulus_tol;
  const bool ok_mod = modulus_dev <= modulus_tol;
  const bool ok_phase = phase_dev <= kernel_tol;
  const bool ok_diag = diag_oracle <= kernel_tol;
  rep.holds = ok_coiso && ok_col && ok_proj && ok_kernel && ok_schur && ok_mod && ok_phase && ok_diag;
  rep.max_defect = std::max({s.coisometry_residual, kernel_max, modulus_dev});
  rep.details = {{"N", s.N},
                 {"q", s.q0},
                 {"defect_rank", s.d},
                 {"coisometry_residual", s.coisometry_residual},
                 {"kernel_residual_max", kernel_max},
                 {"column_isometry_residual", s.column_isometry_residual},
                 {"projection_deviation", s.projection_deviation},
                 {"smallest_defect_eigenvalue", s.defect_eigenvalues(0)},
                 {"sup_modulus", sup},
                 {"modulus_power_deviation", modulus_dev},
                 {"kernel_diagonal_oracle", diag_oracle},
                 {"phase_invariance_deviation", phase_dev},
                 {"seed", seed},
                 {"note", "transfer function of the truncated model; it is not the infinite-dimensional S_q"}};
  return rep;
}

} // namespace qfock
