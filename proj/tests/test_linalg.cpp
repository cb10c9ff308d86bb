#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "svre/linalg.hpp"
#include "svre/rng.hpp"

namespace svre {
namespace {

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = rng.normal();
  return m;
}

TEST(JacobiEigen, MatchesEigenSelfAdjointSolver) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Eigen::MatrixXd a = random_matrix(12, 12, seed);
    const Eigen::MatrixXd sym = a + a.transpose();
    const linalg::SymmetricEigen ours = linalg::jacobi_eigen(sym);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(sym);
    ASSERT_EQ(ours.values.size(), 12);
    for (Eigen::Index k = 0; k < 12; ++k) EXPECT_NEAR(ours.values[k], ref.eigenvalues()[k], 1e-9);
    const Eigen::MatrixXd rebuilt = ours.vectors * ours.values.asDiagonal() * ours.vectors.transpose();
    EXPECT_LT((rebuilt - sym).norm(), 1e-9);
  }
}

TEST(JacobiEigen, RejectsNonSymmetricInput) {
  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 3, 4;
  EXPECT_THROW(linalg::jacobi_eigen(m), std::invalid_argument);
  EXPECT_THROW(linalg::jacobi_eigen(Eigen::MatrixXd::Zero(2, 3)), std::invalid_argument);
}

TEST(JacobiSingularValues, MatchesEigenJacobiSvd) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Eigen::MatrixXd a = random_matrix(9, 9, 100 + seed);
    const Eigen::VectorXd ours = linalg::jacobi_singular_values(a);
    const Eigen::JacobiSVD<Eigen::MatrixXd> ref(a);
    for (Eigen::Index k = 0; k < 9; ++k) EXPECT_NEAR(ours[k], ref.singularValues()[k], 1e-9);
  }
}

TEST(AffineSpectrum, ScaledIdentityGivesEqualConstants) {
  const double mu = 0.7;
  const auto s = linalg::affine_spectrum(mu * Eigen::MatrixXd::Identity(6, 6));
  EXPECT_NEAR(s.mu, mu, 1e-12);
  EXPECT_NEAR(s.L, mu, 1e-12);
  EXPECT_NEAR(s.gamma, mu, 1e-12);
  EXPECT_NEAR(s.ell, mu, 1e-12);
}

TEST(AffineSpectrum, PureBilinearRotation) {
  const double a = 2.5;
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(6, 6);
  j.topRightCorner(3, 3) = a * Eigen::MatrixXd::Identity(3, 3);
  j.bottomLeftCorner(3, 3) = -a * Eigen::MatrixXd::Identity(3, 3);
  const auto s = linalg::affine_spectrum(j);
  EXPECT_NEAR(s.mu, 0.0, 1e-12);
  EXPECT_NEAR(s.L, a, 1e-12);
  EXPECT_NEAR(s.gamma, a, 1e-12);
  EXPECT_TRUE(std::isinf(s.ell));
}

TEST(AffineSpectrum, CocoercivityIsTightOnRandomMonotoneMatrix) {
  Eigen::MatrixXd b = random_matrix(5, 5, 9);
  Eigen::MatrixXd skew = random_matrix(5, 5, 10);
  skew = skew - skew.transpose();
  const Eigen::MatrixXd j = b * b.transpose() + 0.1 * Eigen::MatrixXd::Identity(5, 5) + skew;
  const auto s = linalg::affine_spectrum(j);
  // ||J x||^2 <= ell x^T J x for all x, with equality approached somewhere.
  Rng rng(11);
  double best = 0.0;
  for (int k = 0; k < 20000; ++k) {
    Eigen::VectorXd x(5);
    for (int i = 0; i < 5; ++i) x[i] = rng.normal();
    const double ratio = (j * x).squaredNorm() / x.dot(j * x);
    EXPECT_LE(ratio, s.ell * (1 + 1e-9));
    best = std::max(best, ratio);
  }
  // Tightness: ell is the top generalized eigenvalue of (J^T J, sym(J)).
  const Eigen::MatrixXd sym = 0.5 * (j + j.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(j.transpose() * j, sym);
  EXPECT_NEAR(ges.eigenvalues().maxCoeff(), s.ell, 1e-8 * s.ell);
  EXPECT_LE(best, s.ell * (1 + 1e-9));
  EXPECT_LE(s.mu, s.L);
  EXPECT_LE(s.L, s.ell * (1 + 1e-12));
  EXPECT_LE(s.ell, s.L * s.L / s.mu * (1 + 1e-12));
}

}  // namespace
}  // namespace svre
