#pragma once

#include <Eigen/Dense>

namespace svre::linalg {

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Eigenvalues are sorted ascending; column k of `vectors` pairs with
/// `values[k]`.
struct SymmetricEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  int sweeps = 0;
};

// Throws std::invalid_argument for non-square or non-symmetric input
// (relative asymmetry above 1e-12).
SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& symmetric, double tol = 1e-10,
                            int max_sweeps = 100);

/// Singular values (descending) by one-sided Jacobi on the columns.
Eigen::VectorXd jacobi_singular_values(const Eigen::MatrixXd& a, double tol = 1e-10,
                                       int max_sweeps = 100);

Eigen::MatrixXd symmetric_part(const Eigen::MatrixXd& a);

}  // namespace svre::linalg

namespace svre::linalg {

/// Monotonicity constants of an affine operator x -> J x + c.
///  mu     smallest eigenvalue of the symmetric part of J
///  L      spectral norm of J
///  gamma  smallest singular value of J
///  ell    tightest ell with ||J x||^2 <= ell * x^T J x for all x; +inf when
///         no finite ell exists (non-monotone J, or J x != 0 on a direction
///         where x^T J x = 0).
struct AffineSpectrum {
  double mu = 0.0;
  double L = 0.0;
  double gamma = 0.0;
  double ell = 0.0;
};

AffineSpectrum affine_spectrum(const Eigen::MatrixXd& jacobian, double tol = 1e-10);

}  // namespace svre::linalg
