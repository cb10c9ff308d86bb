#include "svre/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace svre::linalg {

Eigen::MatrixXd symmetric_part(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("symmetric_part: matrix is not square");
  return 0.5 * (a + a.transpose());
}

namespace {

double off_diagonal_norm(const Eigen::MatrixXd& a) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) sum += a(i, j) * a(i, j);
  return std::sqrt(sum);
}

}  // namespace

SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& symmetric, double tol, int max_sweeps) {
  const Eigen::Index n = symmetric.rows();
  if (n != symmetric.cols()) throw std::invalid_argument("jacobi_eigen: matrix is not square");
  const double scale = std::max(symmetric.cwiseAbs().maxCoeff(), 1e-300);
  if ((symmetric - symmetric.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("jacobi_eigen: matrix is not symmetric");

  Eigen::MatrixXd a = symmetric;
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double frob = std::max(a.norm(), 1e-300);
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_norm(a) <= tol * frob) break;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation angle that zeroes a(p, q) (Golub & Van Loan, sym.schur2).
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index l, Eigen::Index r) { return a(l, l) < a(r, r); });

  SymmetricEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    out.vectors.col(k) = v.col(order[k]);
  }
  out.sweeps = sweep;
  return out;
}

Eigen::VectorXd jacobi_singular_values(const Eigen::MatrixXd& input, double tol, int max_sweeps) {
  // Work on the taller orientation so that columns are the short side.
  Eigen::MatrixXd u = input.rows() >= input.cols() ? input : Eigen::MatrixXd(input.transpose());
  const Eigen::Index cols = u.cols();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (Eigen::Index p = 0; p < cols - 1; ++p) {
      for (Eigen::Index q = p + 1; q < cols; ++q) {
        const double alpha = u.col(p).squaredNorm();
        const double beta = u.col(q).squaredNorm();
        const double gamma = u.col(p).dot(u.col(q));
        if (gamma == 0.0 || std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (Eigen::Index k = 0; k < u.rows(); ++k) {
          const double ukp = u(k, p);
          const double ukq = u(k, q);
          u(k, p) = c * ukp - s * ukq;
          u(k, q) = s * ukp + c * ukq;
        }
      }
    }
    if (!rotated) break;
  }
  Eigen::VectorXd sv(cols);
  for (Eigen::Index k = 0; k < cols; ++k) sv[k] = u.col(k).norm();
  std::sort(sv.data(), sv.data() + cols, std::greater<>());
  return sv;
}

}  // namespace svre::linalg

namespace svre::linalg {

AffineSpectrum affine_spectrum(const Eigen::MatrixXd& jacobian, double tol) {
  if (jacobian.rows() != jacobian.cols() || jacobian.rows() == 0)
    throw std::invalid_argument("affine_spectrum: Jacobian must be square and non-empty");
  AffineSpectrum out;
  const SymmetricEigen sym = jacobi_eigen(symmetric_part(jacobian), tol);
  const Eigen::VectorXd sv = jacobi_singular_values(jacobian, tol);
  out.mu = sym.values[0];
  out.L = sv[0];
  out.gamma = sv[sv.size() - 1];

  const double scale = std::max(out.L, 1e-300);
  const double zero_tol = 1e-9 * scale;
  if (out.mu < -zero_tol) {
    out.ell = std::numeric_limits<double>::infinity();
    return out;
  }
  if (out.L == 0.0) {
    out.ell = 0.0;
    return out;
  }
  // Restrict to the range of the symmetric part; J must vanish on its kernel.
  std::vector<Eigen::Index> positive;
  for (Eigen::Index k = 0; k < sym.values.size(); ++k) {
    if (sym.values[k] > zero_tol) {
      positive.push_back(k);
    } else if ((jacobian * sym.vectors.col(k)).norm() > 1e-7 * scale) {
      out.ell = std::numeric_limits<double>::infinity();
      return out;
    }
  }
  const auto rank = static_cast<Eigen::Index>(positive.size());
  Eigen::MatrixXd whiten(jacobian.rows(), rank);
  for (Eigen::Index k = 0; k < rank; ++k)
    whiten.col(k) = sym.vectors.col(positive[k]) / std::sqrt(sym.values[positive[k]]);
  const Eigen::MatrixXd jw = jacobian * whiten;
  Eigen::MatrixXd gram = jw.transpose() * jw;
  gram = symmetric_part(gram);
  out.ell = jacobi_eigen(gram, tol).values[rank - 1];
  return out;
}

}  // namespace svre::linalg
