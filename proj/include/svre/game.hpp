#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "svre/point.hpp"

namespace svre {

/// Constants recorded when a game is built. Everything is expressed for the
/// mean operator v = (1/n) sum_i F_i.
struct GameConstants {
  std::optional<double> mu;  // strong monotonicity of v
  // Strong-monotonicity modulus as usually quoted for the counterexample
  // (eps / 2), kept next to `mu` because the two scalings differ by n / 2.
  std::optional<double> mu_quoted;
  std::optional<double> L;      // Lipschitz constant of v
  std::optional<double> gamma;  // regularity constant (see note)
  std::vector<double> L_i;      // per-sample Lipschitz constants
  std::vector<double> ell_i;    // per-sample cocoercivity constants (+inf if none)
  std::vector<double> gamma_i;  // per-sample regularity constants
  std::string note;
};

/// F_i(omega) = jacobian * [theta; phi] + offset.
struct AffineSample {
  Eigen::MatrixXd jacobian;
  Eigen::VectorXd offset;
};

/// A finite-sum game: n per-sample operators F_i whose mean is the game
/// operator v. Indices are 0-based. Instances are immutable once built, so a
/// single game may back any number of concurrent runs.
class FiniteSumGame {
 public:
  virtual ~FiniteSumGame() = default;

  std::size_t n() const { return n_; }
  Eigen::Index d_theta() const { return d_theta_; }
  Eigen::Index d_phi() const { return d_phi_; }
  Eigen::Index dim() const { return d_theta_ + d_phi_; }
  const std::optional<Point>& nash() const { return nash_; }
  const GameConstants& constants() const { return constants_; }
  Point zero_point() const { return Point::zeros(d_theta_, d_phi_); }

  virtual std::string kind() const = 0;

  /// Writes F_i(omega) into `out`, which must already have the game's shape.
  /// Unchecked: callers validate index and shape.
  virtual void sample_operator_into(std::size_t i, const Point& omega, Point& out) const = 0;

  virtual bool is_affine() const { return false; }
  /// Dense affine form of F_i; throws std::logic_error for non-affine games.
  virtual AffineSample affine_sample(std::size_t i) const;
  /// Dense affine form of the mean operator.
  virtual AffineSample affine_full() const;

 protected:
  FiniteSumGame(std::size_t n, Eigen::Index d_theta, Eigen::Index d_phi);

  void set_nash(Point nash) { nash_ = std::move(nash); }
  GameConstants& mutable_constants() { return constants_; }
  // Solves v(omega) = 0 for affine games through an LU factorization.
  Point solve_affine_nash() const;

 private:
  std::size_t n_;
  Eigen::Index d_theta_;
  Eigen::Index d_phi_;
  std::optional<Point> nash_;
  GameConstants constants_;
};

using GamePtr = std::shared_ptr<const FiniteSumGame>;

// ---------------------------------------------------------------------------
// Built-in problem families.

/// Per-sample loss (eps/2) theta_i^2 + theta^T A_i phi - (eps/2) phi_i^2 with
/// A_i = e_i e_i^T, d = n. Nash equilibrium at the origin.
struct BilinearCounterexampleSpec {
  std::size_t n = 2;
  double epsilon = 0.0;
};

/// min_theta max_phi (1/n) sum_i theta^T b_i + theta^T A_i phi + c_i^T phi
/// with A_i = e_i e_i^T and b_i, c_i ~ N(0, 1/d) i.i.d.
struct AffineBilinearSpec {
  std::size_t n = 100;
  std::size_t d = 100;
  std::uint64_t seed = 0;
};

/// F(omega) = (grad f(theta) + M phi, grad g(phi) - M^T theta), f and g
/// quadratic with Hessian spectra spread evenly over [mu, L].
///
/// Per-sample split: F_i(omega) = s_i * J omega + c_i where J is the Jacobian
/// of F, the weights s_i come in pairs (1 + r, 1 - r) with r ~ U[-spread,
/// spread] (a trailing unpaired sample gets s = 1), and the offsets c_i come
/// in pairs (+z, -z) with z ~ N(0, offset_scale^2 I). Weights average to one
/// and offsets to zero, so v = J omega and the Nash equilibrium is the
/// origin, while the samples still disagree both in curvature and at the
/// solution.
struct QuadraticGameSpec {
  std::size_t d = 20;
  std::size_t n = 20;
  double mu = 0.1;
  double L = 1.0;
  // Target spectral norm of M (singular values evenly spaced over
  // [coupling/2, coupling]); defaults to sqrt(mu * L).
  std::optional<double> coupling;
  // Explicit d x d coupling matrix; overrides `coupling` when set.
  std::optional<Eigen::MatrixXd> coupling_matrix;
  double spread = 0.5;
  double offset_scale = 1.0;
  std::uint64_t seed = 0;
};

GamePtr make_bilinear_counterexample(const BilinearCounterexampleSpec& spec);
GamePtr make_affine_bilinear(const AffineBilinearSpec& spec);
/// Affine bilinear game from explicit offsets (b_i, c_i); n = d = b.size().
GamePtr make_affine_bilinear_from(std::vector<Eigen::VectorXd> b, std::vector<Eigen::VectorXd> c);
GamePtr make_quadratic_game(const QuadraticGameSpec& spec);

/// General affine finite-sum game from explicit per-sample (J_i, c_i). Used
/// for hand-built instances (isotropic bilinear, scaled identity, zero game).
GamePtr make_dense_affine_game(Eigen::Index d_theta, Eigen::Index d_phi, std::vector<AffineSample> samples,
                               std::string kind = "dense_affine");

// ---------------------------------------------------------------------------
// Operator evaluation. All of these validate shapes and indices and reject
// non-finite iterates with std::invalid_argument / std::out_of_range.

Point sample_operator(const FiniteSumGame& game, std::size_t i, const Point& omega);
/// (1/n) sum_i F_i(omega), summed in index order.
Point full_operator(const FiniteSumGame& game, const Point& omega);
/// (1/|I|) sum_{i in I} F_i(omega), summed in the order given. Rejects an
/// empty or repeated index set.
Point minibatch_operator(const FiniteSumGame& game, std::span<const std::size_t> indices, const Point& omega);
/// Euclidean distance to the recorded Nash equilibrium; throws
/// std::logic_error when the game has none.
double distance_to_nash(const FiniteSumGame& game, const Point& omega);

void check_point(const FiniteSumGame& game, const Point& omega, const char* what);

}  // namespace svre
