#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "svre/game.hpp"

namespace svre {

/// Monotonicity constants of a game operator (mean convention).
///
/// On the exact path every value is certified from Jacobian spectra. On the
/// sampled path values come from random pairs and are one-sided: mu and gamma
/// are upper bounds, L and ell are lower bounds; `exact` is false and the
/// per-sample vectors are empty.
struct OperatorConstants {
  bool exact = true;
  double mu = 0.0;     // strong monotonicity of v
  double L = 0.0;      // Lipschitz constant of v
  double gamma = 0.0;  // regularity constant of v
  double ell = 0.0;    // cocoercivity constant of v (+inf if none)
  std::vector<double> mu_i;
  std::vector<double> L_i;
  std::vector<double> ell_i;
  std::vector<double> gamma_i;
  std::string sampling = "uniform";  // scheme used for the aggregates below
  std::vector<double> pi;
  double ell_bar = 0.0;    // sqrt((1/n) sum ell_i^2 / (n pi_i))
  double gamma_bar = 0.0;  // sqrt((1/n) sum gamma_i^2 / (n pi_i))
};

enum class ConstantsPath { kExact, kSampled };

struct ConstantsOptions {
  ConstantsPath path = ConstantsPath::kExact;
  // "uniform", or "lipschitz" for pi_i proportional to ell_i (falls back to
  // uniform when some ell_i is infinite).
  std::string sampling = "uniform";
  bool per_sample = true;
  std::size_t pairs = 10000;  // sampled path only
  std::uint64_t seed = 0;     // sampled path only
};

/// Throws std::logic_error when the exact path is requested for a non-affine
/// game.
OperatorConstants estimate_constants(const FiniteSumGame& game, const ConstantsOptions& options = {});

/// Exact expected one-step multiplier of ||theta||^2 + ||phi||^2 for
/// stochastic extragradient on the bilinear counterexample with `n` samples,
/// mini-batches of size `batch` drawn without replacement (independently for
/// the extrapolation and the update, shared by both players), and step `eta`
/// applied to the mini-batch mean:
///
///   1 + (b/n)(g - 1) + (b/n)^2 (e - g)
///
/// where, with h = eta / b and lambda = eps - i, g = (1 - h eps)^2 + h^2 is the
/// gradient-step gain of a coordinate hit only by the update batch and
/// e = |1 - h lambda + h^2 lambda^2|^2 the extragradient gain of a coordinate
/// hit by both batches. For eps = 0 it reduces to
/// 1 - (b/n)(-h^2) - (b/n)^2 (2h^2 - h^4).
double thm1_factor(std::size_t n, std::size_t batch, double eta, double epsilon);

struct ContractionBound {
  double factor = 1.0;
  // False when a step exceeds 1 / (40 ell_bar); the factor is then reported
  // but carries no guarantee.
  bool claimed = true;
  std::string warning;
};

/// Per-iteration expected contraction of ||omega_t - omega*||^2 for SVRE:
///   1 - min{eta_t mu/4 + 11 eta_t^2 gamma_bar^2/25,
///           eta_p mu/4 + 11 eta_p^2 gamma_bar^2/25, 2q/(5n)}
/// using the same constants for both players.
ContractionBound thm2_bound(const OperatorConstants& constants, double eta_theta, double eta_phi, std::size_t n,
                            double q = 1.0);

/// Closed form quoted for eta = 1/(40 ell_bar):
///   1 - min{(1/80)(mu/(2 ell_bar) + gamma_bar^2/(25 ell_bar^2)), 2q/(5n)}.
/// Its gamma term is 20/11 times the one obtained by substituting the step into
/// thm2_bound, so the two agree only when gamma_bar = 0.
double thm2_reference_factor(const OperatorConstants& constants, std::size_t n, double q = 1.0);

/// Exponentially averaged squared gradient (uncentered second moment) with
/// bias correction; the reported value is the mean over coordinates.
class SMETracker {
 public:
  explicit SMETracker(double decay = 0.9);
  void update(const Eigen::VectorXd& g);
  /// Bias-corrected mean over coordinates; 0 before the first update.
  double value() const;
  std::uint64_t steps() const { return t_; }
  const Eigen::VectorXd& raw() const { return v_; }

 private:
  double decay_;
  Eigen::VectorXd v_;
  std::uint64_t t_ = 0;
};

}  // namespace svre
