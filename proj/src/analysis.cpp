#include "svre/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "svre/estimators.hpp"
#include "svre/linalg.hpp"
#include "svre/rng.hpp"

namespace svre {

namespace {

void fill_aggregates(OperatorConstants& c, std::size_t n, const std::string& sampling) {
  c.sampling = "uniform";
  c.pi.assign(n, 1.0 / static_cast<double>(n));
  if (c.ell_i.size() != n) {
    c.ell_bar = std::numeric_limits<double>::quiet_NaN();
    c.gamma_bar = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  const bool finite = std::all_of(c.ell_i.begin(), c.ell_i.end(), [](double v) { return std::isfinite(v) && v > 0.0; });
  if (sampling == "lipschitz" && finite) {
    const SamplingScheme s = make_sampling(n, std::span<const double>(c.ell_i));
    c.pi.assign(s.pi().begin(), s.pi().end());
    c.sampling = "lipschitz";
  } else if (sampling != "uniform" && sampling != "lipschitz") {
    throw std::invalid_argument("estimate_constants: unknown sampling '" + sampling + "'");
  }
  c.ell_bar = weighted_aggregate(c.ell_i, c.pi);
  c.gamma_bar = weighted_aggregate(c.gamma_i, c.pi);
}

Point random_point(const FiniteSumGame& game, Rng& rng) {
  Point p = game.zero_point();
  for (Eigen::Index k = 0; k < p.theta.size(); ++k) p.theta[k] = rng.normal();
  for (Eigen::Index k = 0; k < p.phi.size(); ++k) p.phi[k] = rng.normal();
  return p;
}

}  // namespace

OperatorConstants estimate_constants(const FiniteSumGame& game, const ConstantsOptions& options) {
  OperatorConstants c;
  if (options.path == ConstantsPath::kExact) {
    if (!game.is_affine()) throw std::logic_error("estimate_constants: exact path needs an affine game");
    const linalg::AffineSpectrum full = linalg::affine_spectrum(game.affine_full().jacobian);
    c.mu = full.mu;
    c.L = full.L;
    c.gamma = full.gamma;
    c.ell = full.ell;
    if (options.per_sample) {
      for (std::size_t i = 0; i < game.n(); ++i) {
        const linalg::AffineSpectrum s = linalg::affine_spectrum(game.affine_sample(i).jacobian);
        c.mu_i.push_back(s.mu);
        c.L_i.push_back(s.L);
        c.ell_i.push_back(s.ell);
        c.gamma_i.push_back(s.gamma);
      }
    }
    fill_aggregates(c, game.n(), options.sampling);
    return c;
  }

  c.exact = false;
  Rng rng(derive_seed(options.seed, Stream::kAnalysis));
  c.mu = std::numeric_limits<double>::infinity();
  c.gamma = std::numeric_limits<double>::infinity();
  c.L = 0.0;
  c.ell = 0.0;
  for (std::size_t k = 0; k < options.pairs; ++k) {
    const Point a = random_point(game, rng);
    const Point b = random_point(game, rng);
    const Point dw = a - b;
    const Point df = full_operator(game, a) - full_operator(game, b);
    const double dw2 = dw.squared_norm();
    if (dw2 == 0.0) continue;
    const double inner = df.dot(dw);
    const double df2 = df.squared_norm();
    c.mu = std::min(c.mu, inner / dw2);
    c.L = std::max(c.L, std::sqrt(df2 / dw2));
    c.gamma = std::min(c.gamma, std::sqrt(df2 / dw2));
    if (inner > 0.0) {
      c.ell = std::max(c.ell, df2 / inner);
    } else if (df2 > 0.0) {
      c.ell = std::numeric_limits<double>::infinity();
    }
  }
  fill_aggregates(c, game.n(), "uniform");
  return c;
}

double thm1_factor(std::size_t n, std::size_t batch, double eta, double epsilon) {
  if (n == 0 || batch == 0 || batch > n) throw std::invalid_argument("thm1_factor: need 1 <= batch <= n");
  if (!(eta >= 0.0) || !(epsilon >= 0.0) || !std::isfinite(eta) || !std::isfinite(epsilon))
    throw std::invalid_argument("thm1_factor: need finite eta >= 0 and epsilon >= 0");
  const double h = eta / static_cast<double>(batch);
  const double frac = static_cast<double>(batch) / static_cast<double>(n);
  const double grad_gain = (1.0 - h * epsilon) * (1.0 - h * epsilon) + h * h;
  const std::complex<double> lambda(epsilon, -1.0);
  const double eg_gain = std::norm(1.0 - h * lambda + h * h * lambda * lambda);
  return 1.0 + frac * (grad_gain - 1.0) + frac * frac * (eg_gain - grad_gain);
}

namespace {

void check_thm2_inputs(const OperatorConstants& c, std::size_t n, double q) {
  if (n == 0) throw std::invalid_argument("thm2_bound: n must be >= 1");
  if (!(q > 0.0)) throw std::invalid_argument("thm2_bound: q must be > 0");
  if (!(c.mu >= 0.0) || !(c.gamma_bar >= 0.0)) throw std::invalid_argument("thm2_bound: negative or NaN constants");
  if (!(c.ell_bar > 0.0)) throw std::invalid_argument("thm2_bound: ell_bar must be > 0");
}

}  // namespace

ContractionBound thm2_bound(const OperatorConstants& c, double eta_theta, double eta_phi, std::size_t n, double q) {
  check_thm2_inputs(c, n, q);
  if (!(eta_theta > 0.0) || !(eta_phi > 0.0)) throw std::invalid_argument("thm2_bound: step sizes must be > 0");
  ContractionBound out;
  const double limit = 1.0 / (40.0 * c.ell_bar);
  if (eta_theta > limit * (1.0 + 1e-12) || eta_phi > limit * (1.0 + 1e-12)) {
    out.claimed = false;
    out.warning = "step size exceeds 1/(40 ell_bar); the contraction factor is not guaranteed";
  }
  const double g2 = c.gamma_bar * c.gamma_bar;
  const double player_theta = eta_theta * c.mu / 4.0 + 11.0 * eta_theta * eta_theta * g2 / 25.0;
  const double player_phi = eta_phi * c.mu / 4.0 + 11.0 * eta_phi * eta_phi * g2 / 25.0;
  const double epoch = 2.0 * q / (5.0 * static_cast<double>(n));
  out.factor = 1.0 - std::min({player_theta, player_phi, epoch});
  return out;
}

double thm2_reference_factor(const OperatorConstants& c, std::size_t n, double q) {
  check_thm2_inputs(c, n, q);
  const double player =
      (c.mu / (2.0 * c.ell_bar) + c.gamma_bar * c.gamma_bar / (25.0 * c.ell_bar * c.ell_bar)) / 80.0;
  return 1.0 - std::min(player, 2.0 * q / (5.0 * static_cast<double>(n)));
}

SMETracker::SMETracker(double decay) : decay_(decay) {
  if (!(decay >= 0.0 && decay < 1.0)) throw std::invalid_argument("SMETracker: decay must lie in [0, 1)");
}

void SMETracker::update(const Eigen::VectorXd& g) {
  if (t_ == 0) {
    v_ = Eigen::VectorXd::Zero(g.size());
  } else if (g.size() != v_.size()) {
    throw std::invalid_argument("SMETracker: gradient dimension changed");
  }
  v_ = decay_ * v_ + (1.0 - decay_) * g.cwiseProduct(g);
  ++t_;
}

double SMETracker::value() const {
  if (t_ == 0 || v_.size() == 0) return 0.0;
  const double correction = 1.0 - std::pow(decay_, static_cast<double>(t_));
  return v_.mean() / correction;
}

}  // namespace svre
