#include "svre/game.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "svre/linalg.hpp"
#include "svre/rng.hpp"

namespace svre {

FiniteSumGame::FiniteSumGame(std::size_t n, Eigen::Index d_theta, Eigen::Index d_phi)
    : n_(n), d_theta_(d_theta), d_phi_(d_phi) {
  if (n == 0) throw std::invalid_argument("game: sample count must be at least 1");
  if (d_theta <= 0 || d_phi <= 0) throw std::invalid_argument("game: player dimensions must be positive");
}

AffineSample FiniteSumGame::affine_sample(std::size_t) const {
  throw std::logic_error(kind() + ": game is not affine");
}

AffineSample FiniteSumGame::affine_full() const {
  AffineSample mean{Eigen::MatrixXd::Zero(dim(), dim()), Eigen::VectorXd::Zero(dim())};
  for (std::size_t i = 0; i < n_; ++i) {
    const AffineSample s = affine_sample(i);
    mean.jacobian += s.jacobian;
    mean.offset += s.offset;
  }
  const double inv = 1.0 / static_cast<double>(n_);
  mean.jacobian *= inv;
  mean.offset *= inv;
  return mean;
}

Point FiniteSumGame::solve_affine_nash() const {
  const AffineSample full = affine_full();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(full.jacobian);
  if (!lu.isInvertible()) throw std::runtime_error(kind() + ": singular Jacobian, Nash equilibrium not unique");
  return Point::split(lu.solve(-full.offset), d_theta_);
}

void check_point(const FiniteSumGame& game, const Point& omega, const char* what) {
  if (omega.theta.size() != game.d_theta() || omega.phi.size() != game.d_phi())
    throw std::invalid_argument(std::string(what) + ": dimension mismatch with game");
  if (!omega.all_finite()) throw std::invalid_argument(std::string(what) + ": non-finite iterate");
}

Point sample_operator(const FiniteSumGame& game, std::size_t i, const Point& omega) {
  check_point(game, omega, "sample_operator");
  if (i >= game.n()) throw std::out_of_range("sample_operator: index out of range");
  Point out = game.zero_point();
  game.sample_operator_into(i, omega, out);
  return out;
}

Point full_operator(const FiniteSumGame& game, const Point& omega) {
  check_point(game, omega, "full_operator");
  Point sum = game.zero_point();
  Point tmp = game.zero_point();
  for (std::size_t i = 0; i < game.n(); ++i) {
    game.sample_operator_into(i, omega, tmp);
    sum += tmp;
  }
  sum *= 1.0 / static_cast<double>(game.n());
  return sum;
}

Point minibatch_operator(const FiniteSumGame& game, std::span<const std::size_t> indices, const Point& omega) {
  check_point(game, omega, "minibatch_operator");
  if (indices.empty()) throw std::invalid_argument("minibatch_operator: empty index set");
  std::unordered_set<std::size_t> seen;
  for (std::size_t i : indices) {
    if (i >= game.n()) throw std::out_of_range("minibatch_operator: index out of range");
    if (!seen.insert(i).second) throw std::invalid_argument("minibatch_operator: duplicate index");
  }
  Point sum = game.zero_point();
  Point tmp = game.zero_point();
  for (std::size_t i : indices) {
    game.sample_operator_into(i, omega, tmp);
    sum += tmp;
  }
  sum *= 1.0 / static_cast<double>(indices.size());
  return sum;
}

double distance_to_nash(const FiniteSumGame& game, const Point& omega) {
  if (!game.nash()) throw std::logic_error("distance_to_nash: Nash equilibrium unknown for " + game.kind());
  return distance(omega, *game.nash());
}

namespace {

// ---------------------------------------------------------------------------

class BilinearCounterexample final : public FiniteSumGame {
 public:
  explicit BilinearCounterexample(const BilinearCounterexampleSpec& spec)
      : FiniteSumGame(spec.n, static_cast<Eigen::Index>(spec.n), static_cast<Eigen::Index>(spec.n)),
        eps_(spec.epsilon) {
    if (!(spec.epsilon >= 0.0) || !std::isfinite(spec.epsilon))
      throw std::invalid_argument("bilinear counterexample: epsilon must be finite and >= 0");
    set_nash(zero_point());
    const auto nd = static_cast<double>(spec.n);
    GameConstants& c = mutable_constants();
    c.mu = eps_ / nd;
    c.mu_quoted = eps_ / 2.0;
    c.L = std::sqrt(1.0 + eps_ * eps_) / nd;
    c.gamma = std::sqrt(1.0 + eps_ * eps_) / nd;
    const double Li = std::sqrt(1.0 + eps_ * eps_);
    const double elli = eps_ > 0.0 ? (1.0 + eps_ * eps_) / eps_ : std::numeric_limits<double>::infinity();
    c.L_i.assign(spec.n, Li);
    c.ell_i.assign(spec.n, elli);
    c.gamma_i.assign(spec.n, spec.n == 1 ? Li : 0.0);
    c.note = "mu is eps/n for the mean operator; mu_quoted = eps/2 is the modulus usually stated for this instance";
  }

  std::string kind() const override { return "bilinear_counterexample"; }

  void sample_operator_into(std::size_t i, const Point& w, Point& out) const override {
    out.set_zero();
    const auto k = static_cast<Eigen::Index>(i);
    out.theta[k] = eps_ * w.theta[k] + w.phi[k];
    out.phi[k] = eps_ * w.phi[k] - w.theta[k];
  }

  bool is_affine() const override { return true; }

  AffineSample affine_sample(std::size_t i) const override {
    const Eigen::Index d = d_theta();
    const auto k = static_cast<Eigen::Index>(i);
    AffineSample s{Eigen::MatrixXd::Zero(2 * d, 2 * d), Eigen::VectorXd::Zero(2 * d)};
    s.jacobian(k, k) = eps_;
    s.jacobian(k, d + k) = 1.0;
    s.jacobian(d + k, d + k) = eps_;
    s.jacobian(d + k, k) = -1.0;
    return s;
  }

  AffineSample affine_full() const override {
    const Eigen::Index d = d_theta();
    const double inv = 1.0 / static_cast<double>(n());
    AffineSample s{Eigen::MatrixXd::Zero(2 * d, 2 * d), Eigen::VectorXd::Zero(2 * d)};
    for (Eigen::Index k = 0; k < d; ++k) {
      s.jacobian(k, k) = eps_ * inv;
      s.jacobian(k, d + k) = inv;
      s.jacobian(d + k, d + k) = eps_ * inv;
      s.jacobian(d + k, k) = -inv;
    }
    return s;
  }

 private:
  double eps_;
};

// ---------------------------------------------------------------------------

class AffineBilinear final : public FiniteSumGame {
 public:
  explicit AffineBilinear(const AffineBilinearSpec& spec)
      : FiniteSumGame(spec.n, static_cast<Eigen::Index>(spec.d), static_cast<Eigen::Index>(spec.d)) {
    if (spec.n != spec.d) throw std::invalid_argument("affine bilinear: requires n == d");
    Rng rng = make_stream(spec.seed, Stream::kProblem);
    const double sd = 1.0 / std::sqrt(static_cast<double>(spec.d));
    const auto d = static_cast<Eigen::Index>(spec.d);
    b_.resize(spec.n, Eigen::VectorXd(d));
    c_.resize(spec.n, Eigen::VectorXd(d));
    // All b_i first, then all c_i; each vector filled in coordinate order.
    for (auto& b : b_)
      for (Eigen::Index k = 0; k < d; ++k) b[k] = rng.normal(0.0, sd);
    for (auto& c : c_)
      for (Eigen::Index k = 0; k < d; ++k) c[k] = rng.normal(0.0, sd);
    finish();
  }

  AffineBilinear(std::vector<Eigen::VectorXd> b, std::vector<Eigen::VectorXd> c)
      : FiniteSumGame(b.size(), b.empty() ? 0 : b.front().size(), b.empty() ? 0 : b.front().size()),
        b_(std::move(b)),
        c_(std::move(c)) {
    if (b_.size() != static_cast<std::size_t>(d_theta()) || c_.size() != b_.size())
      throw std::invalid_argument("affine bilinear: requires n == d and matching b, c");
    for (std::size_t i = 0; i < b_.size(); ++i)
      if (b_[i].size() != d_theta() || c_[i].size() != d_theta())
        throw std::invalid_argument("affine bilinear: b_i and c_i must have dimension d");
    finish();
  }

  std::string kind() const override { return "affine_bilinear"; }

  // F_i = (b_i + phi_i e_i, -c_i - theta_i e_i): the phi part is the negated
  // gradient of the shared loss.
  void sample_operator_into(std::size_t i, const Point& w, Point& out) const override {
    const auto k = static_cast<Eigen::Index>(i);
    out.theta = b_[i];
    out.theta[k] += w.phi[k];
    out.phi = -c_[i];
    out.phi[k] -= w.theta[k];
  }

  bool is_affine() const override { return true; }

  AffineSample affine_sample(std::size_t i) const override {
    const Eigen::Index d = d_theta();
    const auto k = static_cast<Eigen::Index>(i);
    AffineSample s{Eigen::MatrixXd::Zero(2 * d, 2 * d), Eigen::VectorXd(2 * d)};
    s.jacobian(k, d + k) = 1.0;
    s.jacobian(d + k, k) = -1.0;
    s.offset << b_[i], -c_[i];
    return s;
  }

  AffineSample affine_full() const override {
    const Eigen::Index d = d_theta();
    const double inv = 1.0 / static_cast<double>(n());
    AffineSample s{Eigen::MatrixXd::Zero(2 * d, 2 * d), Eigen::VectorXd::Zero(2 * d)};
    for (Eigen::Index k = 0; k < d; ++k) {
      s.jacobian(k, d + k) = inv;
      s.jacobian(d + k, k) = -inv;
    }
    Eigen::VectorXd bsum = Eigen::VectorXd::Zero(d), csum = Eigen::VectorXd::Zero(d);
    for (std::size_t i = 0; i < n(); ++i) {
      bsum += b_[i];
      csum += c_[i];
    }
    s.offset << inv * bsum, -inv * csum;
    return s;
  }

  const std::vector<Eigen::VectorXd>& b() const { return b_; }
  const std::vector<Eigen::VectorXd>& c() const { return c_; }

 private:
  void finish() {
    set_nash(solve_affine_nash());
    const double inv = 1.0 / static_cast<double>(n());
    GameConstants& c = mutable_constants();
    c.mu = 0.0;
    c.L = inv;
    c.gamma = inv;
    c.L_i.assign(n(), 1.0);
    c.ell_i.assign(n(), std::numeric_limits<double>::infinity());
    c.gamma_i.assign(n(), n() == 1 ? 1.0 : 0.0);
    c.note = "monotone but not strongly monotone; per-sample operators are not cocoercive";
  }

  std::vector<Eigen::VectorXd> b_;
  std::vector<Eigen::VectorXd> c_;
};

// ---------------------------------------------------------------------------

Eigen::MatrixXd random_orthogonal(Eigen::Index d, Rng& rng) {
  Eigen::MatrixXd g(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < d; ++k)
    if (r(k, k) < 0.0) q.col(k) *= -1.0;
  return q;
}

Eigen::VectorXd even_spectrum(Eigen::Index d, double lo, double hi) {
  Eigen::VectorXd s(d);
  if (d == 1) {
    s[0] = lo;
    return s;
  }
  for (Eigen::Index k = 0; k < d; ++k) s[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(d - 1);
  return s;
}

class QuadraticGame final : public FiniteSumGame {
 public:
  explicit QuadraticGame(const QuadraticGameSpec& spec)
      : FiniteSumGame(spec.n, static_cast<Eigen::Index>(spec.d), static_cast<Eigen::Index>(spec.d)) {
    if (!std::isfinite(spec.mu) || !std::isfinite(spec.L) || !(spec.mu > 0.0) || spec.mu > spec.L)
      throw std::invalid_argument("quadratic game: requires finite 0 < mu <= L");
    if (!(spec.spread >= 0.0 && spec.spread < 1.0)) throw std::invalid_argument("quadratic game: spread must lie in [0, 1)");
    if (!(spec.offset_scale >= 0.0) || !std::isfinite(spec.offset_scale))
      throw std::invalid_argument("quadratic game: offset_scale must be finite and >= 0");
    const auto d = static_cast<Eigen::Index>(spec.d);
    Rng rng = make_stream(spec.seed, Stream::kProblem);

    const Eigen::MatrixXd qf = random_orthogonal(d, rng);
    const Eigen::MatrixXd qg = random_orthogonal(d, rng);
    const Eigen::VectorXd spectrum = even_spectrum(d, spec.mu, spec.L);
    const Eigen::MatrixXd hf = linalg::symmetric_part(qf * spectrum.asDiagonal() * qf.transpose());
    const Eigen::MatrixXd hg = linalg::symmetric_part(qg * spectrum.asDiagonal() * qg.transpose());

    Eigen::MatrixXd m;
    if (spec.coupling_matrix) {
      m = *spec.coupling_matrix;
      if (m.rows() != d || m.cols() != d) throw std::invalid_argument("quadratic game: coupling matrix must be d x d");
      if (!m.allFinite()) throw std::invalid_argument("quadratic game: non-finite coupling matrix");
    } else {
      const double target = spec.coupling.value_or(std::sqrt(spec.mu * spec.L));
      if (!(target >= 0.0) || !std::isfinite(target)) throw std::invalid_argument("quadratic game: coupling must be finite and >= 0");
      const Eigen::MatrixXd u = random_orthogonal(d, rng);
      const Eigen::MatrixXd v = random_orthogonal(d, rng);
      const Eigen::VectorXd sigma = even_spectrum(d, d == 1 ? target : 0.5 * target, target);
      m = u * sigma.asDiagonal() * v.transpose();
    }

    jacobian_.resize(2 * d, 2 * d);
    jacobian_ << hf, m, -m.transpose(), hg;

    weights_.assign(spec.n, 1.0);
    offsets_.assign(spec.n, Eigen::VectorXd::Zero(2 * d));
    for (std::size_t i = 0; i + 1 < spec.n; i += 2) {
      const double r = spec.spread * (2.0 * rng.uniform() - 1.0);
      weights_[i] = 1.0 + r;
      weights_[i + 1] = 1.0 - r;
      Eigen::VectorXd z(2 * d);
      for (Eigen::Index k = 0; k < 2 * d; ++k) z[k] = rng.normal(0.0, spec.offset_scale);
      offsets_[i] = z;
      offsets_[i + 1] = -z;
    }

    set_nash(zero_point());
    const linalg::AffineSpectrum full = linalg::affine_spectrum(jacobian_);
    GameConstants& c = mutable_constants();
    c.mu = full.mu;
    c.L = full.L;
    c.gamma = linalg::jacobi_singular_values(m).minCoeff();
    for (double s : weights_) {
      c.L_i.push_back(s * full.L);
      c.ell_i.push_back(s * full.ell);
      c.gamma_i.push_back(s * full.gamma);
    }
    c.note = "gamma is the smallest singular value of the coupling M; per-sample constants scale with the sample weight";
  }

  std::string kind() const override { return "quadratic"; }

  void sample_operator_into(std::size_t i, const Point& w, Point& out) const override {
    const Eigen::Index d = d_theta();
    out.theta.noalias() = jacobian_.topLeftCorner(d, d) * w.theta + jacobian_.topRightCorner(d, d) * w.phi;
    out.phi.noalias() = jacobian_.bottomLeftCorner(d, d) * w.theta + jacobian_.bottomRightCorner(d, d) * w.phi;
    out.theta *= weights_[i];
    out.phi *= weights_[i];
    out.theta += offsets_[i].head(d);
    out.phi += offsets_[i].tail(d);
  }

  bool is_affine() const override { return true; }

  AffineSample affine_sample(std::size_t i) const override { return {weights_[i] * jacobian_, offsets_[i]}; }

 private:
  Eigen::MatrixXd jacobian_;
  std::vector<double> weights_;
  std::vector<Eigen::VectorXd> offsets_;
};

// ---------------------------------------------------------------------------

class DenseAffineGame final : public FiniteSumGame {
 public:
  DenseAffineGame(Eigen::Index d_theta, Eigen::Index d_phi, std::vector<AffineSample> samples, std::string kind)
      : FiniteSumGame(samples.size(), d_theta, d_phi), samples_(std::move(samples)), kind_(std::move(kind)) {
    for (const AffineSample& s : samples_) {
      if (s.jacobian.rows() != dim() || s.jacobian.cols() != dim() || s.offset.size() != dim())
        throw std::invalid_argument("dense affine game: sample shape mismatch");
      if (!s.jacobian.allFinite() || !s.offset.allFinite())
        throw std::invalid_argument("dense affine game: non-finite sample");
    }
    const AffineSample full = affine_full();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(full.jacobian);
    if (lu.isInvertible()) {
      set_nash(Point::split(lu.solve(-full.offset), d_theta));
    } else if (full.offset.isZero(0.0)) {
      set_nash(zero_point());
    }
  }

  std::string kind() const override { return kind_; }

  void sample_operator_into(std::size_t i, const Point& w, Point& out) const override {
    const AffineSample& s = samples_[i];
    const Eigen::Index d = d_theta();
    out.theta.noalias() = s.jacobian.topLeftCorner(d, d) * w.theta + s.jacobian.topRightCorner(d, d_phi()) * w.phi;
    out.phi.noalias() = s.jacobian.bottomLeftCorner(d_phi(), d) * w.theta +
                        s.jacobian.bottomRightCorner(d_phi(), d_phi()) * w.phi;
    out.theta += s.offset.head(d);
    out.phi += s.offset.tail(d_phi());
  }

  bool is_affine() const override { return true; }
  AffineSample affine_sample(std::size_t i) const override { return samples_[i]; }

 private:
  std::vector<AffineSample> samples_;
  std::string kind_;
};

}  // namespace

GamePtr make_bilinear_counterexample(const BilinearCounterexampleSpec& spec) {
  return std::make_shared<BilinearCounterexample>(spec);
}

GamePtr make_affine_bilinear(const AffineBilinearSpec& spec) {
  if (spec.n == 0 || spec.d == 0) throw std::invalid_argument("affine bilinear: requires n = d >= 1");
  return std::make_shared<AffineBilinear>(spec);
}

GamePtr make_affine_bilinear_from(std::vector<Eigen::VectorXd> b, std::vector<Eigen::VectorXd> c) {
  return std::make_shared<AffineBilinear>(std::move(b), std::move(c));
}

GamePtr make_quadratic_game(const QuadraticGameSpec& spec) {
  if (spec.d == 0) throw std::invalid_argument("quadratic game: d must be >= 1");
  return std::make_shared<QuadraticGame>(spec);
}

GamePtr make_dense_affine_game(Eigen::Index d_theta, Eigen::Index d_phi, std::vector<AffineSample> samples,
                               std::string kind) {
  return std::make_shared<DenseAffineGame>(d_theta, d_phi, std::move(samples), std::move(kind));
}

}  // namespace svre
