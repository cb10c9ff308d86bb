#include "svre/optimizers.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace svre {

std::string to_string(Method method) {
  switch (method) {
    case Method::kSimGD: return "simgd";
    case Method::kAltGD: return "altgd";
    case Method::kEGBatch: return "eg_batch";
    case Method::kEGStochastic: return "eg_stochastic";
    case Method::kSVRE: return "svre";
    case Method::kSVRERestarted: return "svre_restarted";
    case Method::kSVRGBaseline: return "svrg";
  }
  return "unknown";
}

Method method_from_string(const std::string& name) {
  for (Method m : {Method::kSimGD, Method::kAltGD, Method::kEGBatch, Method::kEGStochastic, Method::kSVRE,
                   Method::kSVRERestarted, Method::kSVRGBaseline}) {
    if (to_string(m) == name) return m;
  }
  throw std::invalid_argument("unknown method '" + name + "'");
}

bool is_variance_reduced(Method method) {
  return method == Method::kSVRE || method == Method::kSVRERestarted || method == Method::kSVRGBaseline;
}

std::string to_string(RunStatus status) { return status == RunStatus::kCompleted ? "completed" : "diverged"; }

void validate(const RunConfig& c, const FiniteSumGame& game) {
  validate(c.policy);
  if (!c.max_iterations && !c.max_passes) throw std::invalid_argument("run: no iteration or pass budget");
  if (c.max_passes && !(*c.max_passes >= 0.0 && std::isfinite(*c.max_passes)))
    throw std::invalid_argument("run: max_passes must be finite and >= 0");
  if (c.record_every == 0) throw std::invalid_argument("run: record_every must be >= 1");
  if (c.batch_size == 0 || c.batch_size > game.n()) throw std::invalid_argument("run: need 1 <= batch_size <= n");
  if (c.geom_param && !(*c.geom_param > 0.0 && *c.geom_param <= 1.0))
    throw std::invalid_argument("run: geom_param must lie in (0, 1]");
  if (!(c.restart_p >= 0.0 && c.restart_p <= 1.0)) throw std::invalid_argument("run: restart_p must lie in [0, 1]");
  if (!c.sampling_weights.empty() && c.sampling_weights.size() != game.n())
    throw std::invalid_argument("run: sampling_weights must have n entries");
  if (!(c.sme_decay >= 0.0 && c.sme_decay < 1.0)) throw std::invalid_argument("run: sme_decay must lie in [0, 1)");
  if (!(c.init_scale >= 0.0) || !std::isfinite(c.init_scale))
    throw std::invalid_argument("run: init_scale must be finite and >= 0");
  if (!(c.divergence_threshold > 0.0)) throw std::invalid_argument("run: divergence_threshold must be > 0");
  if (c.init) check_point(game, *c.init, "run init");
  if (is_variance_reduced(c.method) && c.policy.kind == PolicyKind::kAdam)
    throw std::invalid_argument("run: variance reduced methods take a constant or vrad policy");
  if (c.memorization == Memorization::kSaga && c.method == Method::kSVRERestarted)
    throw std::invalid_argument("run: saga memorization has no epochs to restart");
}

void IterateAverage::reset(const Point& omega) {
  mean_ = omega;
  count_ = 1;
}

void IterateAverage::add(const Point& omega) {
  const double w = 1.0 / static_cast<double>(count_ + 1);
  // Incremental form: exact when omega equals the current mean.
  mean_.theta += w * (omega.theta - mean_.theta);
  mean_.phi += w * (omega.phi - mean_.phi);
  ++count_;
}

namespace {

SamplingScheme scheme_for(const RunConfig& c, std::size_t n) {
  if (c.sampling_weights.empty()) return make_sampling(n);
  return make_sampling(n, std::span<const double>(c.sampling_weights));
}

Point initial_point(const FiniteSumGame& game, const RunConfig& c) {
  if (c.init) return *c.init;
  Point p = game.zero_point();
  if (c.init_scale > 0.0) {
    Rng rng = make_stream(c.seed, Stream::kInit);
    for (Eigen::Index k = 0; k < p.theta.size(); ++k) p.theta[k] = rng.normal(0.0, c.init_scale);
    for (Eigen::Index k = 0; k < p.phi.size(); ++k) p.phi[k] = rng.normal(0.0, c.init_scale);
  }
  return p;
}

double nash_distance_or_nan(const FiniteSumGame& game, const Point& omega) {
  if (!game.nash()) return std::numeric_limits<double>::quiet_NaN();
  return distance(omega, *game.nash());
}

}  // namespace

OptimizerRun::OptimizerRun(GamePtr game, RunConfig config)
    : game_(std::move(game)),
      config_(std::move(config)),
      scheme_(scheme_for(config_, game_->n())),
      policy_(config_.policy, game_->d_theta(), game_->d_phi()),
      epoch_rng_(make_stream(config_.seed, Stream::kEpochLength)),
      extrap_rng_(make_stream(config_.seed, Stream::kExtrapolationIndex)),
      update_rng_(make_stream(config_.seed, Stream::kUpdateIndex)),
      restart_rng_(make_stream(config_.seed, Stream::kRestartCoin)),
      sme_theta_(config_.sme_decay),
      sme_phi_(config_.sme_decay) {
  if (config_.init) check_point(*game_, *config_.init, "run init");
  omega_ = initial_point(*game_, config_);
  omega_half_ = game_->zero_point();
  raw_ = game_->zero_point();
  step_ = game_->zero_point();
  scratch_ = game_->zero_point();
  est_ = game_->zero_point();
  average_.reset(omega_);
  refresh_counts_.assign(game_->n(), 0);
  perm_.resize(game_->n());
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  trace_.method = to_string(config_.method);
  trace_.seed = config_.seed;
  trace_.n = game_->n();
  trace_.initial_distance = nash_distance_or_nan(*game_, omega_);
}

bool OptimizerRun::budget_left() const {
  if (diverged_) return false;
  if (config_.max_iterations && t_ >= *config_.max_iterations) return false;
  if (config_.max_passes &&
      static_cast<double>(counter_.calls) >= *config_.max_passes * static_cast<double>(game_->n()))
    return false;
  return true;
}

void OptimizerRun::sample_batch(Rng& rng, std::vector<std::size_t>& out) {
  const std::size_t n = perm_.size();
  const std::size_t b = config_.batch_size;
  // Partial Fisher-Yates on a persistent permutation: b distinct indices.
  for (std::size_t k = 0; k < b; ++k) {
    const std::size_t j = k + rng.index(n - k);
    std::swap(perm_[k], perm_[j]);
  }
  out.assign(perm_.begin(), perm_.begin() + static_cast<std::ptrdiff_t>(b));
}

void OptimizerRun::batch_mean_into(std::span<const std::size_t> indices, const Point& at, Point& out) {
  out.set_zero();
  for (std::size_t i : indices) {
    game_->sample_operator_into(i, at, scratch_);
    out += scratch_;
  }
  counter_.calls += indices.size();
  out *= 1.0 / static_cast<double>(indices.size());
}

void OptimizerRun::after_update(const Point& raw_update) {
  ++t_;
  average_.add(omega_);
  sme_theta_.update(raw_update.theta);
  sme_phi_.update(raw_update.phi);
  const double norm = omega_.norm();
  if (!std::isfinite(norm) || norm > config_.divergence_threshold) {
    diverged_ = true;
    record_row();
    return;
  }
  if (t_ % config_.record_every == 0) record_row();
}

void OptimizerRun::record_row() {
  if (!trace_.rows.empty() && trace_.rows.back().iteration == t_) return;
  TraceRow row;
  row.iteration = t_;
  row.oracle_calls = counter_.calls;
  row.distance_to_nash = nash_distance_or_nan(*game_, omega_);
  row.sme_player1 = sme_theta_.value();
  row.sme_player2 = sme_phi_.value();
  row.iterate_norm = omega_.norm();
  row.avg_distance = nash_distance_or_nan(*game_, average_.value());
  row.avg_norm = average_.value().norm();
  trace_.rows.push_back(row);
}

void OptimizerRun::step_gd(bool alternating) {
  if (!alternating) {
    sample_batch(update_rng_, batch_a_);
    batch_mean_into(batch_a_, omega_, raw_);
    policy_.direction_into(raw_, step_);
    omega_ -= step_;
    after_update(raw_);
    return;
  }
  // Player 2 (phi) first, then player 1 at the updated phi.
  sample_batch(update_rng_, batch_a_);
  batch_mean_into(batch_a_, omega_, est_);
  raw_.phi = est_.phi;
  policy_.phi_direction_into(raw_.phi, step_.phi);
  omega_.phi -= step_.phi;
  sample_batch(update_rng_, batch_b_);
  batch_mean_into(batch_b_, omega_, est_);
  raw_.theta = est_.theta;
  policy_.theta_direction_into(raw_.theta, step_.theta);
  omega_.theta -= step_.theta;
  after_update(raw_);
}

void OptimizerRun::step_extragradient_with(std::span<const std::size_t> extrapolation,
                                           std::span<const std::size_t> update) {
  batch_mean_into(extrapolation, omega_, raw_);
  policy_.direction_into(raw_, step_);
  omega_half_.theta = omega_.theta - step_.theta;
  omega_half_.phi = omega_.phi - step_.phi;
  batch_mean_into(update, omega_half_, raw_);
  policy_.direction_into(raw_, step_);
  omega_ -= step_;
  after_update(raw_);
}

void OptimizerRun::step_extragradient(Oracle oracle) {
  if (oracle == Oracle::kBatch) {
    if (batch_a_.size() != perm_.size()) {
      batch_a_.resize(perm_.size());
      std::iota(batch_a_.begin(), batch_a_.end(), std::size_t{0});
    }
    step_extragradient_with(batch_a_, batch_a_);
    return;
  }
  sample_batch(extrap_rng_, batch_a_);
  sample_batch(update_rng_, batch_b_);
  step_extragradient_with(batch_a_, batch_b_);
}

void OptimizerRun::vr_half_step(Rng& rng, const Point& at, Point& out) {
  // Independent indices for the two players.
  last_update_theta_ = scheme_.sample(rng);
  last_update_phi_ = scheme_.sample(rng);
  vr_estimate_into(*game_, *table_, scheme_, last_update_theta_, at, scratch_, est_, &counter_);
  out.theta = est_.theta;
  vr_estimate_into(*game_, *table_, scheme_, last_update_phi_, at, scratch_, est_, &counter_);
  out.phi = est_.phi;
}

void OptimizerRun::svre_iteration(bool extrapolate) {
  if (extrapolate) {
    vr_half_step(extrap_rng_, omega_, raw_);
    policy_.direction_into(raw_, step_);
    omega_half_.theta = omega_.theta - step_.theta;
    omega_half_.phi = omega_.phi - step_.phi;
    vr_half_step(update_rng_, omega_half_, raw_);
  } else {
    vr_half_step(update_rng_, omega_, raw_);
  }
  policy_.direction_into(raw_, step_);
  omega_ -= step_;
  after_update(raw_);
  if (config_.memorization == Memorization::kSaga && !diverged_) {
    batch_b_.assign({last_update_theta_});
    if (last_update_phi_ != last_update_theta_) batch_b_.push_back(last_update_phi_);
    memorization_update(*game_, *table_, batch_b_, omega_, &counter_, t_);
    for (std::size_t k : batch_b_) ++refresh_counts_[k];
  }
}

void OptimizerRun::run_vr() {
  const bool extrapolate = config_.method != Method::kSVRGBaseline;
  if (config_.memorization == Memorization::kSaga) {
    table_ = take_snapshot(*game_, omega_, &counter_, t_);
    table_->q = 2.0 - 1.0 / static_cast<double>(game_->n());
    for (auto& c : refresh_counts_) ++c;
    trace_.epochs = 1;
    while (budget_left()) svre_iteration(extrapolate);
    return;
  }
  const double rho = config_.geom_param.value_or(1.0 / static_cast<double>(game_->n()));
  const bool restarted = config_.method == Method::kSVRERestarted;
  while (budget_left()) {
    if (restarted) {
      // The coin is drawn every epoch, the first included, from its own stream.
      const bool coin = restart_rng_.bernoulli(config_.restart_p);
      if (coin && trace_.epochs > 0) {
        omega_ = average_.value();
        average_.reset(omega_);
        ++trace_.restarts;
      }
    }
    table_ = take_snapshot(*game_, omega_, &counter_, t_);
    table_->q = rho * static_cast<double>(game_->n());
    for (auto& c : refresh_counts_) ++c;
    ++trace_.epochs;
    const std::uint64_t length = epoch_rng_.geometric(rho);
    for (std::uint64_t k = 0; k < length && budget_left(); ++k) svre_iteration(extrapolate);
  }
}

Trace OptimizerRun::run() {
  validate(config_, *game_);
  const auto start = std::chrono::steady_clock::now();
  switch (config_.method) {
    case Method::kSimGD:
      while (budget_left()) step_gd(false);
      break;
    case Method::kAltGD:
      while (budget_left()) step_gd(true);
      break;
    case Method::kEGBatch:
      while (budget_left()) step_extragradient(Oracle::kBatch);
      break;
    case Method::kEGStochastic:
      while (budget_left()) step_extragradient(Oracle::kStochastic);
      break;
    case Method::kSVRE:
    case Method::kSVRERestarted:
    case Method::kSVRGBaseline:
      run_vr();
      break;
  }
  if (t_ > 0) record_row();
  trace_.status = diverged_ ? RunStatus::kDiverged : RunStatus::kCompleted;
  trace_.iterations = t_;
  trace_.oracle_calls = counter_.calls;
  trace_.final_iterate = omega_;
  trace_.final_average = average_.value();
  trace_.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return trace_;
}

Trace run_method(GamePtr game, const RunConfig& config) {
  OptimizerRun run(std::move(game), config);
  return run.run();
}

Trace run_svre(GamePtr game, RunConfig config) {
  config.method = Method::kSVRE;
  return run_method(std::move(game), config);
}

Trace run_restarted_svre(GamePtr game, RunConfig config, double p) {
  config.method = Method::kSVRERestarted;
  config.restart_p = p;
  return run_method(std::move(game), config);
}

Trace averaged_view(const Trace& trace) {
  Trace out = trace;
  out.method = "avg_" + trace.method;
  out.initial_distance = trace.initial_distance;
  out.final_iterate = trace.final_average;
  for (TraceRow& row : out.rows) {
    row.distance_to_nash = row.avg_distance;
    row.iterate_norm = row.avg_norm;
  }
  return out;
}

}  // namespace svre
