#include "svre/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace svre {

SamplingScheme make_sampling(std::size_t n, std::optional<std::span<const double>> ell) {
  if (n == 0) throw std::invalid_argument("make_sampling: n must be >= 1");
  SamplingScheme s;
  s.pi_.assign(n, 1.0 / static_cast<double>(n));
  s.importance_.assign(n, 1.0);
  s.uniform_ = true;
  if (ell) {
    if (ell->size() != n) throw std::invalid_argument("make_sampling: expected one constant per sample");
    double total = 0.0;
    for (double v : *ell) {
      if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("make_sampling: constants must be finite and > 0");
      total += v;
    }
    const bool all_equal = std::all_of(ell->begin(), ell->end(), [&](double v) { return v == ell->front(); });
    if (!all_equal) {
      s.uniform_ = false;
      for (std::size_t i = 0; i < n; ++i) {
        s.pi_[i] = (*ell)[i] / total;
        s.importance_[i] = 1.0 / (static_cast<double>(n) * s.pi_[i]);
      }
    }
    s.ell_bar_ = weighted_aggregate(*ell, s.pi_);
  }
  s.cdf_.resize(n);
  double run = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    run += s.pi_[i];
    s.cdf_[i] = run;
  }
  s.cdf_.back() = 1.0;
  return s;
}

std::size_t SamplingScheme::sample(Rng& rng) const {
  if (uniform_) return rng.index(pi_.size());
  const double u = rng.uniform();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return std::min(static_cast<std::size_t>(it - cdf_.begin()), pi_.size() - 1);
}

double weighted_aggregate(std::span<const double> constants, std::span<const double> pi) {
  if (constants.size() != pi.size() || pi.empty()) throw std::invalid_argument("weighted_aggregate: size mismatch");
  const auto n = static_cast<double>(pi.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i) sum += constants[i] * constants[i] / (n * pi[i]);
  return std::sqrt(sum / n);
}

void MemorizationTable::recompute_mean() {
  alpha_bar_.set_zero();
  for (const Point& a : alpha_) alpha_bar_ += a;
  alpha_bar_ *= 1.0 / static_cast<double>(alpha_.size());
  partial_updates_ = 0;
}

MemorizationTable take_snapshot(const FiniteSumGame& game, const Point& omega, OracleCounter* counter,
                                std::uint64_t stamp) {
  check_point(game, omega, "take_snapshot");
  MemorizationTable t;
  t.alpha_.assign(game.n(), game.zero_point());
  for (std::size_t k = 0; k < game.n(); ++k) game.sample_operator_into(k, omega, t.alpha_[k]);
  if (counter) counter->calls += game.n();
  t.alpha_bar_ = game.zero_point();
  t.recompute_mean();
  t.snapshot_ = omega;
  t.stamps_.assign(game.n(), stamp);
  return t;
}

void vr_estimate_into(const FiniteSumGame& game, const MemorizationTable& table, const SamplingScheme& scheme,
                      std::size_t i, const Point& omega, Point& scratch, Point& out, OracleCounter* counter) {
  game.sample_operator_into(i, omega, scratch);
  if (counter) ++counter->calls;
  const double w = scheme.importance(i);
  const Point& a = table.alpha(i);
  const Point& bar = table.alpha_bar();
  out.theta = w * (scratch.theta - a.theta) + bar.theta;
  out.phi = w * (scratch.phi - a.phi) + bar.phi;
}

Point vr_estimate(const FiniteSumGame& game, const MemorizationTable& table, const SamplingScheme& scheme,
                  std::size_t i, const Point& omega, OracleCounter* counter) {
  check_point(game, omega, "vr_estimate");
  if (i >= game.n() || i >= table.n() || i >= scheme.n()) throw std::out_of_range("vr_estimate: index out of range");
  if (table.n() != game.n() || scheme.n() != game.n())
    throw std::invalid_argument("vr_estimate: table or sampling scheme sized for a different game");
  Point scratch = game.zero_point();
  Point out = game.zero_point();
  vr_estimate_into(game, table, scheme, i, omega, scratch, out, counter);
  return out;
}

void memorization_update(const FiniteSumGame& game, MemorizationTable& table, std::span<const std::size_t> indices,
                         const Point& omega, OracleCounter* counter, std::uint64_t stamp) {
  if (indices.empty()) return;
  check_point(game, omega, "memorization_update");
  if (table.n() != game.n()) throw std::invalid_argument("memorization_update: table sized for a different game");
  std::unordered_set<std::size_t> seen;
  for (std::size_t k : indices) {
    if (k >= game.n()) throw std::out_of_range("memorization_update: index out of range");
    if (!seen.insert(k).second) throw std::invalid_argument("memorization_update: duplicate index");
  }
  if (seen.size() == game.n()) {
    table = take_snapshot(game, omega, counter, stamp);
    return;
  }
  const double inv = 1.0 / static_cast<double>(game.n());
  Point fresh = game.zero_point();
  for (std::size_t k : indices) {
    game.sample_operator_into(k, omega, fresh);
    if (counter) ++counter->calls;
    table.alpha_bar_.add_scaled(inv, fresh - table.alpha_[k]);
    table.alpha_[k] = fresh;
    table.stamps_[k] = stamp;
    if (++table.partial_updates_ >= game.n()) table.recompute_mean();
  }
}

}  // namespace svre
