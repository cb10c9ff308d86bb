#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "svre/game.hpp"
#include "svre/point.hpp"
#include "svre/rng.hpp"

namespace svre {

/// Shared per-run cost meter: one tick per F_i evaluation.
struct OracleCounter {
  std::uint64_t calls = 0;
};

/// Sampling distribution over the n samples together with the aggregate
/// cocoercivity constant it induces, ell_bar(pi)^2 = (1/n) sum ell_i^2/(n pi_i).
class SamplingScheme {
 public:
  std::size_t n() const { return pi_.size(); }
  std::span<const double> pi() const { return pi_; }
  bool is_uniform() const { return uniform_; }
  /// Absent when the scheme was built without per-sample constants.
  std::optional<double> ell_bar() const { return ell_bar_; }
  /// 1 / (n pi_i); exactly 1 under uniform sampling.
  double importance(std::size_t i) const { return importance_[i]; }

  std::size_t sample(Rng& rng) const;

 private:
  friend SamplingScheme make_sampling(std::size_t n, std::optional<std::span<const double>> ell);
  std::vector<double> pi_;
  std::vector<double> cdf_;
  std::vector<double> importance_;
  std::optional<double> ell_bar_;
  bool uniform_ = true;
};

/// Uniform pi when `ell` is absent, pi_i = ell_i / sum_j ell_j otherwise.
/// Throws std::invalid_argument for n = 0, a size mismatch, or ell_i <= 0.
SamplingScheme make_sampling(std::size_t n, std::optional<std::span<const double>> ell = std::nullopt);

/// sqrt((1/n) sum_i c_i^2 / (n pi_i)); the weighted aggregate used for both
/// ell_bar and gamma_bar.
double weighted_aggregate(std::span<const double> constants, std::span<const double> pi);

/// Per-sample stored operator values alpha_k and their mean. A full refresh
/// (J = all samples) is an SVRG snapshot; single-index refreshes give
/// SAGA-style tables.
class MemorizationTable {
 public:
  std::size_t n() const { return alpha_.size(); }
  const Point& alpha(std::size_t k) const { return alpha_[k]; }
  const Point& alpha_bar() const { return alpha_bar_; }
  /// Caller-supplied step stamp recorded when alpha_k was last refreshed.
  std::uint64_t anchor_stamp(std::size_t k) const { return stamps_[k]; }
  /// Iterate of the last full refresh.
  const Point& snapshot() const { return snapshot_; }
  /// Expected number of refreshed entries per step, used for reporting.
  double q = 1.0;

 private:
  friend MemorizationTable take_snapshot(const FiniteSumGame&, const Point&, OracleCounter*, std::uint64_t);
  friend void memorization_update(const FiniteSumGame&, MemorizationTable&, std::span<const std::size_t>, const Point&,
                                  OracleCounter*, std::uint64_t);
  void recompute_mean();

  std::vector<Point> alpha_;
  Point alpha_bar_;
  Point snapshot_;
  std::vector<std::uint64_t> stamps_;
  std::size_t partial_updates_ = 0;
};

/// alpha_k = F_k(omega) for every k and alpha_bar = full_operator(omega)
/// (same summation order, so equality is exact). Costs n oracle calls.
MemorizationTable take_snapshot(const FiniteSumGame& game, const Point& omega, OracleCounter* counter = nullptr,
                                std::uint64_t stamp = 0);

/// (F_i(omega) - alpha_i) / (n pi_i) + alpha_bar. One oracle call.
Point vr_estimate(const FiniteSumGame& game, const MemorizationTable& table, const SamplingScheme& scheme,
                  std::size_t i, const Point& omega, OracleCounter* counter = nullptr);

/// Allocation-free form of vr_estimate for run loops; `scratch` and `out` must
/// have the game's shape. Performs no validation.
void vr_estimate_into(const FiniteSumGame& game, const MemorizationTable& table, const SamplingScheme& scheme,
                      std::size_t i, const Point& omega, Point& scratch, Point& out, OracleCounter* counter);

/// Refreshes alpha_k = F_k(omega) for k in J and corrects alpha_bar
/// incrementally (fully recomputed after every n single-index refreshes).
/// J covering every index is equivalent to take_snapshot.
void memorization_update(const FiniteSumGame& game, MemorizationTable& table, std::span<const std::size_t> indices,
                         const Point& omega, OracleCounter* counter = nullptr, std::uint64_t stamp = 0);

}  // namespace svre
