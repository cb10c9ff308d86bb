#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "svre/analysis.hpp"
#include "svre/estimators.hpp"
#include "svre/game.hpp"
#include "svre/point.hpp"
#include "svre/policy.hpp"
#include "svre/rng.hpp"

namespace svre {

enum class Method { kSimGD, kAltGD, kEGBatch, kEGStochastic, kSVRE, kSVRERestarted, kSVRGBaseline };

std::string to_string(Method method);
/// Accepts the names printed by to_string ("simgd", "altgd", "eg_batch",
/// "eg_stochastic", "svre", "svre_restarted", "svrg").
Method method_from_string(const std::string& name);
bool is_variance_reduced(Method method);

/// svrg: full refresh at every epoch start, so each entry is refreshed with
/// probability geom_param per step (q = n geom_param). saga: a single full
/// refresh at the start, then after every iteration the distinct update
/// indices are refreshed at the new iterate, with no epochs; under uniform
/// sampling each entry is refreshed with probability 1 - (1 - 1/n)^2 per step
/// (q = 2 - 1/n).
enum class Memorization { kSvrg, kSaga };

struct RunConfig {
  Method method = Method::kSVRE;
  PolicyParams policy;
  std::uint64_t seed = 0;
  // The run stops at whichever budget is hit first; at least one must be set.
  std::optional<std::uint64_t> max_iterations;
  std::optional<double> max_passes;  // one pass = n oracle calls
  std::uint64_t record_every = 1;
  std::size_t batch_size = 1;  // plain stochastic oracles only
  std::optional<double> geom_param;  // defaults to 1/n
  double restart_p = 0.5;
  // Per-sample constants for pi_i proportional to ell_i in the variance
  // reduced methods; empty means uniform sampling.
  std::vector<double> sampling_weights;
  Memorization memorization = Memorization::kSvrg;
  double sme_decay = 0.9;
  // Starting point; when absent the iterate starts at N(0, init_scale^2 I)
  // drawn from the init stream, or at zero when init_scale is 0.
  std::optional<Point> init;
  double init_scale = 0.0;
  double divergence_threshold = 1e12;
};

/// Throws std::invalid_argument on an inconsistent configuration.
void validate(const RunConfig& config, const FiniteSumGame& game);

enum class RunStatus { kCompleted, kDiverged };
std::string to_string(RunStatus status);

struct TraceRow {
  std::uint64_t iteration = 0;
  std::uint64_t oracle_calls = 0;
  double distance_to_nash = 0.0;  // NaN when the game has no recorded Nash
  double sme_player1 = 0.0;
  double sme_player2 = 0.0;
  double iterate_norm = 0.0;
  // Same quantities for the running average; used by averaged_view.
  double avg_distance = 0.0;
  double avg_norm = 0.0;
};

struct Trace {
  std::string method;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  RunStatus status = RunStatus::kCompleted;
  std::uint64_t iterations = 0;
  std::uint64_t oracle_calls = 0;
  std::uint64_t epochs = 0;
  std::uint64_t restarts = 0;
  double initial_distance = 0.0;
  double wall_seconds = 0.0;
  std::vector<TraceRow> rows;
  Point final_iterate;
  Point final_average;
};

/// Online uniform average. Starts at the initial iterate with count 1, so
/// after t updates it is the mean of omega_0..omega_t.
class IterateAverage {
 public:
  void reset(const Point& omega);
  void add(const Point& omega);
  const Point& value() const { return mean_; }
  std::uint64_t count() const { return count_; }

 private:
  Point mean_;
  std::uint64_t count_ = 0;
};

/// One self-contained, single-threaded run. Random draws come from named
/// streams of the master seed: epoch lengths, extrapolation indices, update
/// indices, restart coins and the initial point are independent, so toggling
/// restarts leaves index sampling untouched.
class OptimizerRun {
 public:
  OptimizerRun(GamePtr game, RunConfig config);

  const Point& iterate() const { return omega_; }
  const IterateAverage& average() const { return average_; }
  std::uint64_t oracle_calls() const { return counter_.calls; }
  std::uint64_t iteration() const { return t_; }
  bool diverged() const { return diverged_; }
  /// How many times each memorized entry alpha_k has been refreshed.
  const std::vector<std::uint64_t>& refresh_counts() const { return refresh_counts_; }

  /// One plain-oracle gradient step. Simultaneous: one mini-batch, both
  /// players step from the same iterate. Alternating: player 2 steps first on
  /// its own mini-batch, then player 1 steps at the updated player 2.
  void step_gd(bool alternating);

  enum class Oracle { kBatch, kStochastic };
  /// One extragradient step with a fresh, independent sample for the
  /// extrapolation and for the update (a mini-batch shared by both players).
  void step_extragradient(Oracle oracle);
  /// Extragradient step on explicit mini-batches; used by exact enumeration.
  void step_extragradient_with(std::span<const std::size_t> extrapolation, std::span<const std::size_t> update);

  /// Executes the configured method until a budget is exhausted or the
  /// iterate diverges.
  Trace run();

 private:
  bool budget_left() const;
  void after_update(const Point& raw_update);
  void record_row();
  void sample_batch(Rng& rng, std::vector<std::size_t>& out);
  void batch_mean_into(std::span<const std::size_t> indices, const Point& at, Point& out);
  void vr_half_step(Rng& rng, const Point& at, Point& out);
  void svre_iteration(bool extrapolate);
  void run_vr();

  GamePtr game_;
  RunConfig config_;
  SamplingScheme scheme_;
  StepSizePolicy policy_;
  OracleCounter counter_;
  Rng epoch_rng_;
  Rng extrap_rng_;
  Rng update_rng_;
  Rng restart_rng_;
  Point omega_;
  Point omega_half_;
  Point raw_;
  Point step_;
  Point scratch_;
  Point est_;
  IterateAverage average_;
  SMETracker sme_theta_;
  SMETracker sme_phi_;
  std::optional<MemorizationTable> table_;
  std::vector<std::uint64_t> refresh_counts_;
  std::vector<std::size_t> perm_;
  std::vector<std::size_t> batch_a_;
  std::vector<std::size_t> batch_b_;
  std::size_t last_update_theta_ = 0;
  std::size_t last_update_phi_ = 0;
  std::uint64_t t_ = 0;
  bool diverged_ = false;
  Trace trace_;
};

Trace run_method(GamePtr game, const RunConfig& config);
Trace run_svre(GamePtr game, RunConfig config);
Trace run_restarted_svre(GamePtr game, RunConfig config, double p);

/// The running-average series of a trace (the AVG- curves): distances and
/// norms are those of omega_bar_t; SME columns are kept.
Trace averaged_view(const Trace& trace);

}  // namespace svre
