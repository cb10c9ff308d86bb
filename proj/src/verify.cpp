#include "svre/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <thread>

#include <unistd.h>

#include <fmt/format.h>

#include "svre/analysis.hpp"
#include "svre/estimators.hpp"
#include "svre/optimizers.hpp"
#include "svre/runner.hpp"
#include "svre/trace_io.hpp"

namespace svre {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

CheckResult finish(std::string name, bool passed, std::string detail, Clock::time_point start) {
  return {std::move(name), passed, std::move(detail), seconds_since(start)};
}

std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t b) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur(b);
  for (std::size_t k = 0; k < b; ++k) cur[k] = k;
  while (true) {
    out.push_back(cur);
    std::size_t k = b;
    while (k > 0 && cur[k - 1] == n - b + (k - 1)) --k;
    if (k == 0) break;
    ++cur[k - 1];
    for (std::size_t m = k; m < b; ++m) cur[m] = cur[m - 1] + 1;
  }
  return out;
}

Point random_point(Eigen::Index dt, Eigen::Index dp, Rng& rng) {
  Point p = Point::zeros(dt, dp);
  for (Eigen::Index k = 0; k < dt; ++k) p.theta[k] = rng.normal();
  for (Eigen::Index k = 0; k < dp; ++k) p.phi[k] = rng.normal();
  return p;
}

Point ones(Eigen::Index dt, Eigen::Index dp) {
  return {Eigen::VectorXd::Ones(dt), Eigen::VectorXd::Ones(dp)};
}

RunConfig constant_run(Method method, double eta, std::uint64_t seed) {
  RunConfig c;
  c.method = method;
  c.policy.kind = PolicyKind::kConstant;
  c.policy.eta_theta = c.policy.eta_phi = eta;
  c.seed = seed;
  return c;
}

// v(omega) = (a phi, -a theta) split over samples with weights s_i (mean 1).
GamePtr isotropic_bilinear(Eigen::Index d, double a) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * d, 2 * d);
  j.topRightCorner(d, d) = a * Eigen::MatrixXd::Identity(d, d);
  j.bottomLeftCorner(d, d) = -a * Eigen::MatrixXd::Identity(d, d);
  std::vector<AffineSample> samples;
  for (double s : {0.5, 1.5, 0.8, 1.2}) samples.push_back({s * j, Eigen::VectorXd::Zero(2 * d)});
  return make_dense_affine_game(d, d, std::move(samples), "isotropic_bilinear");
}

GamePtr random_affine_game(Rng& rng) {
  const std::size_t n = 2 + rng.index(7);
  const Eigen::Index dt = 1 + static_cast<Eigen::Index>(rng.index(4));
  const Eigen::Index dp = 1 + static_cast<Eigen::Index>(rng.index(4));
  std::vector<AffineSample> samples;
  for (std::size_t i = 0; i < n; ++i) {
    AffineSample s{Eigen::MatrixXd(dt + dp, dt + dp), Eigen::VectorXd(dt + dp)};
    for (Eigen::Index r = 0; r < s.jacobian.rows(); ++r) {
      for (Eigen::Index c = 0; c < s.jacobian.cols(); ++c) s.jacobian(r, c) = rng.normal();
      s.offset[r] = rng.normal();
    }
    samples.push_back(std::move(s));
  }
  return make_dense_affine_game(dt, dp, std::move(samples), "random_affine");
}

SamplingScheme random_scheme(std::size_t n, bool uniform, Rng& rng) {
  if (uniform) return make_sampling(n);
  std::vector<double> w(n);
  for (double& x : w) x = 0.1 + rng.uniform();
  return make_sampling(n, std::span<const double>(w));
}

std::filesystem::path scratch_dir(const std::string& tag) {
  return std::filesystem::temp_directory_path() / fmt::format("svre-verify-{}-{}", ::getpid(), tag);
}

unsigned resolve_parallel(unsigned parallel) {
  if (parallel > 0) return parallel;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

ExperimentConfig fig3_experiment() {
  ExperimentConfig c;
  c.name = "fig3";
  c.game.kind = "affine_bilinear";
  c.game.n = 100;
  c.game.d = 100;
  c.game.seed = 0;
  for (const char* m : {"altgd", "avg_altgd", "svre", "avg_svre", "svre_restarted"})
    c.methods.push_back(parse_method_entry(m));
  c.policy.kind = PolicyKind::kConstant;
  c.policy.eta_theta = c.policy.eta_phi = 0.1;
  // Restarting from the average tolerates, and benefits from, a larger step.
  PolicyParams restarted = c.policy;
  restarted.eta_theta = restarted.eta_phi = 0.3;
  c.method_policies["svre_restarted"] = restarted;
  c.seeds = {0, 1, 2, 3, 4};
  c.max_passes = 2e4;
  c.record_every = 1000;
  c.restart_p = 0.5;
  c.output_dir = "fig3";
  return c;
}

CheckResult check_thm1_enumeration() {
  const auto start = Clock::now();
  double worst = 0.0;
  std::string where;
  const std::pair<std::size_t, std::size_t> cases[] = {{2, 1}, {4, 1}, {4, 2}};
  for (auto [n, b] : cases) {
    for (double eta : {0.5, 1.0}) {
      for (double eps : {0.0, 0.1}) {
        const GamePtr game = make_bilinear_counterexample({n, eps});
        Rng rng(derive_seed(1, Stream::kInit));
        const Point w0 = random_point(game->d_theta(), game->d_phi(), rng);
        const auto sets = subsets(n, b);
        double sum = 0.0;
        for (const auto& extrapolation : sets) {
          for (const auto& update : sets) {
            RunConfig c = constant_run(Method::kEGStochastic, eta, 0);
            c.batch_size = b;
            c.init = w0;
            OptimizerRun run(game, c);
            run.step_extragradient_with(extrapolation, update);
            sum += run.iterate().squared_norm();
          }
        }
        const double measured = sum / static_cast<double>(sets.size() * sets.size()) / w0.squared_norm();
        const double err = std::abs(measured - thm1_factor(n, b, eta, eps));
        if (err >= worst) {
          worst = err;
          where = fmt::format("n={} b={} eta={} eps={}", n, b, eta, eps);
        }
      }
    }
  }
  const double secs = seconds_since(start);
  return finish("thm1 exact one-step factor", worst <= 1e-12 && secs < 1.0,
                fmt::format("max |enumeration - factor| = {:.2e} at {}; {:.3f} s", worst, where, secs), start);
}

CheckResult check_thm1_trajectory() {
  const auto start = Clock::now();
  constexpr std::size_t kSeeds = 1000;
  constexpr std::uint64_t kSteps = 200;
  const GamePtr game = make_bilinear_counterexample({2, 0.1});
  const Point w0 = ones(2, 2);
  std::vector<double> mean(kSteps + 1, 0.0);
  mean[0] = w0.squared_norm() * kSeeds;
  for (std::uint64_t s = 0; s < kSeeds; ++s) {
    RunConfig c = constant_run(Method::kEGStochastic, 0.5, s);
    c.init = w0;
    c.max_iterations = kSteps;
    const Trace t = run_method(game, c);
    for (const TraceRow& r : t.rows) mean[r.iteration] += r.iterate_norm * r.iterate_norm;
  }
  // Least-squares slope of log(mean N_t) against t.
  double st = 0, sy = 0, stt = 0, sty = 0;
  const double m = static_cast<double>(kSteps + 1);
  for (std::uint64_t t = 0; t <= kSteps; ++t) {
    const double y = std::log(mean[t] / kSeeds);
    const double x = static_cast<double>(t);
    st += x;
    sy += y;
    stt += x * x;
    sty += x * y;
  }
  const double slope = (m * sty - st * sy) / (m * stt - st * st);
  const double expected = std::log(thm1_factor(2, 1, 0.5, 0.1));
  const double rel = std::abs(slope / expected - 1.0);
  const double secs = seconds_since(start);
  return finish("thm1 trajectory growth rate", rel <= 0.05 && secs < 30.0,
                fmt::format("fitted rate {:.6f} vs log factor {:.6f} (rel. error {:.2f}%); {:.2f} s", slope, expected,
                            100.0 * rel, secs),
                start);
}

CheckResult check_thm1_batch_eg() {
  const auto start = Clock::now();
  const GamePtr game = make_bilinear_counterexample({2, 0.1});
  RunConfig c = constant_run(Method::kEGBatch, 0.5, 0);
  c.init = ones(2, 2);
  c.max_iterations = 2000;
  c.record_every = 10;
  const Trace t = run_method(game, c);
  double best = t.initial_distance;
  for (const TraceRow& r : t.rows) best = std::min(best, r.distance_to_nash);
  return finish("thm1 batch extragradient converges", best <= 1e-9,
                fmt::format("best distance {:.3e} within {} iterations", best, t.iterations), start);
}

CheckResult check_eg_closed_form() {
  const auto start = Clock::now();
  const double a = 0.8;
  const double eta = 0.5;
  const GamePtr game = isotropic_bilinear(5, a);
  Rng rng(derive_seed(2, Stream::kInit));
  RunConfig c = constant_run(Method::kEGBatch, eta, 0);
  c.init = random_point(5, 5, rng);
  OptimizerRun run(game, c);
  const double ea = eta * a;
  const double expected = 1.0 - ea * ea + ea * ea * ea * ea;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double before = run.iterate().squared_norm();
    run.step_extragradient(OptimizerRun::Oracle::kBatch);
    worst = std::max(worst, std::abs(run.iterate().squared_norm() / before - expected));
  }
  return finish("batch extragradient ratio 1 - (eta a)^2 + (eta a)^4", worst <= 1e-10,
                fmt::format("max |ratio - {:.6f}| = {:.2e} over 100 steps", expected, worst), start);
}

CheckResult check_gd_closed_form() {
  const auto start = Clock::now();
  const double a = 0.8;
  const double eta = 0.5;
  const GamePtr game = isotropic_bilinear(5, a);
  Rng rng(derive_seed(3, Stream::kInit));
  RunConfig c = constant_run(Method::kSimGD, eta, 0);
  c.init = random_point(5, 5, rng);
  c.batch_size = game->n();
  OptimizerRun run(game, c);
  const double expected = 1.0 + eta * a * eta * a;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double before = run.iterate().squared_norm();
    run.step_gd(false);
    worst = std::max(worst, std::abs(run.iterate().squared_norm() / before - expected));
  }
  return finish("batch simultaneous GD ratio 1 + (eta a)^2", worst <= 1e-10,
                fmt::format("max |ratio - {:.6f}| = {:.2e} over 100 steps", expected, worst), start);
}

CheckResult check_thm2_bound() {
  const auto start = Clock::now();
  QuadraticGameSpec spec;
  spec.d = 20;
  spec.n = 20;
  spec.mu = 0.1;
  spec.L = 1.0;
  spec.seed = 0;
  const GamePtr game = make_quadratic_game(spec);
  const OperatorConstants k = estimate_constants(*game, {});
  const double eta = 1.0 / (40.0 * k.ell_bar);
  const ContractionBound bound = thm2_bound(k, eta, eta, game->n(), 1.0);
  Rng rng(derive_seed(4, Stream::kInit));
  const Point w0 = random_point(game->d_theta(), game->d_phi(), rng);
  const double d0 = distance(w0, *game->nash());

  constexpr std::size_t kSeeds = 100;
  constexpr std::uint64_t kSteps = 2000;
  constexpr std::uint64_t kEvery = 10;
  std::vector<double> mean(kSteps / kEvery + 1, 0.0);
  for (std::uint64_t s = 0; s < kSeeds; ++s) {
    RunConfig c = constant_run(Method::kSVRE, eta, s);
    c.init = w0;
    c.max_iterations = kSteps;
    c.record_every = kEvery;
    const Trace t = run_method(game, c);
    for (const TraceRow& r : t.rows) mean[r.iteration / kEvery] += r.distance_to_nash * r.distance_to_nash / kSeeds;
  }
  double worst = 0.0;
  std::uint64_t worst_t = 0;
  for (std::size_t j = 1; j < mean.size(); ++j) {
    const double t = static_cast<double>(j * kEvery);
    const double ratio = mean[j] / (std::pow(bound.factor, t) * d0 * d0);
    if (ratio > worst) {
      worst = ratio;
      worst_t = j * kEvery;
    }
  }
  const double secs = seconds_since(start);
  return finish("thm2 contraction bound respected", worst <= 1.1 && bound.claimed && secs < 120.0,
                fmt::format("ell_bar={:.4f} eta={:.3e} factor={:.8f}; max mean/bound = {:.4f} at t={}; "
                            "final mean dist^2 {:.3e} vs d0^2 {:.3e}; {:.1f} s",
                            k.ell_bar, eta, bound.factor, worst, worst_t, mean.back(), d0 * d0, secs),
                start);
}

CheckResult check_fig3(unsigned parallel) {
  const auto start = Clock::now();
  const ExperimentConfig config = fig3_experiment();
  RunOptions opts;
  opts.out = scratch_dir("fig3");
  opts.parallel = resolve_parallel(parallel);
  const RunReport report = run_experiment(config, opts);

  std::map<std::string, std::vector<TraceFile>> traces;
  for (const auto& path : report.csv_files) {
    TraceFile t = read_trace_csv(path);
    traces[t.method].push_back(std::move(t));
  }
  auto best_of = [](const TraceFile& t) {
    double best = t.initial_distance;
    for (const TraceRow& r : t.rows) best = std::min(best, r.distance_to_nash);
    return best;
  };
  auto final_of = [](const TraceFile& t) {
    if (t.status == "diverged" || t.rows.empty()) return std::numeric_limits<double>::infinity();
    const double d = t.rows.back().distance_to_nash;
    return std::isfinite(d) ? d : std::numeric_limits<double>::infinity();
  };
  bool ok = true;
  std::string detail;
  auto clause = [&](const std::string& label, bool pass, double value) {
    ok = ok && pass;
    detail += fmt::format("{}{} {} ({:.3e})", detail.empty() ? "" : "; ", label, pass ? "ok" : "FAILED", value);
  };
  double worst = 0.0;
  for (const auto& t : traces["svre"]) worst = std::max(worst, best_of(t));
  clause("svre best <= 1e-6", worst <= 1e-6, worst);
  worst = 0.0;
  for (const auto& t : traces["svre_restarted"]) worst = std::max(worst, best_of(t));
  clause("svre_restarted best <= 1e-6", worst <= 1e-6, worst);
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& t : traces["altgd"]) margin = std::min(margin, final_of(t) / t.initial_distance);
  clause("altgd final/initial > 1", margin > 1.0, margin);
  double low = std::numeric_limits<double>::infinity();
  for (const auto& t : traces["avg_altgd"]) low = std::min(low, final_of(t));
  clause("avg_altgd final > 1e-3", low > 1e-3, low);
  double high = 0.0;
  for (const auto& t : traces["avg_svre"]) high = std::max(high, final_of(t) / t.initial_distance);
  clause("avg_svre final/initial < 0.1", high < 0.1, high);
  std::filesystem::remove_all(*opts.out);
  const double secs = seconds_since(start);
  ok = ok && secs < 300.0;
  detail += fmt::format("; {:.1f} s", secs);
  return finish("fig3 qualitative reproduction", ok, detail, start);
}

CheckResult check_estimator_unbiasedness() {
  const auto start = Clock::now();
  Rng rng(derive_seed(5, Stream::kAnalysis));
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const GamePtr game = random_affine_game(rng);
    const SamplingScheme scheme = random_scheme(game->n(), trial % 2 == 0, rng);
    MemorizationTable table = take_snapshot(*game, random_point(game->d_theta(), game->d_phi(), rng));
    // Partial refreshes at another point make the table generic.
    std::vector<std::size_t> some;
    for (std::size_t i = 0; i < game->n(); ++i) {
      if (rng.bernoulli(0.5)) some.push_back(i);
    }
    memorization_update(*game, table, some, random_point(game->d_theta(), game->d_phi(), rng));
    const Point w = random_point(game->d_theta(), game->d_phi(), rng);
    Point sum = game->zero_point();
    for (std::size_t i = 0; i < game->n(); ++i) sum.add_scaled(scheme.pi()[i], vr_estimate(*game, table, scheme, i, w));
    const Point v = full_operator(*game, w);
    worst = std::max(worst, distance(sum, v) / std::max(1.0, v.norm()));
  }
  return finish("estimator unbiasedness", worst <= 1e-10,
                fmt::format("max |sum_i pi_i g_i - v| = {:.2e} over 100 triples", worst), start);
}

CheckResult check_snapshot_fixed_point() {
  const auto start = Clock::now();
  Rng rng(derive_seed(6, Stream::kAnalysis));
  bool exact = true;
  for (int trial = 0; trial < 20; ++trial) {
    const GamePtr game = random_affine_game(rng);
    const SamplingScheme scheme = random_scheme(game->n(), trial % 2 == 0, rng);
    const Point ws = random_point(game->d_theta(), game->d_phi(), rng);
    const MemorizationTable table = take_snapshot(*game, ws);
    for (std::size_t i = 0; i < game->n(); ++i) exact = exact && vr_estimate(*game, table, scheme, i, ws) == table.alpha_bar();
  }
  // SVRE started at the equilibrium stays there up to rounding.
  const GamePtr game = make_affine_bilinear({20, 20, 3});
  RunConfig c = constant_run(Method::kSVRE, 0.3, 0);
  c.init = *game->nash();
  c.max_iterations = 2000;
  c.record_every = 100;
  const Trace t = run_method(game, c);
  double drift = 0.0;
  for (const TraceRow& r : t.rows) drift = std::max(drift, r.distance_to_nash);
  return finish("snapshot fixed point", exact && drift <= 1e-10,
                fmt::format("g_i(omega_S) == alpha_bar bitwise: {}; SVRE drift from Nash {:.2e}",
                            exact ? "yes" : "no", drift),
                start);
}

CheckResult check_refresh_frequency() {
  const auto start = Clock::now();
  Rng rng(derive_seed(7, Stream::kAnalysis));
  std::vector<AffineSample> samples;
  for (int i = 0; i < 10; ++i) {
    AffineSample s{0.1 * Eigen::MatrixXd::Identity(4, 4), Eigen::VectorXd(4)};
    for (int k = 0; k < 4; ++k) s.offset[k] = rng.normal();
    samples.push_back(std::move(s));
  }
  const GamePtr game = make_dense_affine_game(2, 2, std::move(samples), "refresh_probe");
  constexpr std::uint64_t kSteps = 100000;
  const double n = static_cast<double>(game->n());
  const double T = static_cast<double>(kSteps);
  bool ok = true;
  double worst_z = 0.0;

  RunConfig saga = constant_run(Method::kSVRE, 0.1, 11);
  saga.memorization = Memorization::kSaga;
  saga.max_iterations = kSteps;
  saga.record_every = kSteps;
  OptimizerRun run_saga(game, saga);
  run_saga.run();
  const double p_saga = (2.0 - 1.0 / n) / n;
  for (std::uint64_t count : run_saga.refresh_counts()) {
    const double z = std::abs(static_cast<double>(count - 1) - T * p_saga) / std::sqrt(T * p_saga * (1.0 - p_saga));
    worst_z = std::max(worst_z, z);
    ok = ok && z <= 3.0;
  }

  RunConfig svrg = constant_run(Method::kSVRE, 0.1, 12);
  svrg.max_iterations = kSteps;
  svrg.record_every = kSteps;
  OptimizerRun run_svrg(game, svrg);
  const Trace t = run_svrg.run();
  const double p_svrg = 1.0 / n;
  // Every epoch start after the first is a renewal at some step.
  const double z = std::abs(static_cast<double>(t.epochs - 1) - T * p_svrg) / std::sqrt(T * p_svrg * (1.0 - p_svrg));
  worst_z = std::max(worst_z, z);
  ok = ok && z <= 3.0;
  return finish("q/n refresh frequency", ok,
                fmt::format("worst deviation {:.2f} standard errors (saga q = 2 - 1/n, svrg q = 1)", worst_z), start);
}

CheckResult check_policy_sequences() {
  const auto start = Clock::now();
  const double g[3] = {1.0, -2.0, 0.5};
  // m_t, v_t written out by hand for beta2 = 0.9: v = 0.1, 0.49, 0.466 with
  // bias corrections 0.1, 0.19, 0.271.
  const double vh[3] = {0.1 / 0.1, 0.49 / 0.19, 0.466 / 0.271};
  const double mh_b0[3] = {1.0, -2.0, 0.5};
  const double mh_b9[3] = {0.1 / 0.1, -0.11 / 0.19, -0.049 / 0.271};
  double worst = 0.0;
  for (double beta1 : {0.0, 0.9}) {
    const double* mh = beta1 == 0.0 ? mh_b0 : mh_b9;
    for (PolicyKind kind : {PolicyKind::kAdam, PolicyKind::kVrad}) {
      PolicyParams p{kind, 0.1, 0.1, beta1, 0.9, 0.0};
      StepSizePolicy policy(p, 1, 1);
      Eigen::VectorXd out(1);
      for (int t = 0; t < 3; ++t) {
        policy.theta_direction_into(Eigen::VectorXd::Constant(1, g[t]), out);
        const double ratio = kind == PolicyKind::kAdam ? 1.0 / std::sqrt(vh[t]) : std::abs(mh[t]) / std::sqrt(vh[t]);
        worst = std::max(worst, std::abs(out[0] - 0.1 * ratio * mh[t]));
      }
    }
  }
  StepSizePolicy constant(PolicyParams{PolicyKind::kConstant, 0.1, 0.1, 0.0, 0.9, 1e-8}, 1, 1);
  Eigen::VectorXd out(1);
  constant.theta_direction_into(Eigen::VectorXd::Constant(1, 2.0), out);
  worst = std::max(worst, std::abs(out[0] - 0.2));
  return finish("adam / vrad / constant hand sequences", worst <= 1e-12,
                fmt::format("max deviation {:.2e}", worst), start);
}

CheckResult check_sme_recursion() {
  const auto start = Clock::now();
  SMETracker sme(0.9);
  const double g[3] = {2.0, 1.0, -3.0};
  const double expected[3] = {0.4 / 0.1, 0.46 / 0.19, 1.314 / 0.271};
  double worst = 0.0;
  for (int t = 0; t < 3; ++t) {
    sme.update(Eigen::VectorXd::Constant(1, g[t]));
    worst = std::max(worst, std::abs(sme.value() - expected[t]));
  }
  return finish("sme recursion hand values", worst <= 1e-12, fmt::format("max deviation {:.2e}", worst), start);
}

CheckResult check_geometric_mean() {
  const auto start = Clock::now();
  constexpr int kDraws = 100000;
  const double n = 100.0;
  const double rho = 1.0 / n;
  Rng rng(derive_seed(8, Stream::kEpochLength));
  double sum = 0.0;
  for (int k = 0; k < kDraws; ++k) sum += static_cast<double>(rng.geometric(rho));
  const double mean = sum / kDraws;
  const double se = std::sqrt(1.0 - rho) / rho / std::sqrt(static_cast<double>(kDraws));
  const double z = std::abs(mean - n) / se;
  return finish("geometric epoch length mean", z <= 3.0,
                fmt::format("mean {:.3f} vs {} ({:.2f} standard errors)", mean, n, z), start);
}

CheckResult check_reproducibility(unsigned parallel) {
  const auto start = Clock::now();
  const ExperimentConfig config = fig3_experiment();
  const std::filesystem::path dirs[3] = {scratch_dir("repro-a"), scratch_dir("repro-b"), scratch_dir("repro-par")};
  std::vector<std::filesystem::path> files;
  for (int k = 0; k < 3; ++k) {
    RunOptions opts;
    opts.out = dirs[k];
    opts.parallel = k == 2 ? std::max(2u, resolve_parallel(parallel)) : 1;
    const RunReport r = run_experiment(config, opts);
    if (k == 0) {
      for (const auto& p : r.csv_files) files.push_back(p.filename());
    }
  }
  std::size_t identical = 0;
  for (const auto& f : files) {
    const std::string a = read_bytes(dirs[0] / f);
    if (!a.empty() && a == read_bytes(dirs[1] / f) && a == read_bytes(dirs[2] / f)) ++identical;
  }
  for (const auto& d : dirs) std::filesystem::remove_all(d);
  return finish("reproducible CSV bytes", !files.empty() && identical == files.size(),
                fmt::format("{}/{} CSVs identical across two serial runs and one parallel run", identical,
                            files.size()),
                start);
}

std::vector<std::string> suite_names() { return {"thm1", "thm2", "fig3", "estimators", "policies"}; }

std::vector<CheckResult> run_suite(const std::string& suite, unsigned parallel) {
  if (suite == "thm1")
    return {check_thm1_enumeration(), check_thm1_trajectory(), check_thm1_batch_eg(), check_eg_closed_form(),
            check_gd_closed_form()};
  if (suite == "thm2") return {check_thm2_bound()};
  if (suite == "fig3") return {check_fig3(parallel)};
  if (suite == "estimators")
    return {check_estimator_unbiasedness(), check_snapshot_fixed_point(), check_refresh_frequency()};
  if (suite == "policies") return {check_policy_sequences(), check_sme_recursion(), check_geometric_mean()};
  throw ConfigError("unknown verify suite '" + suite + "'");
}

std::string format_check(const CheckResult& r) {
  return fmt::format("{}  {:<48} {}", r.passed ? "PASS" : "FAIL", r.name, r.detail);
}

}  // namespace svre
