#include <cmath>

#include <gtest/gtest.h>

#include "svre/analysis.hpp"
#include "svre/optimizers.hpp"

namespace svre {
namespace {

RunConfig constant(Method m, double eta, std::uint64_t seed = 0) {
  RunConfig c;
  c.method = m;
  c.policy.eta_theta = c.policy.eta_phi = eta;
  c.seed = seed;
  return c;
}

Point random_point(Eigen::Index dt, Eigen::Index dp, std::uint64_t seed) {
  Rng rng(seed);
  Point p = Point::zeros(dt, dp);
  for (Eigen::Index k = 0; k < dt; ++k) p.theta[k] = rng.normal();
  for (Eigen::Index k = 0; k < dp; ++k) p.phi[k] = rng.normal();
  return p;
}

GamePtr zero_game() {
  std::vector<AffineSample> s(3, AffineSample{Eigen::MatrixXd::Zero(4, 4), Eigen::VectorXd::Zero(4)});
  return make_dense_affine_game(2, 2, s, "zero");
}

std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t b) {
  std::vector<std::vector<std::size_t>> out;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != b) continue;
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) s.push_back(i);
    out.push_back(s);
  }
  return out;
}

TEST(Optimizers, ZeroOperatorLeavesIterateUnchanged) {
  const GamePtr g = zero_game();
  const Point w0 = random_point(2, 2, 1);
  for (Method m : {Method::kSimGD, Method::kAltGD, Method::kEGBatch, Method::kEGStochastic, Method::kSVRE,
                   Method::kSVRERestarted, Method::kSVRGBaseline}) {
    RunConfig c = constant(m, 0.5);
    c.init = w0;
    c.max_iterations = 50;
    c.record_every = 5;
    const Trace t = run_method(g, c);
    EXPECT_EQ(t.final_iterate, w0) << to_string(m);
    for (const TraceRow& r : t.rows) EXPECT_EQ(r.distance_to_nash, t.initial_distance);
    EXPECT_EQ(averaged_view(t).final_iterate, w0);
  }
}

TEST(Optimizers, DecoupledQuadraticGdContracts) {
  QuadraticGameSpec spec;
  spec.d = 5;
  spec.n = 6;
  spec.coupling = 0.0;
  const GamePtr g = make_quadratic_game(spec);
  RunConfig c = constant(Method::kSimGD, 1.5);  // below 2 / L
  c.batch_size = g->n();
  c.init = random_point(5, 5, 2);
  OptimizerRun run(g, c);
  for (int k = 0; k < 50; ++k) {
    const double before = distance_to_nash(*g, run.iterate());
    run.step_gd(false);
    EXPECT_LT(distance_to_nash(*g, run.iterate()), before);
  }
}

TEST(Optimizers, AlternatingUpdatesPlayerTwoFirst) {
  Eigen::MatrixXd j(2, 2);
  j << 0, 1, -1, 0;
  const GamePtr g = make_dense_affine_game(1, 1, {AffineSample{j, Eigen::VectorXd::Zero(2)}});
  RunConfig c = constant(Method::kAltGD, 0.5);
  c.init = Point(Eigen::VectorXd::Ones(1), Eigen::VectorXd::Ones(1));
  OptimizerRun run(g, c);
  run.step_gd(true);
  // phi <- 1 - 0.5 * (-1) = 1.5, then theta <- 1 - 0.5 * 1.5.
  EXPECT_DOUBLE_EQ(run.iterate().phi[0], 1.5);
  EXPECT_DOUBLE_EQ(run.iterate().theta[0], 0.25);
  EXPECT_EQ(run.oracle_calls(), 2u);
}

TEST(Optimizers, StochasticExtragradientMatchesExactFactor) {
  for (std::size_t n = 2; n <= 6; ++n) {
    for (std::size_t b = 1; b <= n; ++b) {
      const double eps = 0.05 * static_cast<double>(n);
      const double eta = 0.3 + 0.1 * static_cast<double>(b);
      const GamePtr g = make_bilinear_counterexample({n, eps});
      const Point w0 = random_point(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n), n * 10 + b);
      const auto sets = subsets(n, b);
      double sum = 0.0;
      for (const auto& i : sets) {
        for (const auto& jset : sets) {
          RunConfig c = constant(Method::kEGStochastic, eta);
          c.batch_size = b;
          c.init = w0;
          OptimizerRun run(g, c);
          run.step_extragradient_with(i, jset);
          sum += run.iterate().squared_norm();
        }
      }
      const double measured = sum / static_cast<double>(sets.size() * sets.size()) / w0.squared_norm();
      EXPECT_NEAR(measured, thm1_factor(n, b, eta, eps), 1e-12) << "n=" << n << " b=" << b;
    }
  }
}

TEST(Optimizers, RestartWithZeroProbabilityEqualsSvre) {
  const GamePtr g = make_affine_bilinear({10, 10, 1});
  RunConfig c = constant(Method::kSVRE, 0.2, 7);
  c.max_iterations = 3000;
  c.record_every = 100;
  const Trace plain = run_svre(g, c);
  const Trace restarted = run_restarted_svre(g, c, 0.0);
  ASSERT_EQ(plain.rows.size(), restarted.rows.size());
  for (std::size_t k = 0; k < plain.rows.size(); ++k) {
    EXPECT_EQ(plain.rows[k].distance_to_nash, restarted.rows[k].distance_to_nash);
    EXPECT_EQ(plain.rows[k].oracle_calls, restarted.rows[k].oracle_calls);
  }
  EXPECT_EQ(plain.final_iterate, restarted.final_iterate);
  EXPECT_EQ(restarted.restarts, 0u);
}

TEST(Optimizers, RestartWithUnitProbabilityRestartsEveryEpoch) {
  const GamePtr g = make_affine_bilinear({10, 10, 1});
  RunConfig c = constant(Method::kSVRE, 0.2, 7);
  c.max_iterations = 2000;
  const Trace t = run_restarted_svre(g, c, 1.0);
  EXPECT_GT(t.epochs, 1u);
  EXPECT_EQ(t.restarts, t.epochs - 1);
}

TEST(Optimizers, OracleCallAccounting) {
  const GamePtr g = make_affine_bilinear({5, 5, 2});
  RunConfig c = constant(Method::kSVRE, 0.1, 3);
  c.max_iterations = 777;
  Trace t = run_method(g, c);
  EXPECT_EQ(t.oracle_calls, 5 * t.epochs + 4 * t.iterations);
  c.method = Method::kSVRGBaseline;
  t = run_method(g, c);
  EXPECT_EQ(t.oracle_calls, 5 * t.epochs + 2 * t.iterations);
  c.method = Method::kEGBatch;
  t = run_method(g, c);
  EXPECT_EQ(t.oracle_calls, 10 * t.iterations);
  c.method = Method::kAltGD;
  c.batch_size = 2;
  t = run_method(g, c);
  EXPECT_EQ(t.oracle_calls, 4 * t.iterations);
  c.method = Method::kSimGD;
  t = run_method(g, c);
  EXPECT_EQ(t.oracle_calls, 2 * t.iterations);
}

TEST(Optimizers, PassBudgetStopsPromptly) {
  const GamePtr g = make_affine_bilinear({8, 8, 2});
  RunConfig c = constant(Method::kSVRE, 0.1, 3);
  c.max_passes = 30.0;
  const Trace t = run_method(g, c);
  EXPECT_GE(t.oracle_calls, 240u);
  EXPECT_LT(t.oracle_calls, 240u + 8u + 4u);
}

TEST(Optimizers, TraceRowsAreOrdered) {
  const GamePtr g = make_affine_bilinear({8, 8, 2});
  RunConfig c = constant(Method::kSVRERestarted, 0.2, 4);
  c.max_iterations = 1003;
  c.record_every = 10;
  const Trace t = run_method(g, c);
  ASSERT_EQ(t.rows.size(), 101u);
  EXPECT_EQ(t.rows.back().iteration, 1003u);
  for (std::size_t k = 1; k < t.rows.size(); ++k) {
    EXPECT_GT(t.rows[k].iteration, t.rows[k - 1].iteration);
    EXPECT_GE(t.rows[k].oracle_calls, t.rows[k - 1].oracle_calls);
  }
}

TEST(Optimizers, DivergenceIsRecordedNotThrown) {
  const GamePtr g = make_affine_bilinear({4, 4, 2});
  RunConfig c = constant(Method::kSimGD, 50.0);
  c.init_scale = 1.0;
  c.max_iterations = 100000;
  c.record_every = 1000;
  Trace t;
  ASSERT_NO_THROW(t = run_method(g, c));
  EXPECT_EQ(t.status, RunStatus::kDiverged);
  EXPECT_LT(t.iterations, 100000u);
  EXPECT_EQ(t.rows.back().iteration, t.iterations);
}

TEST(Optimizers, SameSeedSameTrajectory) {
  const GamePtr g = make_affine_bilinear({6, 6, 2});
  for (Method m : {Method::kAltGD, Method::kEGStochastic, Method::kSVRERestarted}) {
    RunConfig c = constant(m, 0.1, 9);
    c.max_iterations = 500;
    c.init_scale = 1.0;
    const Trace a = run_method(g, c);
    const Trace b = run_method(g, c);
    EXPECT_EQ(a.final_iterate, b.final_iterate);
    c.seed = 10;
    EXPECT_FALSE(run_method(g, c).final_iterate == a.final_iterate);
  }
}

TEST(IterateAverage, TwoPointsAndLongRunMatchRecompute) {
  IterateAverage avg;
  const Point a(Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Constant(1, 4.0));
  const Point b(Eigen::VectorXd::Constant(1, 3.0), Eigen::VectorXd::Constant(1, -2.0));
  avg.reset(a);
  avg.add(b);
  EXPECT_DOUBLE_EQ(avg.value().theta[0], 2.0);
  EXPECT_DOUBLE_EQ(avg.value().phi[0], 1.0);

  const GamePtr g = make_affine_bilinear({5, 5, 1});
  RunConfig c = constant(Method::kEGStochastic, 0.3, 1);
  c.init_scale = 1.0;
  OptimizerRun run(g, c);
  Point sum = run.iterate();
  for (int k = 1; k <= 10000; ++k) {
    run.step_extragradient(OptimizerRun::Oracle::kStochastic);
    sum += run.iterate();
  }
  sum *= 1.0 / 10001.0;
  EXPECT_LT(distance(sum, run.average().value()), 1e-12 * std::max(1.0, sum.norm()));
}

TEST(Optimizers, SagaMemorizationConverges) {
  QuadraticGameSpec spec;
  spec.d = 4;
  spec.n = 8;
  const GamePtr g = make_quadratic_game(spec);
  RunConfig c = constant(Method::kSVRE, 0.2, 1);
  c.memorization = Memorization::kSaga;
  c.init_scale = 1.0;
  c.max_iterations = 20000;
  c.record_every = 20000;
  const Trace t = run_method(g, c);
  EXPECT_LT(t.rows.back().distance_to_nash, 1e-6 * t.initial_distance);
}

TEST(Optimizers, ConfigValidation) {
  const GamePtr g = make_affine_bilinear({4, 4, 2});
  RunConfig c = constant(Method::kSVRE, 0.1);
  EXPECT_THROW(validate(c, *g), std::invalid_argument);  // no budget
  c.max_iterations = 10;
  EXPECT_NO_THROW(validate(c, *g));
  c.policy.kind = PolicyKind::kAdam;
  EXPECT_THROW(validate(c, *g), std::invalid_argument);
  c.policy.kind = PolicyKind::kVrad;
  c.batch_size = 5;
  EXPECT_THROW(validate(c, *g), std::invalid_argument);
  c.batch_size = 1;
  c.restart_p = 1.5;
  EXPECT_THROW(validate(c, *g), std::invalid_argument);
  EXPECT_THROW(method_from_string("svre2"), std::invalid_argument);
}

}  // namespace
}  // namespace svre
