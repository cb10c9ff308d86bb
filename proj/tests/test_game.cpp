#include <gtest/gtest.h>

#include "svre/game.hpp"
#include "svre/rng.hpp"

namespace svre {
namespace {

Point random_point(const FiniteSumGame& g, std::uint64_t seed) {
  Rng rng(seed);
  Point p = g.zero_point();
  for (Eigen::Index k = 0; k < p.theta.size(); ++k) p.theta[k] = rng.normal();
  for (Eigen::Index k = 0; k < p.phi.size(); ++k) p.phi[k] = rng.normal();
  return p;
}

TEST(BilinearCounterexample, SampleOperatorByHand) {
  const double eps = 0.3;
  const GamePtr g = make_bilinear_counterexample({3, eps});
  Point w = g->zero_point();
  w.theta << 1.0, 2.0, 3.0;
  w.phi << -1.0, 0.5, 4.0;
  const Point f = sample_operator(*g, 1, w);
  // Only coordinate 1 is touched: (eps theta_1 + phi_1, eps phi_1 - theta_1).
  EXPECT_DOUBLE_EQ(f.theta[1], eps * 2.0 + 0.5);
  EXPECT_DOUBLE_EQ(f.phi[1], eps * 0.5 - 2.0);
  EXPECT_EQ(f.theta[0], 0.0);
  EXPECT_EQ(f.phi[2], 0.0);
  ASSERT_TRUE(g->nash().has_value());
  EXPECT_EQ(g->nash()->squared_norm(), 0.0);
}

TEST(AffineBilinear, NashMatchesClosedForm) {
  const GamePtr g = make_affine_bilinear({8, 8, 4});
  const double n = 8.0;
  const Point nash = *g->nash();
  // v = (b_bar + phi/n, -c_bar - theta/n) vanishes at theta = -n c_bar, phi = -n b_bar.
  const Point v0 = full_operator(*g, g->zero_point());
  const Eigen::VectorXd b_bar = v0.theta;
  const Eigen::VectorXd c_bar = -v0.phi;
  EXPECT_LT((nash.theta + n * c_bar).norm(), 1e-12);
  EXPECT_LT((nash.phi + n * b_bar).norm(), 1e-12);
  EXPECT_LT(full_operator(*g, nash).norm(), 1e-12);
}

TEST(AffineBilinear, SameSeedSameGame) {
  const GamePtr a = make_affine_bilinear({5, 5, 11});
  const GamePtr b = make_affine_bilinear({5, 5, 11});
  const Point w = random_point(*a, 1);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(sample_operator(*a, i, w), sample_operator(*b, i, w));
  EXPECT_THROW(make_affine_bilinear({5, 4, 0}), std::invalid_argument);
}

TEST(QuadraticGame, NashAtOriginAndSamplesDisagree) {
  QuadraticGameSpec spec;
  spec.d = 6;
  spec.n = 7;
  const GamePtr g = make_quadratic_game(spec);
  EXPECT_EQ(g->nash()->squared_norm(), 0.0);
  EXPECT_LT(full_operator(*g, g->zero_point()).norm(), 1e-12);
  EXPECT_GT(sample_operator(*g, 0, g->zero_point()).norm(), 0.0);
}

TEST(Operators, FullIsMeanOfSamples) {
  const GamePtr g = make_affine_bilinear({6, 6, 2});
  const Point w = random_point(*g, 3);
  Point sum = g->zero_point();
  for (std::size_t i = 0; i < g->n(); ++i) sum += sample_operator(*g, i, w);
  sum *= 1.0 / 6.0;
  EXPECT_LT(distance(sum, full_operator(*g, w)), 1e-14);
  const std::vector<std::size_t> all{0, 1, 2, 3, 4, 5};
  EXPECT_LT(distance(minibatch_operator(*g, all, w), full_operator(*g, w)), 1e-14);
}

TEST(Operators, RejectBadInput) {
  const GamePtr g = make_affine_bilinear({4, 4, 2});
  const Point w = g->zero_point();
  EXPECT_THROW(sample_operator(*g, 4, w), std::out_of_range);
  EXPECT_THROW(sample_operator(*g, 0, Point::zeros(3, 4)), std::invalid_argument);
  Point bad = w;
  bad.theta[0] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(full_operator(*g, bad), std::invalid_argument);
  const std::vector<std::size_t> dup{1, 1};
  EXPECT_THROW(minibatch_operator(*g, dup, w), std::invalid_argument);
  EXPECT_THROW(minibatch_operator(*g, std::span<const std::size_t>(), w), std::invalid_argument);
}

TEST(DenseAffineGame, NoNashWhenSingularWithOffset) {
  std::vector<AffineSample> s{{Eigen::MatrixXd::Zero(2, 2), Eigen::VectorXd::Ones(2)}};
  const GamePtr g = make_dense_affine_game(1, 1, s);
  EXPECT_FALSE(g->nash().has_value());
  EXPECT_THROW(distance_to_nash(*g, g->zero_point()), std::logic_error);
}

}  // namespace
}  // namespace svre
