#include <gtest/gtest.h>

#include "svre/policy.hpp"

namespace svre {
namespace {

double step(StepSizePolicy& p, double g) {
  Eigen::VectorXd out(1);
  p.theta_direction_into(Eigen::VectorXd::Constant(1, g), out);
  return out[0];
}

TEST(Policy, ConstantScalesRaw) {
  StepSizePolicy p({PolicyKind::kConstant, 0.1, 0.1, 0.0, 0.9, 1e-8}, 1, 1);
  EXPECT_DOUBLE_EQ(step(p, 2.0), 0.2);
}

TEST(Policy, AdamFirstStepIsEta) {
  StepSizePolicy p({PolicyKind::kAdam, 0.1, 0.1, 0.0, 0.9, 0.0}, 1, 1);
  EXPECT_NEAR(step(p, 1.0), 0.1, 1e-15);
}

TEST(Policy, VradSignFollowsMomentum) {
  StepSizePolicy up({PolicyKind::kVrad, 0.1, 0.1, 0.0, 0.9, 0.0}, 1, 1);
  EXPECT_NEAR(step(up, 1.0), 0.1, 1e-15);
  StepSizePolicy down({PolicyKind::kVrad, 0.1, 0.1, 0.0, 0.9, 0.0}, 1, 1);
  EXPECT_NEAR(step(down, -1.0), -0.1, 1e-15);
}

TEST(Policy, ZeroGradientWithZeroEpsGivesZeroStep) {
  StepSizePolicy p({PolicyKind::kAdam, 0.1, 0.1, 0.9, 0.9, 0.0}, 1, 1);
  EXPECT_EQ(step(p, 0.0), 0.0);
}

TEST(Policy, PlayersKeepSeparateState) {
  StepSizePolicy p({PolicyKind::kAdam, 0.1, 0.2, 0.0, 0.9, 0.0}, 1, 2);
  Point raw(Eigen::VectorXd::Constant(1, 3.0), Eigen::VectorXd::Constant(2, -1.0));
  const Point d = p.direction(raw);
  EXPECT_NEAR(d.theta[0], 0.1, 1e-15);
  EXPECT_NEAR(d.phi[1], -0.2, 1e-15);
  EXPECT_EQ(p.steps_theta(), 1u);
  Eigen::VectorXd out(2);
  p.phi_direction_into(Eigen::VectorXd::Constant(2, 1.0), out);
  EXPECT_EQ(p.steps_theta(), 1u);
  EXPECT_EQ(p.steps_phi(), 2u);
}

TEST(Policy, ValidationRejectsBadParameters) {
  EXPECT_THROW(validate(PolicyParams{PolicyKind::kConstant, 0.0, 0.1, 0.0, 0.9, 1e-8}), std::invalid_argument);
  EXPECT_THROW(validate(PolicyParams{PolicyKind::kAdam, 0.1, 0.1, 1.0, 0.9, 1e-8}), std::invalid_argument);
  EXPECT_THROW(validate(PolicyParams{PolicyKind::kAdam, 0.1, 0.1, 0.0, -0.1, 1e-8}), std::invalid_argument);
  EXPECT_THROW(validate(PolicyParams{PolicyKind::kAdam, 0.1, 0.1, 0.0, 0.9, -1.0}), std::invalid_argument);
  EXPECT_THROW(policy_kind_from_string("sgd"), std::invalid_argument);
  EXPECT_EQ(policy_kind_from_string(to_string(PolicyKind::kVrad)), PolicyKind::kVrad);
}

}  // namespace
}  // namespace svre
