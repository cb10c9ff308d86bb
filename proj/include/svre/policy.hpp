#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "svre/point.hpp"

namespace svre {

enum class PolicyKind { kConstant, kAdam, kVrad };

std::string to_string(PolicyKind kind);
PolicyKind policy_kind_from_string(const std::string& name);

struct PolicyParams {
  PolicyKind kind = PolicyKind::kConstant;
  double eta_theta = 0.1;
  double eta_phi = 0.1;
  double beta1 = 0.0;
  double beta2 = 0.9;
  double eps = 1e-8;
};

// Throws std::invalid_argument: eta <= 0 or non-finite, beta outside [0, 1),
// eps < 0.
void validate(const PolicyParams& params);

/// Turns a raw gradient estimate into the step that is subtracted from the
/// iterate. Each player keeps its own moment state and step counter.
///
///   constant  eta * g
///   adam      eta * m_hat / (sqrt(v_hat) + eps)
///   vrad      eta * |m_hat| / (sqrt(v_hat) + eps) * m_hat
///
/// with m_t = b1 m_{t-1} + (1 - b1) g, v_t = b2 v_{t-1} + (1 - b2) g^2 and the
/// bias corrections m_hat = m_t / (1 - b1^t), v_hat = v_t / (1 - b2^t). A zero
/// denominator (eps = 0 and no gradient seen yet) yields a zero step.
class StepSizePolicy {
 public:
  StepSizePolicy(const PolicyParams& params, Eigen::Index d_theta, Eigen::Index d_phi);

  const PolicyParams& params() const { return params_; }

  /// Advances both players' state once.
  Point direction(const Point& raw);
  void direction_into(const Point& raw, Point& out);
  /// Advances only player 1 (theta) or player 2 (phi).
  void theta_direction_into(const Eigen::VectorXd& raw, Eigen::VectorXd& out);
  void phi_direction_into(const Eigen::VectorXd& raw, Eigen::VectorXd& out);

  std::uint64_t steps_theta() const { return theta_.t; }
  std::uint64_t steps_phi() const { return phi_.t; }

 private:
  struct PlayerState {
    Eigen::VectorXd m;
    Eigen::VectorXd v;
    std::uint64_t t = 0;
  };
  void advance(PlayerState& s, double eta, const Eigen::VectorXd& raw, Eigen::VectorXd& out) const;

  PolicyParams params_;
  PlayerState theta_;
  PlayerState phi_;
};

}  // namespace svre
