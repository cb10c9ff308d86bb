#include "svre/policy.hpp"

#include <cmath>
#include <stdexcept>

namespace svre {

std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kConstant: return "constant";
    case PolicyKind::kAdam: return "adam";
    case PolicyKind::kVrad: return "vrad";
  }
  return "unknown";
}

PolicyKind policy_kind_from_string(const std::string& name) {
  if (name == "constant") return PolicyKind::kConstant;
  if (name == "adam") return PolicyKind::kAdam;
  if (name == "vrad") return PolicyKind::kVrad;
  throw std::invalid_argument("unknown step-size policy '" + name + "'");
}

void validate(const PolicyParams& p) {
  if (!(p.eta_theta > 0.0) || !std::isfinite(p.eta_theta) || !(p.eta_phi > 0.0) || !std::isfinite(p.eta_phi))
    throw std::invalid_argument("policy: step sizes must be finite and > 0");
  if (!(p.beta1 >= 0.0 && p.beta1 < 1.0) || !(p.beta2 >= 0.0 && p.beta2 < 1.0))
    throw std::invalid_argument("policy: beta1 and beta2 must lie in [0, 1)");
  if (!(p.eps >= 0.0) || !std::isfinite(p.eps)) throw std::invalid_argument("policy: eps must be finite and >= 0");
}

StepSizePolicy::StepSizePolicy(const PolicyParams& params, Eigen::Index d_theta, Eigen::Index d_phi)
    : params_(params) {
  validate(params_);
  theta_.m = Eigen::VectorXd::Zero(d_theta);
  theta_.v = Eigen::VectorXd::Zero(d_theta);
  phi_.m = Eigen::VectorXd::Zero(d_phi);
  phi_.v = Eigen::VectorXd::Zero(d_phi);
}

void StepSizePolicy::advance(PlayerState& s, double eta, const Eigen::VectorXd& raw, Eigen::VectorXd& out) const {
  ++s.t;
  if (params_.kind == PolicyKind::kConstant) {
    out = eta * raw;
    return;
  }
  const double b1 = params_.beta1;
  const double b2 = params_.beta2;
  s.m = b1 * s.m + (1.0 - b1) * raw;
  s.v = b2 * s.v + (1.0 - b2) * raw.cwiseProduct(raw);
  const auto t = static_cast<double>(s.t);
  const double c1 = 1.0 - std::pow(b1, t);
  const double c2 = 1.0 - std::pow(b2, t);
  out.resize(raw.size());
  for (Eigen::Index k = 0; k < raw.size(); ++k) {
    const double m_hat = s.m[k] / c1;
    const double denom = std::sqrt(s.v[k] / c2) + params_.eps;
    if (denom == 0.0) {
      out[k] = 0.0;
      continue;
    }
    const double ratio = params_.kind == PolicyKind::kAdam ? 1.0 / denom : std::abs(m_hat) / denom;
    out[k] = eta * ratio * m_hat;
  }
}

void StepSizePolicy::direction_into(const Point& raw, Point& out) {
  advance(theta_, params_.eta_theta, raw.theta, out.theta);
  advance(phi_, params_.eta_phi, raw.phi, out.phi);
}

Point StepSizePolicy::direction(const Point& raw) {
  require_same_shape(raw, Point::zeros(theta_.m.size(), phi_.m.size()), "policy direction");
  Point out;
  direction_into(raw, out);
  return out;
}

void StepSizePolicy::theta_direction_into(const Eigen::VectorXd& raw, Eigen::VectorXd& out) {
  advance(theta_, params_.eta_theta, raw, out);
}

void StepSizePolicy::phi_direction_into(const Eigen::VectorXd& raw, Eigen::VectorXd& out) {
  advance(phi_, params_.eta_phi, raw, out);
}

}  // namespace svre
