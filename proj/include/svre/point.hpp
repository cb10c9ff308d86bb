#pragma once

#include <Eigen/Dense>

namespace svre {

/// Joint iterate of a two-player game: player 1 (theta, the minimizing
/// "generator" side) and player 2 (phi, the "discriminator" side). The same
/// shape carries operator values, gradient estimates and steps.
struct Point {
  Eigen::VectorXd theta;
  Eigen::VectorXd phi;

  Point() = default;
  Point(Eigen::VectorXd t, Eigen::VectorXd p) : theta(std::move(t)), phi(std::move(p)) {}

  static Point zeros(Eigen::Index d_theta, Eigen::Index d_phi) {
    return {Eigen::VectorXd::Zero(d_theta), Eigen::VectorXd::Zero(d_phi)};
  }
  static Point zeros_like(const Point& other) { return zeros(other.theta.size(), other.phi.size()); }

  Eigen::Index size() const { return theta.size() + phi.size(); }
  bool same_shape(const Point& other) const {
    return theta.size() == other.theta.size() && phi.size() == other.phi.size();
  }
  bool all_finite() const { return theta.allFinite() && phi.allFinite(); }

  double squared_norm() const { return theta.squaredNorm() + phi.squaredNorm(); }
  double norm() const;
  double dot(const Point& other) const { return theta.dot(other.theta) + phi.dot(other.phi); }

  /// theta stacked on top of phi.
  Eigen::VectorXd concatenated() const;
  static Point split(const Eigen::VectorXd& stacked, Eigen::Index d_theta);

  void set_zero() {
    theta.setZero();
    phi.setZero();
  }
  // this += scale * other
  void add_scaled(double scale, const Point& other) {
    theta.noalias() += scale * other.theta;
    phi.noalias() += scale * other.phi;
  }

  Point& operator+=(const Point& o) {
    theta += o.theta;
    phi += o.phi;
    return *this;
  }
  Point& operator-=(const Point& o) {
    theta -= o.theta;
    phi -= o.phi;
    return *this;
  }
  Point& operator*=(double s) {
    theta *= s;
    phi *= s;
    return *this;
  }
  friend Point operator+(Point a, const Point& b) { return a += b; }
  friend Point operator-(Point a, const Point& b) { return a -= b; }
  friend Point operator*(double s, Point a) { return a *= s; }
  friend bool operator==(const Point& a, const Point& b) {
    return a.same_shape(b) && a.theta == b.theta && a.phi == b.phi;
  }
};

// Throws std::invalid_argument naming `what` when shapes differ.
void require_same_shape(const Point& a, const Point& b, const char* what);

double distance(const Point& a, const Point& b);

}  // namespace svre
