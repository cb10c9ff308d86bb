#include "svre/point.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace svre {

double Point::norm() const { return std::sqrt(squared_norm()); }

Eigen::VectorXd Point::concatenated() const {
  Eigen::VectorXd out(size());
  out << theta, phi;
  return out;
}

Point Point::split(const Eigen::VectorXd& stacked, Eigen::Index d_theta) {
  if (d_theta < 0 || d_theta > stacked.size()) throw std::invalid_argument("Point::split: bad player-1 dimension");
  return {stacked.head(d_theta), stacked.tail(stacked.size() - d_theta)};
}

void require_same_shape(const Point& a, const Point& b, const char* what) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" + std::to_string(a.theta.size()) + "," +
                                std::to_string(a.phi.size()) + ") vs (" + std::to_string(b.theta.size()) + "," +
                                std::to_string(b.phi.size()) + ")");
  }
}

double distance(const Point& a, const Point& b) {
  require_same_shape(a, b, "distance");
  return std::sqrt((a.theta - b.theta).squaredNorm() + (a.phi - b.phi).squaredNorm());
}

}  // namespace svre
