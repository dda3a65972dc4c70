#include "serpent/se2.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace serpent {

double normalize_angle(double a) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  if (a > -std::numbers::pi && a <= std::numbers::pi) return a;
  double r = std::remainder(a, kTwoPi);
  if (r <= -std::numbers::pi) r += kTwoPi;
  return r;
}

Pose::Pose(double x_, double y_, double theta_) : x(x_), y(y_), theta(normalize_angle(theta_)) {}

Point Pose::apply(const Point& p) const {
  const double c = std::cos(theta), s = std::sin(theta);
  return {x + c * p.x() - s * p.y(), y + s * p.x() + c * p.y()};
}

Mat3 Pose::matrix() const {
  const double c = std::cos(theta), s = std::sin(theta);
  Mat3 m;
  m << c, -s, x, s, c, y, 0.0, 0.0, 1.0;
  return m;
}

Pose compose(const Pose& a, const Pose& b) {
  const double c = std::cos(a.theta), s = std::sin(a.theta);
  return {a.x + c * b.x - s * b.y, a.y + s * b.x + c * b.y, a.theta + b.theta};
}

Pose inverse(const Pose& g) {
  const double c = std::cos(g.theta), s = std::sin(g.theta);
  return {-(c * g.x + s * g.y), s * g.x - c * g.y, -g.theta};
}

Mat3 adjoint(const Pose& g) {
  const double c = std::cos(g.theta), s = std::sin(g.theta);
  Mat3 m;
  m << c, -s, g.y, s, c, -g.x, 0.0, 0.0, 1.0;
  return m;
}

Mat3 coadjoint(const Pose& g) { return adjoint(inverse(g)).transpose(); }

Twist transform(const Mat3& m, const Twist& xi) { return Twist::from(m * xi.vec()); }

Wrench transform(const Mat3& m, const Wrench& f) { return Wrench::from(m * f.vec()); }

Pose exp_twist(const Twist& xi, double dt) {
  const double phi = xi.omega * dt;
  const double vx = xi.vx * dt, vy = xi.vy * dt;
  if (phi == 0.0) return {vx, vy, 0.0};
  // V(phi) = [[sin/phi, -(1-cos)/phi], [(1-cos)/phi, sin/phi]]; series near zero.
  double a, b;
  if (std::abs(phi) < 1e-6) {
    const double p2 = phi * phi;
    a = 1.0 - p2 / 6.0;
    b = phi / 2.0 - phi * p2 / 24.0;
  } else {
    a = std::sin(phi) / phi;
    b = (1.0 - std::cos(phi)) / phi;
  }
  return {a * vx - b * vy, b * vx + a * vy, phi};
}

Pose exp_step(const Pose& g, const Twist& xi, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("exp_step: dt must be positive");
  return compose(g, exp_twist(xi, dt));
}

}  // namespace serpent
