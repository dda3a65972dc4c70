#pragma once

#include <Eigen/Core>

namespace serpent {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;
using Point = Eigen::Vector2d;

/// Wraps an angle into (-pi, pi].
double normalize_angle(double a);

/// Planar rigid transform. Heading is kept in (-pi, pi].
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Pose() = default;
  Pose(double x_, double y_, double theta_);

  static Pose identity() { return {}; }

  Point position() const { return {x, y}; }
  /// Maps a point expressed in this frame into the parent frame.
  Point apply(const Point& p) const;
  /// 3x3 homogeneous matrix.
  Mat3 matrix() const;

  bool operator==(const Pose&) const = default;
};

/// Body velocity (vx, vy, omega).
struct Twist {
  double vx = 0.0;
  double vy = 0.0;
  double omega = 0.0;

  Vec3 vec() const { return {vx, vy, omega}; }
  static Twist from(const Vec3& v) { return {v[0], v[1], v[2]}; }

  Twist operator+(const Twist& o) const { return {vx + o.vx, vy + o.vy, omega + o.omega}; }
  Twist operator-(const Twist& o) const { return {vx - o.vx, vy - o.vy, omega - o.omega}; }
  Twist operator*(double s) const { return {vx * s, vy * s, omega * s}; }
  bool operator==(const Twist&) const = default;
};

inline Twist operator*(double s, const Twist& t) { return t * s; }

/// Generalized planar force (fx, fy, tau), dual to Twist.
struct Wrench {
  double fx = 0.0;
  double fy = 0.0;
  double tau = 0.0;

  Vec3 vec() const { return {fx, fy, tau}; }
  static Wrench from(const Vec3& v) { return {v[0], v[1], v[2]}; }

  Wrench operator+(const Wrench& o) const { return {fx + o.fx, fy + o.fy, tau + o.tau}; }
  Wrench operator*(double s) const { return {fx * s, fy * s, tau * s}; }
  bool operator==(const Wrench&) const = default;
};

/// Power of a wrench acting on a twist expressed in the same frame.
inline double power(const Wrench& f, const Twist& xi) {
  return f.fx * xi.vx + f.fy * xi.vy + f.tau * xi.omega;
}

Pose compose(const Pose& a, const Pose& b);
Pose inverse(const Pose& g);

/// Re-expresses a twist given in frame B in frame A, where g is B's pose in A.
Mat3 adjoint(const Pose& g);

/// Dual of adjoint acting on wrenches: transpose(adjoint(inverse(g))).
Mat3 coadjoint(const Pose& g);

Twist transform(const Mat3& m, const Twist& xi);
Wrench transform(const Mat3& m, const Wrench& f);

/// Group exponential of a body twist held constant for dt.
Pose exp_twist(const Twist& xi, double dt);

/// g * exp(dt * xi). Requires dt > 0.
Pose exp_step(const Pose& g, const Twist& xi, double dt);

}  // namespace serpent
