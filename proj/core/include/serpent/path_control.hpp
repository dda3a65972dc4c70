#pragma once

#include <deque>
#include <numbers>
#include <vector>

#include <Eigen/Core>

#include "serpent/locomotion.hpp"
#include "serpent/se2.hpp"
#include "serpent/snake_model.hpp"

namespace serpent {

struct ControllerParams {
  double p_gain = 0.1;
  double d_gain = 0.0;  // seconds
  double los_radius = 4.0;
  double wave_amplitude = std::numbers::pi / 6.0;
  double wave_frequency = 0.5;   // Hz
  double shift_interval = 0.25;  // per-joint delay of the head command, seconds

  /// Defaults scaled to the robot: los_radius = 2 link lengths and one full
  /// wave period spread over the joints.
  static ControllerParams defaults_for(const RobotParams& robot);
  void validate(double dt) const;
};

/// Polyline with cumulative arc length.
class Polyline {
 public:
  Polyline() = default;
  explicit Polyline(std::vector<Point> points);

  const std::vector<Point>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  double length() const { return arc_.empty() ? 0.0 : arc_.back(); }
  /// Arc length at the start of vertex k.
  double arc_at(std::size_t k) const { return arc_[k]; }
  Point point_at(double s) const;

  struct Projection {
    Point point;
    double arc = 0.0;
    double distance = 0.0;
  };
  /// Nearest point on the path at or beyond arc length `from`.
  Projection project(const Point& p, double from = 0.0) const;

 private:
  std::vector<Point> points_;
  std::vector<double> arc_;
};

struct LosTarget {
  Point target;
  double progress = 0.0;  // arc length of the target along the path, never decreases
};

/// Furthest intersection of the circle (head, radius) with the path that is not
/// behind `progress`. Falls back to the nearest path point when the circle misses.
LosTarget los_target(const Pose& head_world, const Polyline& path, double progress, double radius);

/// Signed angle from the head's x axis to the target, in (-pi, pi]; left is positive.
double heading_error(const Pose& head_world, const Point& target);

/// p * e + d * (e - e_prev) / dt, clamped to +-limit.
double pd_command(double error, double prev_error, double dt, const ControllerParams& params, double limit);

/// amplitude * sin(2 pi f t) + steering, clamped to +-limit.
double compose_head_command(double t, double steering, const ControllerParams& params, double limit);

/// History of head commands replayed down the body with a fixed per-joint delay.
class WaveState {
 public:
  WaveState() = default;
  WaveState(Eigen::VectorXd initial_alpha, double dt, double shift_interval);

  /// Steps of delay applied to joint j.
  int delay_steps(int joint) const;
  std::size_t history_size() const { return history_.size(); }
  bool operator==(const WaveState&) const = default;

 private:
  friend Eigen::VectorXd propagate_wave(WaveState& state, double head_cmd);
  std::vector<double> initial_;
  double dt_ = 0.05;
  double shift_interval_ = 0.25;
  std::deque<double> history_;  // newest first
  std::size_t capacity_ = 1;
};

/// Records head_cmd and returns the joint commands: joint j gets the head
/// command from round(j * tau / dt) steps ago, or its initial angle before that.
Eigen::VectorXd propagate_wave(WaveState& state, double head_cmd);

/// Closed-loop command source that follows a polyline with LOS + PD steering
/// on top of a traveling wave.
class PathFollower {
 public:
  PathFollower() = default;
  PathFollower(const RobotParams& robot, const ControllerParams& params, double dt, Polyline path,
               const Eigen::VectorXd& initial_alpha);

  Eigen::VectorXd command(const SimState& state);

  /// Switches to a new path segment while keeping wave history and error memory.
  void set_path(Polyline path);

  const Polyline& path() const { return path_; }
  double progress() const { return progress_; }
  const Point& last_target() const { return last_target_; }
  bool operator==(const PathFollower&) const;

 private:
  RobotParams robot_;
  ControllerParams params_;
  double dt_ = 0.05;
  Polyline path_;
  double progress_ = 0.0;
  double prev_error_ = 0.0;
  bool has_prev_ = false;
  WaveState wave_;
  Point last_target_ = Point::Zero();
};

}  // namespace serpent
