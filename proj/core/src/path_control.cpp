#include "serpent/path_control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "serpent/errors.hpp"

namespace serpent {

namespace {

// Positive joint angles bend the trailing body clockwise, so turning the head
// toward a target on its left needs a negative head joint.
constexpr double kSteerSign = -1.0;

}  // namespace

ControllerParams ControllerParams::defaults_for(const RobotParams& robot) {
  ControllerParams p;
  p.los_radius = 2.0 * robot.link_length;
  p.shift_interval = 1.0 / (p.wave_frequency * robot.joint_count());
  return p;
}

void ControllerParams::validate(double dt) const {
  if (!(los_radius > 0.0)) throw ValidationError("controller.los_radius must be > 0");
  if (!(shift_interval >= dt * (1.0 - 1e-9))) throw ValidationError("controller.shift_interval must be >= dt");
  if (!(wave_frequency >= 0.0)) throw ValidationError("controller.wave_frequency must be >= 0");
}

Polyline::Polyline(std::vector<Point> points) : points_(std::move(points)) {
  arc_.reserve(points_.size());
  double s = 0.0;
  for (std::size_t k = 0; k < points_.size(); ++k) {
    if (k > 0) s += (points_[k] - points_[k - 1]).norm();
    arc_.push_back(s);
  }
}

Point Polyline::point_at(double s) const {
  if (points_.empty()) throw std::invalid_argument("empty path");
  if (s <= 0.0) return points_.front();
  for (std::size_t k = 1; k < points_.size(); ++k) {
    if (s <= arc_[k]) {
      const double len = arc_[k] - arc_[k - 1];
      const double t = len > 0.0 ? (s - arc_[k - 1]) / len : 0.0;
      return points_[k - 1] + t * (points_[k] - points_[k - 1]);
    }
  }
  return points_.back();
}

Polyline::Projection Polyline::project(const Point& p, double from) const {
  if (points_.empty()) throw std::invalid_argument("empty path");
  Projection best{point_at(from), from, (point_at(from) - p).norm()};
  for (std::size_t k = 1; k < points_.size(); ++k) {
    if (arc_[k] < from) continue;
    const Point a = points_[k - 1], d = points_[k] - a;
    const double len2 = d.squaredNorm();
    double t = len2 > 0.0 ? (p - a).dot(d) / len2 : 0.0;
    const double t_min = arc_[k] > arc_[k - 1] ? std::max(0.0, (from - arc_[k - 1]) / (arc_[k] - arc_[k - 1])) : 0.0;
    t = std::clamp(t, t_min, 1.0);
    const Point q = a + t * d;
    const double dist = (q - p).norm();
    if (dist < best.distance) best = {q, arc_[k - 1] + t * std::sqrt(len2), dist};
  }
  return best;
}

LosTarget los_target(const Pose& head_world, const Polyline& path, double progress, double radius) {
  if (path.size() < 2) throw std::invalid_argument("los_target: path needs at least two points");
  if (!(radius > 0.0)) throw std::invalid_argument("los_target: radius must be positive");
  const Point h = head_world.position();
  const auto& pts = path.points();

  if ((pts.back() - h).norm() <= radius) return {pts.back(), std::max(progress, path.length())};

  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < pts.size(); ++k) {
    if (path.arc_at(k) < progress) continue;
    const Point a = pts[k - 1], d = pts[k] - a;
    const double qa = d.squaredNorm();
    if (qa == 0.0) continue;
    const Point f = a - h;
    const double qb = 2.0 * f.dot(d);
    const double qc = f.squaredNorm() - radius * radius;
    double disc = qb * qb - 4.0 * qa * qc;
    // Tangency computed in floating point can land slightly negative.
    if (disc < 0.0 && disc > -1e-9 * qb * qb - 1e-12 * qa * radius * radius) disc = 0.0;
    if (disc < 0.0) continue;
    const double root = std::sqrt(disc);
    const double len = std::sqrt(qa);
    for (double t : {(-qb - root) / (2.0 * qa), (-qb + root) / (2.0 * qa)}) {
      if (t < 0.0 || t > 1.0) continue;
      const double s = path.arc_at(k - 1) + t * len;
      if (s >= progress && s > best) best = s;
    }
  }
  if (std::isfinite(best)) return {path.point_at(best), best};

  const Polyline::Projection near = path.project(h, progress);
  return {near.point, std::max(progress, near.arc)};
}

double heading_error(const Pose& head_world, const Point& target) {
  const Point d = target - head_world.position();
  if (d.x() == 0.0 && d.y() == 0.0) throw std::invalid_argument("heading_error: target coincides with head");
  return normalize_angle(std::atan2(d.y(), d.x()) - head_world.theta);
}

double pd_command(double error, double prev_error, double dt, const ControllerParams& params, double limit) {
  if (!(dt > 0.0)) throw std::invalid_argument("pd_command: dt must be positive");
  const double u = params.p_gain * error + params.d_gain * (error - prev_error) / dt;
  return std::clamp(u, -limit, limit);
}

double compose_head_command(double t, double steering, const ControllerParams& params, double limit) {
  const double wave = params.wave_amplitude * std::sin(2.0 * std::numbers::pi * params.wave_frequency * t);
  return std::clamp(wave + steering, -limit, limit);
}

WaveState::WaveState(Eigen::VectorXd initial_alpha, double dt, double shift_interval)
    : initial_(initial_alpha.data(), initial_alpha.data() + initial_alpha.size()),
      dt_(dt),
      shift_interval_(shift_interval) {
  if (!(dt > 0.0) || !(shift_interval >= dt * (1.0 - 1e-9))) {
    throw std::invalid_argument("WaveState: need shift_interval >= dt > 0");
  }
  const int joints = static_cast<int>(initial_.size());
  capacity_ = static_cast<std::size_t>(std::max(0, delay_steps(joints - 1))) + 1;
}

int WaveState::delay_steps(int joint) const {
  return static_cast<int>(std::lround(joint * shift_interval_ / dt_));
}

Eigen::VectorXd propagate_wave(WaveState& state, double head_cmd) {
  state.history_.push_front(head_cmd);
  if (state.history_.size() > state.capacity_) state.history_.pop_back();
  const auto joints = static_cast<Eigen::Index>(state.initial_.size());
  Eigen::VectorXd out(joints);
  for (Eigen::Index j = 0; j < joints; ++j) {
    const auto lag = static_cast<std::size_t>(state.delay_steps(static_cast<int>(j)));
    out[j] = lag < state.history_.size() ? state.history_[lag] : state.initial_[j];
  }
  return out;
}

PathFollower::PathFollower(const RobotParams& robot, const ControllerParams& params, double dt, Polyline path,
                           const Eigen::VectorXd& initial_alpha)
    : robot_(robot),
      params_(params),
      dt_(dt),
      path_(std::move(path)),
      wave_(initial_alpha, dt, params.shift_interval) {
  params_.validate(dt);
}

void PathFollower::set_path(Polyline path) {
  path_ = std::move(path);
  progress_ = 0.0;
}

Eigen::VectorXd PathFollower::command(const SimState& state) {
  const LosTarget los = los_target(state.head_world, path_, progress_, params_.los_radius);
  progress_ = los.progress;
  last_target_ = los.target;

  double error = 0.0;
  if ((los.target - state.head_world.position()).norm() > 0.0) error = heading_error(state.head_world, los.target);
  if (!has_prev_) {
    prev_error_ = error;
    has_prev_ = true;
  }
  const double steering = kSteerSign * pd_command(error, prev_error_, dt_, params_, robot_.joint_limit);
  prev_error_ = error;
  const double head_cmd = compose_head_command(state.time, steering, params_, robot_.joint_limit);
  return propagate_wave(wave_, head_cmd);
}

bool PathFollower::operator==(const PathFollower& o) const {
  return path_.points() == o.path_.points() && progress_ == o.progress_ && prev_error_ == o.prev_error_ &&
         has_prev_ == o.has_prev_ && wave_ == o.wave_ && last_target_ == o.last_target_;
}

}  // namespace serpent
