#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "serpent/environment.hpp"
#include "serpent/se2.hpp"
#include "serpent/snake_model.hpp"

namespace serpent {

struct SimState {
  Pose head_world;
  Shape shape;
  double time = 0.0;

  bool operator==(const SimState& o) const {
    return head_world == o.head_world && shape.alpha == o.shape.alpha &&
           shape.alpha_dot == o.shape.alpha_dot && time == o.time;
  }
};

/// Force balance omega_z * xi_w0 = -omega_alpha * alpha_dot, expressed in the head frame.
struct BalanceSystem {
  Mat3 omega_z = Mat3::Zero();
  Jacobian omega_alpha;
};

struct StepRecord {
  double time = 0.0;
  Pose head_world;
  Point com = Point::Zero();
  double com_speed = 0.0;
  Eigen::VectorXd alpha;
  Twist xi_w0;

  bool operator==(const StepRecord& o) const {
    return time == o.time && head_world == o.head_world && com == o.com &&
           com_speed == o.com_speed && alpha == o.alpha && xi_w0 == o.xi_w0;
  }
};

using Trajectory = std::vector<StepRecord>;

struct SolverOptions {
  double max_condition = 1e12;
  /// Regularize instead of failing when omega_z is ill-conditioned.
  bool tikhonov_fallback = false;
};

/// -K * xi.
Wrench link_drag_force(const Twist& xi_wi, const Mat3& K);

/// Sums transported link drags: omega_z = sum coAd(g_0i) K_i Ad(g_0i^-1),
/// omega_alpha = sum coAd(g_0i) K_i J_i, with K_i sampled at each link COM.
BalanceSystem assemble_balance(const RobotParams& params, const Shape& shape, const Environment& env,
                               const Pose& head_world);

/// -omega_z^-1 omega_alpha alpha_dot. Throws SolverError when omega_z is ill-conditioned.
Twist head_velocity(const BalanceSystem& sys, const Eigen::VectorXd& alpha_dot,
                    const SolverOptions& options = {});

/// Head-frame sum of link drag wrenches for a candidate head velocity; zero at balance.
Wrench net_drag_wrench(const RobotParams& params, const Shape& shape, const Environment& env,
                       const Pose& head_world, const Twist& xi_w0);

struct StepResult {
  SimState state;
  StepRecord record;
};

/// Tracks a commanded joint position over one step of length dt.
StepResult step(const SimState& state, const Eigen::VectorXd& alpha_cmd, const Environment& env,
                const RobotParams& params, double dt, const SolverOptions& options = {});

/// Produces the joint command for the next step.
using CommandSource = std::function<Eigen::VectorXd(const SimState&)>;

/// ceil((t_end - t0) / dt) steps. SolverError carries the failing time.
Trajectory run(const SimState& initial, const CommandSource& controller, const Environment& env,
               const RobotParams& params, double dt, double t_end, const SolverOptions& options = {});

/// Number of steps run() takes to cover [t0, t_end].
std::size_t step_count(double t0, double t_end, double dt);

struct SpeedSample {
  double time;
  double speed;
};

/// Trailing mean of com_speed over `window` seconds; one entry per full window.
std::vector<SpeedSample> windowed_speed(const Trajectory& trajectory, double window, double dt);

/// Samples per speed window, at least one.
std::size_t window_samples(double window, double dt);

/// CSV with header time,x,y,theta,com_x,com_y,com_speed,alpha_0..; 9 significant digits.
std::string trajectory_csv(const Trajectory& trajectory, int joint_count);

}  // namespace serpent
