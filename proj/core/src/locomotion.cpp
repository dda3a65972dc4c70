#include "serpent/locomotion.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <Eigen/Dense>

#include "serpent/errors.hpp"

namespace serpent {

Wrench link_drag_force(const Twist& xi_wi, const Mat3& K) { return Wrench::from(-(K * xi_wi.vec())); }

BalanceSystem assemble_balance(const RobotParams& params, const Shape& shape, const Environment& env,
                               const Pose& head_world) {
  const auto poses = link_poses(params, shape.alpha);
  const Point com_local = link_com_local(params);
  BalanceSystem sys;
  sys.omega_alpha = Jacobian::Zero(3, params.joint_count());
  for (int i = 0; i < params.link_count; ++i) {
    const Pose& g = poses[i];
    const Mat3 K = drag_matrix(env, compose(head_world, g).apply(com_local));
    const Mat3 to_link = adjoint(inverse(g));
    // coadjoint(g) == to_link^T
    const Mat3 transported = to_link.transpose() * K;
    sys.omega_z += transported * to_link;
    if (i > 0) sys.omega_alpha += transported * body_jacobian(params, poses, i);
  }
  return sys;
}

Twist head_velocity(const BalanceSystem& sys, const Eigen::VectorXd& alpha_dot, const SolverOptions& options) {
  Mat3 omega_z = sys.omega_z;
  const Mat3 sym = 0.5 * (omega_z + omega_z.transpose());
  const Eigen::SelfAdjointEigenSolver<Mat3> eig(sym, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  const bool ill = !(lo > 0.0) || !(hi / lo <= options.max_condition);
  if (ill) {
    if (!options.tikhonov_fallback) {
      std::ostringstream msg;
      msg << "balance matrix ill-conditioned (eigenvalues " << lo << ", " << hi << ")";
      throw SolverError(msg.str());
    }
    omega_z.diagonal().array() += 1e-9 * omega_z.trace() / 3.0;
  }
  const Vec3 rhs = sys.omega_alpha * alpha_dot;
  return Twist::from(-omega_z.partialPivLu().solve(rhs));
}

Wrench net_drag_wrench(const RobotParams& params, const Shape& shape, const Environment& env,
                       const Pose& head_world, const Twist& xi_w0) {
  const auto poses = link_poses(params, shape.alpha);
  const Point com_local = link_com_local(params);
  Wrench total;
  for (int i = 0; i < params.link_count; ++i) {
    const Pose& g = poses[i];
    const Twist xi_wi = Twist::from(adjoint(inverse(g)) * xi_w0.vec() +
                                    body_jacobian(params, poses, i) * shape.alpha_dot);
    const Mat3 K = drag_matrix(env, compose(head_world, g).apply(com_local));
    total = total + transform(coadjoint(g), link_drag_force(xi_wi, K));
  }
  return total;
}

StepResult step(const SimState& state, const Eigen::VectorXd& alpha_cmd, const Environment& env,
                const RobotParams& params, double dt, const SolverOptions& options) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  if (alpha_cmd.size() != params.joint_count()) {
    throw std::invalid_argument("step: command length must equal link_count - 1");
  }
  const Eigen::VectorXd target = clamp_to_limits(params, alpha_cmd);
  Shape moving{state.shape.alpha, (target - state.shape.alpha) / dt};

  Twist xi;
  if (!moving.alpha_dot.isZero(0.0)) {
    const BalanceSystem sys = assemble_balance(params, moving, env, state.head_world);
    try {
      xi = head_velocity(sys, moving.alpha_dot, options);
    } catch (const SolverError& e) {
      throw SolverError(e.what(), state.time);
    }
  }

  StepResult out;
  out.state.head_world = exp_step(state.head_world, xi, dt);
  out.state.shape = {target, moving.alpha_dot};
  out.state.time = state.time + dt;

  const Point com_before = com_position(params, link_poses(params, state.shape.alpha), state.head_world);
  const Point com_after = com_position(params, link_poses(params, target), out.state.head_world);
  out.record.time = out.state.time;
  out.record.head_world = out.state.head_world;
  out.record.com = com_after;
  out.record.com_speed = (com_after - com_before).norm() / dt;
  out.record.alpha = target;
  out.record.xi_w0 = xi;
  return out;
}

std::size_t step_count(double t0, double t_end, double dt) {
  if (!(t_end > t0)) return 0;
  // Relative slack keeps exact multiples (e.g. 60 / 0.05) from rounding up.
  return static_cast<std::size_t>(std::ceil((t_end - t0) / dt - 1e-9));
}

Trajectory run(const SimState& initial, const CommandSource& controller, const Environment& env,
               const RobotParams& params, double dt, double t_end, const SolverOptions& options) {
  const std::size_t n = step_count(initial.time, t_end, dt);
  Trajectory out;
  out.reserve(n);
  SimState state = initial;
  for (std::size_t k = 0; k < n; ++k) {
    StepResult r = step(state, controller(state), env, params, dt, options);
    state = std::move(r.state);
    out.push_back(std::move(r.record));
  }
  return out;
}

std::size_t window_samples(double window, double dt) {
  const auto n = static_cast<std::size_t>(std::llround(window / dt));
  return n == 0 ? 1 : n;
}

std::vector<SpeedSample> windowed_speed(const Trajectory& trajectory, double window, double dt) {
  if (!(dt > 0.0) || !(window >= dt * (1.0 - 1e-9))) {
    throw std::invalid_argument("windowed_speed: window must be >= dt > 0");
  }
  const std::size_t n = window_samples(window, dt);
  std::vector<SpeedSample> out;
  if (trajectory.size() < n) return out;
  out.reserve(trajectory.size() - n + 1);
  for (std::size_t end = n; end <= trajectory.size(); ++end) {
    double sum = 0.0;
    for (std::size_t m = end - n; m < end; ++m) sum += trajectory[m].com_speed;
    out.push_back({trajectory[end - 1].time, sum / static_cast<double>(n)});
  }
  return out;
}

std::string trajectory_csv(const Trajectory& trajectory, int joint_count) {
  std::string out = "time,x,y,theta,com_x,com_y,com_speed";
  for (int j = 0; j < joint_count; ++j) out += ",alpha_" + std::to_string(j);
  out += '\n';
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.9g", v);
    out += buf;
  };
  for (const StepRecord& r : trajectory) {
    put(r.time);
    for (double v : {r.head_world.x, r.head_world.y, r.head_world.theta, r.com.x(), r.com.y(), r.com_speed}) {
      out += ',';
      put(v);
    }
    for (Eigen::Index j = 0; j < r.alpha.size(); ++j) {
      out += ',';
      put(r.alpha[j]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace serpent
