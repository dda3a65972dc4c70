#include "serpent/snake_model.hpp"

#include <algorithm>
#include <string>

#include "serpent/errors.hpp"

namespace serpent {

namespace {

void check_index(const RobotParams& params, int i) {
  if (i < 0 || i >= params.link_count) {
    throw std::out_of_range("link index " + std::to_string(i) + " outside [0, " +
                            std::to_string(params.link_count) + ")");
  }
}

}  // namespace

void RobotParams::validate() const {
  if (link_count < 2) throw ValidationError("robot.link_count must be >= 2");
  if (!(link_length > 0.0)) throw ValidationError("robot.link_length must be > 0");
  if (!(com_offset >= 0.0 && com_offset <= link_length)) {
    throw ValidationError("robot.com_offset must lie in [0, link_length]");
  }
  if (!(joint_limit > 0.0)) throw ValidationError("robot.joint_limit must be > 0");
}

Shape Shape::straight(const RobotParams& params) {
  return {Eigen::VectorXd::Zero(params.joint_count()), Eigen::VectorXd::Zero(params.joint_count())};
}

void Shape::validate(const RobotParams& params) const {
  if (alpha.size() != params.joint_count() || alpha_dot.size() != params.joint_count()) {
    throw ValidationError("shape vectors must have length link_count - 1 = " +
                          std::to_string(params.joint_count()));
  }
}

Eigen::VectorXd clamp_to_limits(const RobotParams& params, Eigen::VectorXd alpha) {
  for (Eigen::Index j = 0; j < alpha.size(); ++j) {
    alpha[j] = std::clamp(alpha[j], -params.joint_limit, params.joint_limit);
  }
  return alpha;
}

std::vector<Pose> link_poses(const RobotParams& params, const Eigen::VectorXd& alpha) {
  std::vector<Pose> poses(static_cast<std::size_t>(params.link_count));
  const Pose link_offset(-params.link_length, 0.0, 0.0);
  for (int i = 1; i < params.link_count; ++i) {
    poses[i] = compose(compose(poses[i - 1], link_offset), Pose(0.0, 0.0, alpha[i - 1]));
  }
  return poses;
}

Pose link_pose(const RobotParams& params, const Shape& shape, int i) {
  check_index(params, i);
  shape.validate(params);
  return link_poses(params, shape.alpha)[i];
}

Jacobian body_jacobian(const RobotParams& params, const std::vector<Pose>& poses, int i) {
  check_index(params, i);
  Jacobian jac = Jacobian::Zero(3, params.joint_count());
  // Joint j rotates about the origin of link j+1; its unit twist seen from link i
  // is Ad_{g^-1}(0,0,1) with g the pose of link i in link j+1.
  const Pose inv_i = inverse(poses[i]);
  for (int j = 0; j < i; ++j) {
    const Pose joint_in_i = compose(inv_i, poses[j + 1]);
    jac.col(j) << joint_in_i.y, -joint_in_i.x, 1.0;
  }
  return jac;
}

Jacobian body_jacobian(const RobotParams& params, const Shape& shape, int i) {
  check_index(params, i);
  shape.validate(params);
  return body_jacobian(params, link_poses(params, shape.alpha), i);
}

Twist link_world_velocity(const RobotParams& params, const Shape& shape, const Twist& xi_w0, int i) {
  check_index(params, i);
  shape.validate(params);
  const auto poses = link_poses(params, shape.alpha);
  const Vec3 v = adjoint(inverse(poses[i])) * xi_w0.vec() +
                 body_jacobian(params, poses, i) * shape.alpha_dot;
  return Twist::from(v);
}

Point com_position(const RobotParams& params, const std::vector<Pose>& poses, const Pose& head_world) {
  Point sum = Point::Zero();
  const Point local = link_com_local(params);
  for (const Pose& p : poses) sum += compose(head_world, p).apply(local);
  return sum / static_cast<double>(poses.size());
}

Point com_position(const RobotParams& params, const Shape& shape, const Pose& head_world) {
  shape.validate(params);
  return com_position(params, link_poses(params, shape.alpha), head_world);
}

}  // namespace serpent
