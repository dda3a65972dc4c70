#pragma once

#include <numbers>
#include <vector>

#include <Eigen/Core>

#include "serpent/se2.hpp"

namespace serpent {

using Jacobian = Eigen::Matrix<double, 3, Eigen::Dynamic>;

/// Planar serial chain. Link 0 is the head; the body trails along the head's -x axis.
/// Joint j sits at the proximal end of link j+1 and rotates it relative to link j.
struct RobotParams {
  int link_count = 9;
  double link_length = 2.0;  // inches
  double com_offset = 1.0;   // from a link's proximal frame, toward its tail
  double joint_limit = std::numbers::pi / 2.0;

  int joint_count() const { return link_count - 1; }
  /// Throws ValidationError.
  void validate() const;
};

struct Shape {
  Eigen::VectorXd alpha;
  Eigen::VectorXd alpha_dot;

  static Shape straight(const RobotParams& params);
  /// Throws ValidationError when vector lengths do not match the chain.
  void validate(const RobotParams& params) const;
};

Eigen::VectorXd clamp_to_limits(const RobotParams& params, Eigen::VectorXd alpha);

/// Pose of link i in the head frame.
Pose link_pose(const RobotParams& params, const Shape& shape, int i);

/// Poses of all links in the head frame, index 0 is identity.
std::vector<Pose> link_poses(const RobotParams& params, const Eigen::VectorXd& alpha);

/// Maps alpha_dot to the body velocity of link i relative to the head, in link i's frame.
/// Columns j >= i are zero.
Jacobian body_jacobian(const RobotParams& params, const Shape& shape, int i);

/// Same as body_jacobian, reusing precomputed link poses.
Jacobian body_jacobian(const RobotParams& params, const std::vector<Pose>& poses, int i);

/// Body velocity of link i in its own frame, given the head's world body velocity.
Twist link_world_velocity(const RobotParams& params, const Shape& shape, const Twist& xi_w0, int i);

/// COM of a link, in the link's own frame.
inline Point link_com_local(const RobotParams& params) { return {-params.com_offset, 0.0}; }

/// Mean of the link COM world positions (equal link masses).
Point com_position(const RobotParams& params, const Shape& shape, const Pose& head_world);
Point com_position(const RobotParams& params, const std::vector<Pose>& poses, const Pose& head_world);

}  // namespace serpent
