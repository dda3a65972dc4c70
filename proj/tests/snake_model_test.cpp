#include "serpent/snake_model.hpp"

#include <numbers>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "serpent/errors.hpp"
#include "test_util.hpp"

namespace serpent {
namespace {

using testing::homogeneous;
constexpr double kPi = std::numbers::pi;

RobotParams unit_robot(int links) {
  RobotParams p;
  p.link_count = links;
  p.link_length = 1.0;
  p.com_offset = 0.5;
  return p;
}

void expect_pose_near(const Pose& a, const Pose& b, double tol) {
  EXPECT_NEAR(a.x, b.x, tol);
  EXPECT_NEAR(a.y, b.y, tol);
  EXPECT_LE(testing::angle_diff(a.theta, b.theta), tol);
}

// Chain pose by explicit matrix products: translate back one link, then rotate.
Mat3 chain_matrix(const RobotParams& p, const Eigen::VectorXd& alpha, int i) {
  Mat3 m = Mat3::Identity();
  for (int j = 0; j < i; ++j) m = m * homogeneous(-p.link_length, 0, 0) * homogeneous(0, 0, alpha[j]);
  return m;
}

TEST(RobotParams, Validation) {
  RobotParams p;
  EXPECT_NO_THROW(p.validate());
  p.link_count = 1;
  EXPECT_THROW(p.validate(), ValidationError);
  p = {};
  p.link_length = 0;
  EXPECT_THROW(p.validate(), ValidationError);
  p = {};
  p.com_offset = p.link_length * 1.5;
  EXPECT_THROW(p.validate(), ValidationError);
}

TEST(Shape, LengthsMustMatchChain) {
  const RobotParams p;
  Shape s = Shape::straight(p);
  EXPECT_NO_THROW(s.validate(p));
  s.alpha.resize(3);
  EXPECT_THROW(s.validate(p), ValidationError);
}

TEST(ClampToLimits, ClampsEachJoint) {
  const RobotParams p;
  Eigen::VectorXd a = Eigen::VectorXd::Constant(p.joint_count(), 3.0);
  a[1] = -4.0;
  a[2] = 0.25;
  const Eigen::VectorXd c = clamp_to_limits(p, a);
  EXPECT_EQ(c[0], p.joint_limit);
  EXPECT_EQ(c[1], -p.joint_limit);
  EXPECT_EQ(c[2], 0.25);
}

TEST(LinkPose, Examples) {
  const RobotParams p = unit_robot(9);
  Shape s = Shape::straight(p);
  expect_pose_near(link_pose(p, s, 0), Pose::identity(), 0);
  expect_pose_near(link_pose(p, s, 3), {-3, 0, 0}, 1e-15);
  s.alpha[0] = kPi / 2;
  // T(-1) R(pi/2) T(-1): the second link hangs off at a right angle.
  expect_pose_near(link_pose(p, s, 2), {-1, -1, kPi / 2}, 1e-15);
}

TEST(LinkPose, OutOfRangeThrows) {
  const RobotParams p;
  const Shape s = Shape::straight(p);
  EXPECT_THROW(link_pose(p, s, -1), std::out_of_range);
  EXPECT_THROW(link_pose(p, s, p.link_count), std::out_of_range);
}

TEST(LinkPose, TelescopesPerJointTransforms) {
  const RobotParams p;
  std::mt19937_64 rng(11);
  for (int k = 0; k < 100; ++k) {
    const Shape s = testing::random_shape(rng, p);
    const auto poses = link_poses(p, s.alpha);
    for (int i = 0; i < p.link_count; ++i) {
      expect_pose_near(poses[i], testing::from_homogeneous(chain_matrix(p, s.alpha, i)), 1e-12);
      expect_pose_near(link_pose(p, s, i), poses[i], 0);
    }
  }
}

TEST(BodyJacobian, HeadIsZero) {
  const RobotParams p;
  std::mt19937_64 rng(12);
  const Shape s = testing::random_shape(rng, p);
  EXPECT_TRUE(body_jacobian(p, s, 0).isZero(0.0));
}

TEST(BodyJacobian, ZeroPaddingIsExact) {
  const RobotParams p;
  std::mt19937_64 rng(13);
  for (int k = 0; k < 50; ++k) {
    const Shape s = testing::random_shape(rng, p);
    for (int i = 0; i < p.link_count; ++i) {
      const Jacobian J = body_jacobian(p, s, i);
      ASSERT_EQ(J.cols(), p.joint_count());
      for (int j = i; j < p.joint_count(); ++j) EXPECT_EQ(J.col(j).norm(), 0.0);
    }
  }
}

TEST(BodyJacobian, MatchesFiniteDifferences) {
  const RobotParams p;
  const double eps = 1e-6;
  std::mt19937_64 rng(14);
  for (int k = 0; k < 50; ++k) {
    const Shape s = testing::random_shape(rng, p);
    for (int i = 1; i < p.link_count; ++i) {
      const Mat3 g = chain_matrix(p, s.alpha, i);
      const Jacobian J = body_jacobian(p, s, i);
      for (int j = 0; j < p.joint_count(); ++j) {
        Eigen::VectorXd a = s.alpha;
        a[j] += eps;
        const Vec3 fd = testing::vee(g.inverse() * (chain_matrix(p, a, i) - g) / eps);
        EXPECT_LE((J.col(j) - fd).cwiseAbs().maxCoeff(), 1e-5) << "link " << i << " joint " << j;
      }
    }
  }
}

TEST(BodyJacobian, StraightChainMatchesRevoluteScrews) {
  // A unit revolute joint at q (in the link frame) has body twist (q_y, -q_x, 1).
  const RobotParams p = unit_robot(9);
  const Shape s = Shape::straight(p);
  const Jacobian J1 = body_jacobian(p, s, 1);
  EXPECT_LE((J1.col(0) - Vec3(0, 0, 1)).norm(), 1e-15);
  const Jacobian J3 = body_jacobian(p, s, 3);
  // Joints 0, 1, 2 sit 2, 1, 0 link lengths ahead of link 3's frame.
  EXPECT_LE((J3.col(0) - Vec3(0, -2, 1)).norm(), 1e-14);
  EXPECT_LE((J3.col(1) - Vec3(0, -1, 1)).norm(), 1e-14);
  EXPECT_LE((J3.col(2) - Vec3(0, 0, 1)).norm(), 1e-14);
}

TEST(LinkWorldVelocity, Examples) {
  const RobotParams p = unit_robot(9);
  const Shape s = Shape::straight(p);
  std::mt19937_64 rng(15);
  const Twist xi = testing::random_twist(rng);
  EXPECT_EQ(link_world_velocity(p, s, xi, 0), xi);
  for (int i = 0; i < p.link_count; ++i) {
    const Twist v = link_world_velocity(p, s, {1, 0, 0}, i);
    EXPECT_NEAR(v.vx, 1, 1e-15);
    EXPECT_NEAR(v.vy, 0, 1e-15);
    EXPECT_NEAR(v.omega, 0, 1e-15);
  }
  // Head spinning CCW about its origin: a point two lengths behind moves toward -y.
  const Twist v2 = link_world_velocity(p, s, {0, 0, 1}, 2);
  EXPECT_NEAR(v2.vx, 0, 1e-15);
  EXPECT_NEAR(v2.vy, -2, 1e-15);
  EXPECT_NEAR(v2.omega, 1, 1e-15);
}

TEST(LinkWorldVelocity, MatchesMotionOfLinkFrame) {
  // Oracle: differentiate the world matrix of link i along the head twist and shape rate.
  const RobotParams p;
  std::mt19937_64 rng(16);
  const double h = 1e-5;
  for (int k = 0; k < 30; ++k) {
    const Shape s = testing::random_shape(rng, p);
    const Twist xi = testing::random_twist(rng);
    const Mat3 head_fwd = Mat3::Identity() + testing::hat(xi.vec()) * h;
    const Mat3 head_back = Mat3::Identity() - testing::hat(xi.vec()) * h;
    for (int i = 0; i < p.link_count; ++i) {
      const Mat3 g = chain_matrix(p, s.alpha, i);
      const Mat3 g_fwd = head_fwd * chain_matrix(p, s.alpha + h * s.alpha_dot, i);
      const Mat3 g_back = head_back * chain_matrix(p, s.alpha - h * s.alpha_dot, i);
      const Vec3 fd = testing::vee(g.inverse() * (g_fwd - g_back) / (2 * h));
      EXPECT_LE((link_world_velocity(p, s, xi, i).vec() - fd).cwiseAbs().maxCoeff(), 1e-7);
    }
  }
}

TEST(ComPosition, StraightChain) {
  const RobotParams p = unit_robot(3);
  const Point c = com_position(p, Shape::straight(p), Pose::identity());
  EXPECT_NEAR(c.x(), -1.5, 1e-15);
  EXPECT_NEAR(c.y(), 0, 1e-15);
}

TEST(ComPosition, RotatesCovariantly) {
  const RobotParams p;
  std::mt19937_64 rng(17);
  for (int k = 0; k < 50; ++k) {
    const Shape s = testing::random_shape(rng, p);
    const Pose head = testing::random_pose(rng);
    const Pose rot{testing::uniform(rng, -5, 5), testing::uniform(rng, -5, 5), testing::uniform(rng, -3, 3)};
    const Point moved = com_position(p, s, compose(rot, head));
    const Point expect = rot.apply(com_position(p, s, head));
    EXPECT_LE((moved - expect).norm(), 1e-12);
  }
}

TEST(ComPosition, BentChainMatchesLinkOffsets) {
  const RobotParams p;
  std::mt19937_64 rng(18);
  const Shape s = testing::random_shape(rng, p);
  const Pose head{2, -1, 0.4};
  Vec3 sum = Vec3::Zero();
  for (int i = 0; i < p.link_count; ++i) {
    sum += homogeneous(head) * chain_matrix(p, s.alpha, i) * Vec3(-p.com_offset, 0, 1);
  }
  sum /= p.link_count;
  const Point c = com_position(p, s, head);
  EXPECT_NEAR(c.x(), sum.x(), 1e-12);
  EXPECT_NEAR(c.y(), sum.y(), 1e-12);
}

}  // namespace
}  // namespace serpent
