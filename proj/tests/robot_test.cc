// Copyright 2026 The ttes Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ttes/robot.h"

#include <cmath>

#include <gtest/gtest.h>

#include "ttes/errors.h"
#include "ttes/physics.h"

namespace ttes {
namespace {

// rotation about a unit axis, written out from the Rodrigues formula
Eigen::Matrix3d Rodrigues(const Vec3& k, double angle) {
  Eigen::Matrix3d kx;
  kx << 0, -k.z(), k.y(), k.z(), 0, -k.x(), -k.y(), k.x(), 0;
  return Eigen::Matrix3d::Identity() + std::sin(angle) * kx +
         (1.0 - std::cos(angle)) * kx * kx;
}

PaddlePose OracleForwardKinematics(const RobotModel& m, const JointVector& q) {
  Vec3 p = m.base_position;
  Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
  for (int i = 0; i < kNumJoints; ++i) {
    const JointSpec& j = m.joints[i];
    p = p + r * j.offset;
    if (j.kind == JointKind::kPrismatic) {
      p = p + r * j.axis * q[i];
    } else {
      r = r * Rodrigues(j.axis, q[i]);
    }
  }
  PaddlePose out;
  out.center = p + r * m.paddle_offset;
  out.normal = r * m.paddle_normal;
  return out;
}

JointVector RandomPose(const RobotModel& m, Rng& rng) {
  JointVector q;
  for (int i = 0; i < kNumJoints; ++i) {
    q[i] = std::uniform_real_distribution<double>(m.joints[i].lo,
                                                  m.joints[i].hi)(rng);
  }
  return q;
}

TEST(RobotTest, ZeroPoseGolden) {
  RobotModel m = RobotModel::Default();
  PaddlePose p = ForwardKinematics(m, JointVector::Zero());
  // base (0, -2.35, -0.25); vertical links 0.29 + 0.27 + 0.07; wrist and
  // handle along +y 0.302 + 0.072 + 0.16
  EXPECT_NEAR(p.center.x(), 0.0, 1e-15);
  EXPECT_NEAR(p.center.y(), -1.816, 1e-12);
  EXPECT_NEAR(p.center.z(), 0.38, 1e-12);
  EXPECT_NEAR((p.normal - Vec3::UnitZ()).norm(), 0.0, 1e-15);
}

TEST(RobotTest, MatchesRodriguesOracle) {
  RobotModel m = RobotModel::Default();
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    JointVector q = RandomPose(m, rng);
    PaddlePose p = ForwardKinematics(m, q);
    PaddlePose o = OracleForwardKinematics(m, q);
    EXPECT_NEAR((p.center - o.center).norm(), 0.0, 1e-12);
    EXPECT_NEAR((p.normal - o.normal).norm(), 0.0, 1e-12);
  }
}

TEST(RobotTest, PrismaticJointsTranslateExactly) {
  RobotModel m = RobotModel::Default();
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    JointVector q = RandomPose(m, rng);
    q[0] = 0.1;
    q[1] = -0.05;
    Vec3 base = ForwardKinematics(m, q).center;
    JointVector qx = q;
    qx[0] += 0.237;
    Vec3 dx = ForwardKinematics(m, qx).center - base;
    EXPECT_NEAR(dx.x(), 0.237, 1e-12);
    EXPECT_NEAR(dx.y(), 0.0, 1e-12);
    EXPECT_NEAR(dx.z(), 0.0, 1e-12);
    JointVector qy = q;
    qy[1] += 0.11;
    Vec3 dy = ForwardKinematics(m, qy).center - base;
    EXPECT_NEAR(dy.x(), 0.0, 1e-12);
    EXPECT_NEAR(dy.y(), 0.11, 1e-12);
    EXPECT_NEAR(dy.z(), 0.0, 1e-12);
  }
}

TEST(RobotTest, NormalIsUnit) {
  RobotModel m = RobotModel::Default();
  Rng rng(9);
  for (int trial = 0; trial < 500; ++trial) {
    EXPECT_NEAR(ForwardKinematics(m, RandomPose(m, rng)).normal.norm(), 1.0,
                1e-9);
  }
}

TEST(RobotTest, PaddleVelocityMatchesFiniteDifference) {
  RobotModel m = RobotModel::Default();
  Rng rng(10);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    JointVector q = RandomPose(m, rng);
    JointVector qdot;
    for (int i = 0; i < kNumJoints; ++i) qdot[i] = n(rng);
    const double h = 1e-7;
    Vec3 fd = (OracleForwardKinematics(m, q + h * qdot).center -
               OracleForwardKinematics(m, q - h * qdot).center) /
              (2.0 * h);
    EXPECT_NEAR((ForwardKinematics(m, q, qdot).velocity - fd).norm(), 0.0,
                1e-6);
  }
  EXPECT_EQ(ForwardKinematics(m, JointVector::Zero()).velocity, Vec3::Zero());
}

TEST(RobotTest, ClampAndLimits) {
  RobotModel m = RobotModel::Default();
  JointVector q = JointVector::Constant(100.0);
  JointVector c = m.Clamp(q);
  EXPECT_EQ(c, m.upper());
  EXPECT_TRUE(m.WithinLimits(c));
  EXPECT_FALSE(m.WithinLimits(q));
  EXPECT_EQ(m.Clamp(-q), m.lower());
  JointVector over = m.upper();
  over[3] += 1e-3;
  EXPECT_FALSE(m.WithinLimits(over));
  EXPECT_TRUE(m.WithinLimits(over, 2e-3));
}

TEST(RobotTest, ValidateRejectsBadModels) {
  RobotModel m = RobotModel::Default();
  EXPECT_NO_THROW(m.Validate());
  RobotModel inverted = m;
  inverted.joints[4].lo = 1.0;
  inverted.joints[4].hi = -1.0;
  EXPECT_THROW(inverted.Validate(), ConfigError);
  RobotModel slow = m;
  slow.joints[2].max_velocity = 0.0;
  EXPECT_THROW(slow.Validate(), ConfigError);
  RobotModel axis = m;
  axis.joints[6].axis = Vec3(1.0, 1.0, 0.0);
  EXPECT_THROW(axis.Validate(), ConfigError);
}

TEST(RobotTest, ReferencePosesAreSafeAndSided) {
  RobotModel m = RobotModel::Default();
  PhysicsParams phys;
  const TableGeometry& t = phys.table;
  for (const JointVector& q : {ForehandPose(), BackhandPose(), CenterPose()}) {
    EXPECT_TRUE(m.WithinLimits(q));
    ChainFrames f = ComputeFrames(m, q);
    CollisionFlags c = CheckCollisions(m, f, phys.paddle_radius,
                                       t.half_width(), t.half_length(),
                                       t.height);
    EXPECT_FALSE(c.any());
    // behind the end line and above the table plane
    EXPECT_LT(f.paddle.center.y(), -t.half_length());
    EXPECT_GT(f.paddle.center.z(), t.height);
  }
  Vec3 fh = ForwardKinematics(m, ForehandPose()).center;
  Vec3 bh = ForwardKinematics(m, BackhandPose()).center;
  EXPECT_GT(fh.x(), 0.1);
  EXPECT_LT(bh.x(), -0.1);
  EXPECT_NEAR(fh.x(), -bh.x(), 1e-12);
  EXPECT_NEAR(fh.y(), bh.y(), 1e-12);
  EXPECT_NEAR(fh.z(), bh.z(), 1e-12);
}

TEST(RobotTest, SegmentDistanceCases) {
  // parallel, offset by 0.3
  EXPECT_NEAR(SegmentDistance(Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 0.3, 0),
                              Vec3(1, 0.3, 0)),
              0.3, 1e-15);
  // crossing
  EXPECT_NEAR(SegmentDistance(Vec3(-1, 0, 0), Vec3(1, 0, 0), Vec3(0, -1, 0),
                              Vec3(0, 1, 0)),
              0.0, 1e-15);
  // skew, closest points interior
  EXPECT_NEAR(SegmentDistance(Vec3(-1, 0, 0), Vec3(1, 0, 0), Vec3(0, -1, 0.5),
                              Vec3(0, 1, 0.5)),
              0.5, 1e-15);
  // endpoint to endpoint
  EXPECT_NEAR(SegmentDistance(Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0),
                              Vec3(3, 0, 0)),
              1.0, 1e-15);
  // degenerate point
  EXPECT_NEAR(SegmentDistance(Vec3(0, 0, 1), Vec3(0, 0, 1), Vec3(-1, 0, 0),
                              Vec3(1, 0, 0)),
              1.0, 1e-15);
}

TEST(RobotTest, CollisionChecksUseCapsules) {
  RobotModel m = RobotModel::Default();
  PhysicsParams phys;
  const TableGeometry& t = phys.table;
  ChainFrames f;
  // column along z at the origin well behind the table
  const double y = -2.0;
  f.joint_origins[2] = Vec3(0, y, 0.0);
  f.joint_origins[3] = Vec3(0, y, 0.5);
  f.joint_origins[4] = Vec3(0, y + 0.3, 0.5);
  f.joint_origins[5] = Vec3(0, y + 0.3, 0.5);
  // forearm folded back through the column
  f.joint_origins[6] = Vec3(0, y, 0.3);
  f.flange = Vec3(0.3, y, 0.3);
  f.paddle.center = Vec3(0.5, y, 0.3);
  CollisionFlags c = CheckCollisions(m, f, phys.paddle_radius, t.half_width(),
                                     t.half_length(), t.height);
  EXPECT_TRUE(c.self);
  EXPECT_FALSE(c.table);

  // same chain, forearm kept in front: no self contact
  f.joint_origins[6] = Vec3(0, y + 0.6, 0.5);
  f.flange = Vec3(0.0, y + 0.7, 0.5);
  f.paddle.center = Vec3(0.0, y + 0.8, 0.5);
  c = CheckCollisions(m, f, phys.paddle_radius, t.half_width(),
                      t.half_length(), t.height);
  EXPECT_FALSE(c.any());

  // paddle over the table with its rim below the surface
  f.paddle.center = Vec3(0.0, -1.0, 0.03);
  f.paddle.normal = Vec3::UnitX();
  f.flange = Vec3(0.0, -1.1, 0.1);
  c = CheckCollisions(m, f, phys.paddle_radius, t.half_width(),
                      t.half_length(), t.height);
  EXPECT_TRUE(c.table);
}

}  // namespace
}  // namespace ttes
