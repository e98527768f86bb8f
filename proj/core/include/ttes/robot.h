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

#ifndef TTES_ROBOT_H_
#define TTES_ROBOT_H_

#include <array>
#include <string>

#include <Eigen/Geometry>

#include "ttes/types.h"

namespace ttes {

enum class JointKind { kPrismatic, kRevolute };

// One joint of the serial chain. The joint frame is the parent frame
// translated by `offset`; motion is then applied about / along `axis`
// (expressed in that frame).
struct JointSpec {
  std::string name;
  JointKind kind = JointKind::kRevolute;
  Vec3 offset = Vec3::Zero();
  Vec3 axis = Vec3::UnitZ();
  double lo = -1.0;
  double hi = 1.0;
  double max_velocity = 1.0;  // rad/s or m/s
};

// collision proxy radii (meters)
struct CapsuleRadii {
  double column = 0.09;
  double upper_arm = 0.06;
  double forearm = 0.05;
  double wrist = 0.04;
  double paddle = 0.06;
};

struct RobotModel {
  std::array<JointSpec, kNumJoints> joints;
  Vec3 base_position = Vec3::Zero();
  // flange frame -> paddle center, and paddle face normal in the flange frame
  Vec3 paddle_offset = Vec3::Zero();
  Vec3 paddle_normal = Vec3::UnitZ();
  CapsuleRadii capsules;
  // workspace box used for sanity checks
  Vec3 workspace_lo = Vec3(-2.0, -3.5, -0.76);
  Vec3 workspace_hi = Vec3(2.0, 0.0, 2.0);

  // Two linear axes (x across the table, y along it) carrying a six-axis
  // arm with IRB120-like link lengths, mounted behind the robot's end of
  // the table.
  static RobotModel Default();

  JointVector lower() const;
  JointVector upper() const;
  JointVector velocity_limits() const;
  JointVector Clamp(const JointVector& q) const;
  bool WithinLimits(const JointVector& q, double tol = 0.0) const;

  // throws ConfigError when a limit is inverted or an axis is degenerate
  void Validate() const;
};

// canonical reference poses for the default model
JointVector ForehandPose();
JointVector BackhandPose();
JointVector CenterPose();

struct PaddlePose {
  Vec3 center = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();
  Vec3 velocity = Vec3::Zero();
};

// joint-frame origins (index i = frame of joint i), flange pose and paddle
struct ChainFrames {
  std::array<Vec3, kNumJoints> joint_origins;
  Vec3 flange = Vec3::Zero();
  Eigen::Matrix3d flange_rotation = Eigen::Matrix3d::Identity();
  PaddlePose paddle;
};

ChainFrames ComputeFrames(const RobotModel& model, const JointVector& q);

// Paddle pose at q. The paddle velocity is the central finite difference of
// the paddle center along qdot (zero when qdot is zero).
PaddlePose ForwardKinematics(const RobotModel& model, const JointVector& q,
                             const JointVector& qdot = JointVector::Zero());

struct CollisionFlags {
  bool self = false;
  bool table = false;
  bool any() const { return self || table; }
};

// Capsule proxies for the column, upper arm, forearm, wrist and paddle.
// Self collision: non-adjacent capsules overlap. Table collision: a capsule
// dips below the table plane while over the table top.
CollisionFlags CheckCollisions(const RobotModel& model, const ChainFrames& f,
                               double paddle_radius, double table_half_width,
                               double table_half_length, double table_height);

// closest distance between segments [p0, p1] and [q0, q1]
double SegmentDistance(const Vec3& p0, const Vec3& p1, const Vec3& q0,
                       const Vec3& q1);

}  // namespace ttes

#endif  // TTES_ROBOT_H_
