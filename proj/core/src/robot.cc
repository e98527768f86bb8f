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

#include <algorithm>
#include <cmath>

#include "ttes/errors.h"

namespace ttes {

namespace {

constexpr double kDeg = M_PI / 180.0;

JointSpec Prismatic(const char* name, Vec3 axis, double lo, double hi,
                    double vmax) {
  return {name, JointKind::kPrismatic, Vec3::Zero(), axis, lo, hi, vmax};
}

JointSpec Revolute(const char* name, Vec3 offset, Vec3 axis, double lo_deg,
                   double hi_deg, double vmax_deg) {
  return {name,         JointKind::kRevolute, offset,          axis,
          lo_deg * kDeg, hi_deg * kDeg,       vmax_deg * kDeg};
}

}  // namespace

RobotModel RobotModel::Default() {
  RobotModel m;
  m.base_position = Vec3(0.0, -2.35, -0.25);
  m.joints = {
      Prismatic("gantry_x", Vec3::UnitX(), -0.8, 0.8, 2.0),
      Prismatic("gantry_y", Vec3::UnitY(), -0.3, 0.3, 2.0),
      Revolute("j1", Vec3::Zero(), Vec3::UnitZ(), -165, 165, 250),
      Revolute("j2", Vec3(0, 0, 0.29), -Vec3::UnitX(), -110, 110, 250),
      Revolute("j3", Vec3(0, 0, 0.27), -Vec3::UnitX(), -110, 70, 250),
      Revolute("j4", Vec3(0, 0, 0.07), Vec3::UnitY(), -160, 160, 320),
      Revolute("j5", Vec3(0, 0.302, 0), -Vec3::UnitX(), -120, 120, 320),
      Revolute("j6", Vec3(0, 0.072, 0), Vec3::UnitY(), -200, 200, 420),
  };
  // paddle handle continues along the flange y axis; face normal is flange z
  m.paddle_offset = Vec3(0, 0.16, 0);
  m.paddle_normal = Vec3::UnitZ();
  return m;
}

JointVector RobotModel::lower() const {
  JointVector v;
  for (int i = 0; i < kNumJoints; ++i) v[i] = joints[i].lo;
  return v;
}

JointVector RobotModel::upper() const {
  JointVector v;
  for (int i = 0; i < kNumJoints; ++i) v[i] = joints[i].hi;
  return v;
}

JointVector RobotModel::velocity_limits() const {
  JointVector v;
  for (int i = 0; i < kNumJoints; ++i) v[i] = joints[i].max_velocity;
  return v;
}

JointVector RobotModel::Clamp(const JointVector& q) const {
  JointVector out;
  for (int i = 0; i < kNumJoints; ++i) {
    out[i] = std::clamp(q[i], joints[i].lo, joints[i].hi);
  }
  return out;
}

bool RobotModel::WithinLimits(const JointVector& q, double tol) const {
  for (int i = 0; i < kNumJoints; ++i) {
    if (q[i] < joints[i].lo - tol || q[i] > joints[i].hi + tol) return false;
  }
  return true;
}

void RobotModel::Validate() const {
  for (const JointSpec& j : joints) {
    if (!(j.lo < j.hi)) {
      throw ConfigError("joint " + j.name + ": limits require lo < hi");
    }
    if (!(j.max_velocity > 0.0)) {
      throw ConfigError("joint " + j.name + ": velocity limit must be > 0");
    }
    if (std::abs(j.axis.norm() - 1.0) > 1e-9) {
      throw ConfigError("joint " + j.name + ": axis must be a unit vector");
    }
  }
  if (std::abs(paddle_normal.norm() - 1.0) > 1e-9) {
    throw ConfigError("paddle normal must be a unit vector");
  }
}

JointVector ForehandPose() {
  JointVector q;
  q << 0.0, 0.0, -0.35, 0.55, -0.45, -0.3, 1.35, 0.0;
  return q;
}

JointVector BackhandPose() {
  JointVector q;
  q << 0.0, 0.0, 0.35, 0.55, -0.45, 0.3, 1.35, 0.0;
  return q;
}

JointVector CenterPose() {
  JointVector q;
  q << 0.0, 0.0, 0.0, 0.55, -0.45, 0.0, 1.35, 0.0;
  return q;
}

ChainFrames ComputeFrames(const RobotModel& model, const JointVector& q) {
  ChainFrames f;
  Vec3 p = model.base_position;
  Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
  for (int i = 0; i < kNumJoints; ++i) {
    const JointSpec& j = model.joints[i];
    p += r * j.offset;
    f.joint_origins[i] = p;
    if (j.kind == JointKind::kPrismatic) {
      p += r * (j.axis * q[i]);
    } else {
      r = r * Eigen::AngleAxisd(q[i], j.axis).toRotationMatrix();
    }
  }
  f.flange = p;
  f.flange_rotation = r;
  f.paddle.center = p + r * model.paddle_offset;
  f.paddle.normal = (r * model.paddle_normal).normalized();
  return f;
}

PaddlePose ForwardKinematics(const RobotModel& model, const JointVector& q,
                             const JointVector& qdot) {
  PaddlePose pose = ComputeFrames(model, q).paddle;
  if (qdot.isZero(0.0)) return pose;
  constexpr double h = 1e-6;
  Vec3 ahead = ComputeFrames(model, q + h * qdot).paddle.center;
  Vec3 behind = ComputeFrames(model, q - h * qdot).paddle.center;
  pose.velocity = (ahead - behind) / (2.0 * h);
  return pose;
}

double SegmentDistance(const Vec3& p0, const Vec3& p1, const Vec3& q0,
                       const Vec3& q1) {
  // closest points on two segments (Ericson, Real-Time Collision Detection)
  const Vec3 d1 = p1 - p0;
  const Vec3 d2 = q1 - q0;
  const Vec3 r = p0 - q0;
  const double a = d1.squaredNorm();
  const double e = d2.squaredNorm();
  const double f = d2.dot(r);
  constexpr double eps = 1e-12;
  double s = 0.0;
  double t = 0.0;
  if (a <= eps && e <= eps) return r.norm();
  if (a <= eps) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = d1.dot(r);
    if (e <= eps) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = d1.dot(d2);
      const double denom = a * e - b * b;
      s = denom > eps ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return ((p0 + d1 * s) - (q0 + d2 * t)).norm();
}

CollisionFlags CheckCollisions(const RobotModel& model, const ChainFrames& f,
                               double paddle_radius, double table_half_width,
                               double table_half_length, double table_height) {
  struct Capsule {
    Vec3 a, b;
    double radius;
  };
  const CapsuleRadii& cr = model.capsules;
  // column: gantry carriage up to the shoulder; upper arm: shoulder to elbow;
  // forearm: elbow to wrist; wrist: wrist to flange; paddle: flange to the
  // paddle center
  const std::array<Capsule, 5> caps = {{
      {f.joint_origins[2], f.joint_origins[3], cr.column},
      {f.joint_origins[3], f.joint_origins[4], cr.upper_arm},
      {f.joint_origins[5], f.joint_origins[6], cr.forearm},
      {f.joint_origins[6], f.flange, cr.wrist},
      {f.flange, f.paddle.center, cr.paddle},
  }};
  CollisionFlags flags;
  static constexpr std::array<std::pair<int, int>, 5> kPairs = {
      {{0, 2}, {0, 3}, {0, 4}, {1, 3}, {1, 4}}};
  for (auto [i, j] : kPairs) {
    double d = SegmentDistance(caps[i].a, caps[i].b, caps[j].a, caps[j].b);
    if (d < caps[i].radius + caps[j].radius) {
      flags.self = true;
      break;
    }
  }
  auto over_table = [&](const Vec3& p) {
    return std::abs(p.x()) < table_half_width &&
           std::abs(p.y()) < table_half_length;
  };
  for (const Capsule& c : caps) {
    for (const Vec3& p : {c.a, c.b}) {
      if (over_table(p) && p.z() - c.radius < table_height) flags.table = true;
    }
  }
  const Vec3& n = f.paddle.normal;
  double rim_drop = paddle_radius * std::sqrt(std::max(0.0, 1.0 - n.z() * n.z()));
  if (over_table(f.paddle.center) &&
      f.paddle.center.z() - rim_drop < table_height) {
    flags.table = true;
  }
  return flags;
}

}  // namespace ttes
