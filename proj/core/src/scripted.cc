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

#include "ttes/scripted.h"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace ttes {
namespace {

using Vec6 = Eigen::Matrix<double, 6, 1>;

constexpr double kNormalWeight = 0.3;

Vec6 PoseError(const RobotModel& model, const JointVector& q,
               const Vec3& center, const Vec3& normal) {
  const PaddlePose p = ComputeFrames(model, q).paddle;
  Vec6 e;
  e.head<3>() = center - p.center;
  e.tail<3>() = kNormalWeight * (normal - p.normal);
  return e;
}

}  // namespace

std::optional<Intercept> PredictIntercept(const BallState& ball,
                                          const PhysicsParams& physics,
                                          double hit_y, double horizon) {
  constexpr double kDt = 1e-4;
  BallState b = ball;
  bool bounced = false;
  for (double t = 0.0; t < horizon && b.live; t += kDt) {
    BallEvents ev;
    BallState next = StepBall(b, kDt, physics, &ev);
    if (ev.table_bounce) bounced = true;
    if (bounced && b.position.y() > hit_y && next.position.y() <= hit_y &&
        next.live) {
      double s = (b.position.y() - hit_y) /
                 (b.position.y() - next.position.y());
      Intercept out;
      out.point = b.position + s * (next.position - b.position);
      out.velocity = b.velocity + s * (next.velocity - b.velocity);
      out.time = t + s * kDt;
      return out;
    }
    b = next;
  }
  return std::nullopt;
}

JointVector SolvePaddleIk(const RobotModel& model, const JointVector& q0,
                          const Vec3& center, const Vec3& normal,
                          int iterations) {
  constexpr double kLambda = 0.05;
  constexpr double kH = 1e-6;
  JointVector q = model.Clamp(q0);
  JointVector best = q;
  double best_err = PoseError(model, q, center, normal).norm();
  for (int it = 0; it < iterations; ++it) {
    const Vec6 e = PoseError(model, q, center, normal);
    Eigen::Matrix<double, 6, kNumJoints> jac;
    for (int j = 0; j < kNumJoints; ++j) {
      JointVector qp = q;
      qp[j] += kH;
      jac.col(j) = (e - PoseError(model, qp, center, normal)) / kH;
    }
    const Eigen::Matrix<double, 6, 6> jjt =
        jac * jac.transpose() +
        kLambda * kLambda * Eigen::Matrix<double, 6, 6>::Identity();
    const JointVector dq = jac.transpose() * jjt.ldlt().solve(e);
    q = model.Clamp(q + dq);
    const double err = PoseError(model, q, center, normal).norm();
    if (err < best_err) {
      best_err = err;
      best = q;
    }
    if (err < 1e-6) break;
  }
  return best;
}

void ScriptedController::Begin(const EnvConfig& cfg, const EnvState& state) {
  target_.reset();
  dt_ = cfg.control_dt;
  limits_ = cfg.robot.velocity_limits();
  std::optional<Intercept> hit =
      PredictIntercept(state.ball, cfg.physics, options_.hit_y);
  if (!hit || hit->point.x() < options_.x_min ||
      hit->point.x() > options_.x_max) {
    return;
  }
  // mirror normal that turns the incoming direction toward the target,
  // aimed slightly upward to clear the net
  Vec3 out = options_.return_target - hit->point;
  out.z() = 0.35 * out.head<2>().norm();
  const Vec3 n = (out.normalized() - hit->velocity.normalized()).normalized();
  target_ = SolvePaddleIk(cfg.robot, state.q, hit->point, n);
  arrival_time_ = hit->time;
}

JointVector ScriptedController::Act(const Observation& obs,
                                    const EnvState& state) {
  (void)obs;
  if (!target_) return JointVector::Zero();
  const double remaining = arrival_time_ - state.step * dt_;
  // arrive with half the remaining time to spare, then hold
  const double horizon = std::max(dt_, 0.5 * remaining);
  JointVector v = (*target_ - state.q) / horizon;
  return v.cwiseMax(-limits_).cwiseMin(limits_);
}

}  // namespace ttes
