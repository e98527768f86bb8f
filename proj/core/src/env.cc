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

#include "ttes/env.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <nlohmann/json.hpp>

#include "ttes/errors.h"

namespace ttes {

int NoiseDelayModel::max_observation_delay() const {
  return std::max(ball_delay_max, robot_delay_max);
}

const char* InitPoseName(InitPose pose) {
  return pose == InitPose::kForehand ? "forehand" : "center";
}

InitPose DefaultInitPose(const BallDistribution& dist) {
  return dist.kind == DistributionKind::kForehand ? InitPose::kForehand
                                                  : InitPose::kCenter;
}

void EnvConfig::Validate() const {
  robot.Validate();
  if (!(control_dt > 0.0)) throw ConfigError("control_dt must be > 0");
  if (substeps < 1) throw ConfigError("substeps must be >= 1");
  if (control_dt / substeps > 1e-3 + 1e-12) {
    throw ConfigError("physics step control_dt / substeps must be <= 1 ms");
  }
  if (max_steps < 1) throw ConfigError("max_steps must be >= 1");
  if (noise.ball_noise < 0.0) throw ConfigError("ball_noise must be >= 0");
  if (noise.ball_delay_max < 0 || noise.robot_delay_max < 0 ||
      noise.action_delay_max < 0) {
    throw ConfigError("delay maxima must be >= 0");
  }
  if (init_perturbation < 0.0) {
    throw ConfigError("init_perturbation must be >= 0");
  }
  if (!(physics.paddle_restitution >= 0.0 && physics.table_restitution >= 0.0)) {
    throw ConfigError("restitution coefficients must be >= 0");
  }
}

namespace {

double Uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int HistoryCapacity(const EnvConfig& cfg) {
  return kHistoryLength + cfg.noise.max_observation_delay() + 1;
}

HistoryEntry MakeEntry(const EnvConfig& cfg, EnvState& s) {
  HistoryEntry e;
  e.joints = s.q;
  e.ball = s.ball.position;
  double eps = cfg.noise.ball_noise;
  if (eps > 0.0) {
    for (int i = 0; i < 3; ++i) e.ball[i] += Uniform(s.noise_rng, -eps, eps);
  }
  return e;
}

const HistoryEntry& EntryAt(const EnvState& s, int time) {
  int cap = static_cast<int>(s.history.size());
  return s.history[std::max(time, 0) % cap];
}

// signed distance from the paddle plane and radial offset in the plane
struct PlaneOffset {
  double normal;
  double radial;
};

PlaneOffset OffsetFromPaddle(const Vec3& p, const PaddlePose& paddle) {
  Vec3 rel = p - paddle.center;
  double d = rel.dot(paddle.normal);
  return {d, (rel - d * paddle.normal).norm()};
}

PaddlePose Interpolate(const PaddlePose& a, const PaddlePose& b, double s,
                       const Vec3& velocity) {
  PaddlePose p;
  p.center = a.center + s * (b.center - a.center);
  Vec3 n = a.normal + s * (b.normal - a.normal);
  double norm = n.norm();
  p.normal = norm > 1e-12 ? Vec3(n / norm) : a.normal;
  p.velocity = velocity;
  return p;
}

void RecordPostContact(const EnvConfig& cfg, EnvState& s) {
  double d = cfg.physics.table.DistanceToOpponentHalf(s.ball.position);
  s.events.min_opponent_distance = std::min(s.events.min_opponent_distance, d);
}

}  // namespace

ContactResult PaddleContact(const BallState& ball, const PaddlePose& paddle,
                            const PhysicsParams& params) {
  ContactResult out{ball, false};
  if (!ball.live) return out;
  PlaneOffset off = OffsetFromPaddle(ball.position, paddle);
  if (std::abs(off.normal) > params.ball_radius + params.contact_margin) {
    return out;
  }
  if (off.radial > params.paddle_radius) return out;
  const Vec3& n = paddle.normal;
  Vec3 rel = ball.velocity - paddle.velocity;
  double vn = rel.dot(n);
  // must be moving toward the face it is on
  double side = off.normal >= 0.0 ? 1.0 : -1.0;
  if (vn * side >= 0.0) return out;
  Vec3 tangential = rel - vn * n;
  out.ball.velocity =
      tangential - params.paddle_restitution * vn * n + paddle.velocity;
  out.contact = true;
  return out;
}

EnvState ResetWithThrow(const EnvConfig& cfg, const ThrowSpec& spec,
                        InitPose init_pose, Rng& rng) {
  EnvState s;
  s.noise_rng.seed(rng());
  s.throw_spec = spec;
  s.ball.position = spec.start;
  s.ball.velocity = spec.velocity;
  s.ball.live = true;

  JointVector q = init_pose == InitPose::kForehand ? cfg.forehand_pose
                                                   : cfg.center_pose;
  double amp = cfg.init_perturbation;
  if (amp > 0.0) {
    for (int i = 0; i < kNumJoints; ++i) q[i] += Uniform(rng, -amp, amp);
  }
  s.q = cfg.robot.Clamp(q);
  s.qdot.setZero();

  auto draw_delay = [&rng](int max) {
    return max > 0 ? std::uniform_int_distribution<int>(0, max)(rng) : 0;
  };
  s.ball_delay = draw_delay(cfg.noise.ball_delay_max);
  s.robot_delay = draw_delay(cfg.noise.robot_delay_max);
  s.action_delay = draw_delay(cfg.noise.action_delay_max);
  s.pending_actions.assign(s.action_delay, JointVector::Zero());

  s.history.assign(HistoryCapacity(cfg), MakeEntry(cfg, s));
  s.paddle = ComputeFrames(cfg.robot, s.q).paddle;
  s.events = EpisodeEvents{};
  s.events.min_opponent_distance = std::numeric_limits<double>::infinity();
  s.step = 0;
  s.terminated = false;
  return s;
}

EnvState Reset(const EnvConfig& cfg, const BallDistribution& dist,
               InitPose init_pose, Rng& rng) {
  ThrowSpec spec = SampleThrow(dist, rng, cfg.physics);
  return ResetWithThrow(cfg, spec, init_pose, rng);
}

StepEvents Step(const EnvConfig& cfg, EnvState& s, const JointVector& action) {
  if (s.terminated) {
    throw ContractViolation("Step called on a terminated episode");
  }
  StepEvents ev;
  const PhysicsParams& phys = cfg.physics;
  const double dt = cfg.control_dt;

  // action delay queue
  JointVector command = action;
  if (s.action_delay > 0) {
    s.pending_actions.push_back(action);
    command = s.pending_actions.front();
    s.pending_actions.pop_front();
  }

  // joints
  const JointVector vmax = cfg.robot.velocity_limits();
  JointVector v = command.cwiseMax(-vmax).cwiseMin(vmax);
  JointVector q_next = cfg.robot.Clamp(s.q + v * dt);
  s.qdot = (q_next - s.q) / dt;

  ChainFrames frames = ComputeFrames(cfg.robot, q_next);
  const PaddlePose start = s.paddle;
  const PaddlePose end = frames.paddle;
  const Vec3 paddle_velocity = (end.center - start.center) / dt;
  s.q = q_next;

  // ball sub-steps
  const int n = cfg.substeps;
  const double h = dt / n;
  for (int k = 0; k < n && s.ball.live; ++k) {
    BallEvents be;
    BallState before = s.ball;
    BallState after = StepBall(before, h, phys, &be);

    if (!s.events.hit) {
      PaddlePose p1 = Interpolate(start, end, double(k + 1) / n,
                                  paddle_velocity);
      ContactResult c = PaddleContact(after, p1, phys);
      if (!c.contact && before.live) {
        // swept check: the ball may have passed through the plane within
        // the sub-step
        PaddlePose p0 = Interpolate(start, end, double(k) / n,
                                    paddle_velocity);
        double d0 = OffsetFromPaddle(before.position, p0).normal;
        double d1 = OffsetFromPaddle(after.position, p1).normal;
        if (d0 * d1 < 0.0) {
          double lo = 0.0, hi = 1.0;
          BallState mid_ball = before;
          PaddlePose mid_paddle = p0;
          for (int it = 0; it < 40; ++it) {
            double mid = 0.5 * (lo + hi);
            mid_ball = StepBall(before, mid * h, phys);
            mid_paddle = Interpolate(start, end, (k + mid) / n,
                                     paddle_velocity);
            double dm = OffsetFromPaddle(mid_ball.position, mid_paddle).normal;
            if (dm * d0 > 0.0) {
              lo = mid;
            } else {
              hi = mid;
            }
          }
          mid_ball = StepBall(before, hi * h, phys);
          mid_paddle = Interpolate(start, end, (k + hi) / n, paddle_velocity);
          c = PaddleContact(mid_ball, mid_paddle, phys);
          if (!c.contact && mid_ball.live) {
            // evaluate on the approach side of the plane
            BallState approach = StepBall(before, lo * h, phys);
            PaddlePose pa = Interpolate(start, end, (k + lo) / n,
                                        paddle_velocity);
            c = PaddleContact(approach, pa, phys);
            if (c.contact) hi = lo;
          }
          if (c.contact) {
            be = BallEvents{};
            after = StepBall(c.ball, (1.0 - hi) * h, phys, &be);
          }
        }
      } else if (c.contact) {
        after = c.ball;
        be = BallEvents{};
      }
      if (c.contact) {
        s.events.hit = true;
        s.events.contact_step = s.step;
        ev.contact = true;
      }
      s.ball = after;
      if (s.events.hit) RecordPostContact(cfg, s);
      continue;
    }

    s.ball = after;
    if (be.table_bounce) {
      const Vec3& p = be.bounce_point;
      s.events.landing_point = p;
      s.events.min_opponent_distance = std::min(
          s.events.min_opponent_distance,
          phys.table.DistanceToOpponentHalf(p));
      if (phys.table.InsideOpponentHalf(p.x(), p.y())) {
        s.events.success = true;
        ev.success = true;
      }
      // the return is resolved at its first bounce either way
      s.ball.live = false;
      break;
    }
    if (be.net) s.events.net = true;
    RecordPostContact(cfg, s);
  }

  // collisions
  CollisionFlags col = CheckCollisions(
      cfg.robot, frames, phys.paddle_radius, phys.table.half_width(),
      phys.table.half_length(), phys.table.height);
  if (col.self) s.events.self_collision = true;
  if (col.table) s.events.table_collision = true;
  ev.collision = col.any();

  s.paddle = end;
  s.paddle.velocity = paddle_velocity;
  ++s.step;
  s.history[s.step % s.history.size()] = MakeEntry(cfg, s);
  if (s.events.hit) s.events.post_contact_ball.push_back(s.ball.position);

  bool behind = !s.events.hit && s.ball.position.y() < cfg.back_plane_y;
  if (!s.ball.live || behind || s.step >= cfg.max_steps) {
    s.terminated = true;
  }
  ev.terminated = s.terminated;
  return ev;
}

Observation Observe(const EnvConfig& cfg, const EnvState& s) {
  (void)cfg;
  Observation obs;
  for (int r = 0; r < kHistoryLength; ++r) {
    int t = s.step - (kHistoryLength - 1 - r);
    const HistoryEntry& joints = EntryAt(s, t - s.robot_delay);
    const HistoryEntry& ball = EntryAt(s, t - s.ball_delay);
    obs.row(r).head<kNumJoints>() = joints.joints.transpose();
    obs.row(r).tail<3>() = ball.ball.transpose();
  }
  return obs;
}

StateFeatures CurrentFeatures(const EnvState& s) {
  StateFeatures f;
  f.head<kNumJoints>() = s.q;
  f.tail<3>() = s.ball.position;
  return f;
}

void WriteEventLogLine(std::ostream& os, int episode, const EnvState& s) {
  using nlohmann::json;
  auto vec = [](const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); };
  json j;
  j["episode"] = episode;
  j["steps"] = s.step;
  j["side"] = SideName(s.throw_spec.side);
  j["throw"] = {{"start", vec(s.throw_spec.start)},
                {"target", json::array({s.throw_spec.target_x,
                                        s.throw_spec.target_y})},
                {"velocity", vec(s.throw_spec.velocity)}};
  j["delays"] = {{"ball", s.ball_delay},
                 {"robot", s.robot_delay},
                 {"action", s.action_delay}};
  const EpisodeEvents& e = s.events;
  j["hit"] = e.hit;
  j["success"] = e.success;
  j["self_collision"] = e.self_collision;
  j["table_collision"] = e.table_collision;
  j["net"] = e.net;
  j["contact_step"] = e.contact_step;
  j["landing"] = e.landing_point ? vec(*e.landing_point) : json(nullptr);
  j["min_opponent_distance"] =
      e.hit ? json(e.min_opponent_distance) : json(nullptr);
  json traj = json::array();
  for (const Vec3& p : e.post_contact_ball) traj.push_back(vec(p));
  j["post_contact_ball"] = std::move(traj);
  os << j.dump() << '\n';
}

}  // namespace ttes
