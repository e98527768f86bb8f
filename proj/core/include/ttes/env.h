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

#ifndef TTES_ENV_H_
#define TTES_ENV_H_

#include <deque>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "ttes/physics.h"
#include "ttes/robot.h"
#include "ttes/throw.h"
#include "ttes/types.h"

namespace ttes {

// Per-episode observation corruption. Delays are drawn uniformly from
// [0, max] at reset and held for the episode; ball noise is uniform in
// [-amplitude, amplitude] per axis per step.
struct NoiseDelayModel {
  double ball_noise = 0.005;
  int ball_delay_max = 4;
  int robot_delay_max = 4;
  int action_delay_max = 4;

  int max_observation_delay() const;
};

enum class InitPose { kForehand, kCenter };

const char* InitPoseName(InitPose pose);

// forehand throws start from the forehand pose, everything else centered
InitPose DefaultInitPose(const BallDistribution& dist);

struct EnvConfig {
  PhysicsParams physics;
  RobotModel robot = RobotModel::Default();
  NoiseDelayModel noise;
  double control_dt = 0.01;
  int substeps = 10;
  int max_steps = 300;
  // an unreturned ball behind this plane ends the episode
  double back_plane_y = -3.2;
  // uniform +- perturbation of the reset pose (rad or m)
  double init_perturbation = 0.02;
  JointVector forehand_pose = ForehandPose();
  JointVector center_pose = CenterPose();

  void Validate() const;
};

// one row of raw history: true joints, ball with noise applied at write time
struct HistoryEntry {
  JointVector joints = JointVector::Zero();
  Vec3 ball = Vec3::Zero();
};

struct EpisodeEvents {
  bool hit = false;
  bool success = false;
  bool self_collision = false;
  bool table_collision = false;
  bool net = false;
  int contact_step = -1;
  std::optional<Vec3> landing_point;  // first table contact after the hit
  std::vector<Vec3> post_contact_ball;
  double min_opponent_distance = 0.0;  // valid once hit
};

struct EnvState {
  JointVector q = JointVector::Zero();
  JointVector qdot = JointVector::Zero();  // realized over the last step
  BallState ball;
  ThrowSpec throw_spec;
  PaddlePose paddle;
  int step = 0;
  int ball_delay = 0;
  int robot_delay = 0;
  int action_delay = 0;
  std::vector<HistoryEntry> history;  // ring buffer indexed by step
  std::deque<JointVector> pending_actions;
  EpisodeEvents events;
  bool terminated = false;
  Rng noise_rng;
};

struct StepEvents {
  bool contact = false;
  bool collision = false;
  bool success = false;
  bool terminated = false;
};

// policy input: kHistoryLength rows, oldest first; each row holds the 8
// joint positions followed by the ball position
using Observation =
    Eigen::Matrix<double, kHistoryLength, kObsFeatures, Eigen::RowMajor>;
using StateFeatures = Eigen::Matrix<double, kObsFeatures, 1>;

struct ContactResult {
  BallState ball;
  bool contact = false;
};

// Ball-paddle collision. Contact requires the ball sphere to touch the
// paddle plane (|d| <= r_ball + margin), the projection to fall inside the
// disc and the ball to approach the face. The velocity relative to the
// paddle is reflected about the normal with the normal part scaled by the
// paddle restitution; the paddle velocity is then added back.
ContactResult PaddleContact(const BallState& ball, const PaddlePose& paddle,
                            const PhysicsParams& params);

EnvState Reset(const EnvConfig& cfg, const BallDistribution& dist,
               InitPose init_pose, Rng& rng);

// same, with a caller-provided throw
EnvState ResetWithThrow(const EnvConfig& cfg, const ThrowSpec& spec,
                        InitPose init_pose, Rng& rng);

// One 100 Hz control step with joint velocity command `action`. Throws
// ContractViolation on a terminated episode.
StepEvents Step(const EnvConfig& cfg, EnvState& state,
                const JointVector& action);

Observation Observe(const EnvConfig& cfg, const EnvState& state);

// current true state (joint positions and ball position)
StateFeatures CurrentFeatures(const EnvState& state);

// one JSON object per line; fields documented in README
void WriteEventLogLine(std::ostream& os, int episode, const EnvState& state);

}  // namespace ttes

#endif  // TTES_ENV_H_
