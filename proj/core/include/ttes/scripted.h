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

#ifndef TTES_SCRIPTED_H_
#define TTES_SCRIPTED_H_

#include <limits>
#include <optional>

#include "ttes/env.h"
#include "ttes/rollout.h"

namespace ttes {

// where and when the incoming ball crosses the hitting plane
struct Intercept {
  Vec3 point = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  double time = 0.0;  // from the query state
};

// Rolls the noiseless ball forward until it crosses y = hit_y moving toward
// the robot after at least one table bounce. Empty if the ball dies first.
std::optional<Intercept> PredictIntercept(const BallState& ball,
                                          const PhysicsParams& physics,
                                          double hit_y, double horizon = 2.0);

// Damped least squares on paddle center and normal, starting from q0 and
// respecting joint limits. Returns the best configuration found.
JointVector SolvePaddleIk(const RobotModel& model, const JointVector& q0,
                          const Vec3& center, const Vec3& normal,
                          int iterations = 200);

// Privileged controller used as a test oracle: reads the true ball state at
// Begin, plans a stationary-paddle intercept and drives the joints there.
// Balls whose intercept x lies outside [x_min, x_max] are ignored (the arm
// holds still), which yields side-limited controllers.
class ScriptedController : public Controller {
 public:
  struct Options {
    double hit_y = -1.85;
    Vec3 return_target = Vec3(0.0, 0.8, 0.0);
    double x_min = -std::numeric_limits<double>::infinity();
    double x_max = std::numeric_limits<double>::infinity();
  };

  ScriptedController() = default;
  explicit ScriptedController(Options options) : options_(options) {}

  void Begin(const EnvConfig& cfg, const EnvState& state) override;
  JointVector Act(const Observation& obs, const EnvState& state) override;

  const std::optional<JointVector>& target() const { return target_; }

 private:
  Options options_;
  std::optional<JointVector> target_;
  double arrival_time_ = 0.0;
  double dt_ = 0.01;
  JointVector limits_ = JointVector::Ones();
};

}  // namespace ttes

#endif  // TTES_SCRIPTED_H_
