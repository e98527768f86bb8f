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

#include "ttes/rollout.h"

namespace ttes {

NetworkController::NetworkController(const ArchSpec& spec,
                                     std::span<const double> theta,
                                     const RunningStats& stats)
    : spec_(spec), theta_(theta), stats_(stats) {}

void NetworkController::Begin(const EnvConfig& cfg, const EnvState& state) {
  (void)state;
  scale_ = cfg.robot.velocity_limits();
}

JointVector NetworkController::Act(const Observation& obs,
                                   const EnvState& state) {
  (void)state;
  return PolicyForward(obs, theta_, spec_, stats_).cwiseProduct(scale_);
}

EpisodeResult RunEpisode(const EnvConfig& cfg, EnvState state,
                         Controller& controller,
                         const RolloutOptions& options) {
  EpisodeResult result;
  EpisodeRecord& rec = result.record;
  rec.dt = cfg.control_dt;
  rec.landing_x = state.throw_spec.target_x;
  rec.positions.reserve(cfg.max_steps + 1);
  rec.velocities.reserve(cfg.max_steps);
  rec.paddle_centers.reserve(cfg.max_steps + 1);
  rec.positions.push_back(state.q);
  rec.paddle_centers.push_back(state.paddle.center);

  std::optional<ActionFilter> filter;
  if (options.filter_cutoff_hz) {
    filter.emplace(*options.filter_cutoff_hz, 1.0 / cfg.control_dt);
  }

  controller.Begin(cfg, state);
  while (!state.terminated) {
    Observation obs = Observe(cfg, state);
    if (options.state_samples && options.state_subsample > 0 &&
        state.step % options.state_subsample == 0) {
      options.state_samples->Push(obs.row(kHistoryLength - 1).transpose());
    }
    JointVector action = controller.Act(obs, state);
    if (filter) action = filter->Apply(action);
    Step(cfg, state, action);
    rec.positions.push_back(state.q);
    rec.velocities.push_back(state.qdot);
    rec.paddle_centers.push_back(state.paddle.center);
  }

  const EpisodeEvents& ev = state.events;
  rec.hit = ev.hit;
  rec.success = ev.success;
  rec.collision = ev.self_collision || ev.table_collision;
  rec.contact_step = ev.contact_step;
  rec.min_opponent_distance = ev.min_opponent_distance;
  rec.ball_after_contact = ev.post_contact_ball;
  result.final_state = std::move(state);
  return result;
}

}  // namespace ttes
