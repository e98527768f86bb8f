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

#ifndef TTES_ROLLOUT_H_
#define TTES_ROLLOUT_H_

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ttes/action_filter.h"
#include "ttes/env.h"
#include "ttes/policy.h"
#include "ttes/rewards.h"
#include "ttes/running_stats.h"

namespace ttes {

// Produces joint velocity commands (rad/s, m/s) once per control step.
class Controller {
 public:
  virtual ~Controller() = default;
  // called once after the environment reset
  virtual void Begin(const EnvConfig& cfg, const EnvState& state) {
    (void)cfg;
    (void)state;
  }
  // `state` is available for scripted controllers; learned controllers
  // only read `obs`
  virtual JointVector Act(const Observation& obs, const EnvState& state) = 0;
};

// Neural controller: raw network output times the per-joint velocity limits.
class NetworkController : public Controller {
 public:
  NetworkController(const ArchSpec& spec, std::span<const double> theta,
                    const RunningStats& stats);
  void Begin(const EnvConfig& cfg, const EnvState& state) override;
  JointVector Act(const Observation& obs, const EnvState& state) override;

 private:
  const ArchSpec& spec_;
  std::span<const double> theta_;
  const RunningStats& stats_;
  JointVector scale_ = JointVector::Ones();
};

struct RolloutOptions {
  // low-pass action filter cutoff; disabled when empty
  std::optional<double> filter_cutoff_hz;
  // every k-th step's newest observation row is pushed into
  // `state_samples` (0 disables)
  int state_subsample = 0;
  RunningStats* state_samples = nullptr;
};

struct EpisodeResult {
  EpisodeRecord record;
  EnvState final_state;
};

// Runs an episode from an already reset state until termination.
EpisodeResult RunEpisode(const EnvConfig& cfg, EnvState state,
                         Controller& controller,
                         const RolloutOptions& options = {});

}  // namespace ttes

#endif  // TTES_ROLLOUT_H_
