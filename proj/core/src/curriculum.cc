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

#include "ttes/curriculum.h"

#include <cstdio>

#include "ttes/errors.h"

namespace ttes {

const char* AdvanceRuleName(AdvanceRule rule) {
  switch (rule) {
    case AdvanceRule::kNever:
      return "never";
    case AdvanceRule::kIterations:
      return "iterations";
    case AdvanceRule::kSuccessThreshold:
      return "success_threshold";
  }
  return "unknown";
}

Curriculum Curriculum::Single(const BallDistribution& dist,
                              const RewardConfig& rewards) {
  Curriculum c;
  c.stages.push_back({"main", dist, rewards, AdvanceRule::kNever, 0, 1.0});
  return c;
}

Curriculum Curriculum::Bimodal(std::uint64_t first_stage_iterations,
                               double threshold) {
  Curriculum c;
  RewardConfig dcps = RewardConfig::Canonical();
  dcps.pose = PoseMode::kDcps;
  c.stages.push_back({"dcps_full_table", BallDistribution::FullTable(), dcps,
                      AdvanceRule::kIterations, first_stage_iterations, 1.0});

  RewardConfig shaped = RewardConfig::Canonical();
  shaped.pose = PoseMode::kCpt;
  shaped.success_shaping = SuccessShaping::kDtr;
  const double lows[] = {0.5, 0.3, 0.1};
  for (double lo : lows) {
    char name[32];
    std::snprintf(name, sizeof(name), "range_%.1f_0.7", lo);
    c.stages.push_back({name, BallDistribution::BallRange(lo, 0.7), shaped,
                        AdvanceRule::kSuccessThreshold, 0, threshold});
  }
  c.stages.push_back({"full_table", BallDistribution::FullTable(), shaped,
                      AdvanceRule::kNever, 0, 1.0});
  return c;
}

void Curriculum::Validate() const {
  if (stages.empty()) throw ConfigError("curriculum has no stages");
  for (const CurriculumStage& s : stages) {
    s.distribution.Validate();
    s.rewards.Validate();
    if (s.rule == AdvanceRule::kIterations && s.iterations == 0) {
      throw ConfigError("curriculum stage '" + s.name +
                        "' advances after 0 iterations");
    }
    if (s.rule == AdvanceRule::kSuccessThreshold &&
        !(s.success_threshold >= 0.0 && s.success_threshold <= 1.0)) {
      throw ConfigError("curriculum stage '" + s.name +
                        "' success threshold must be in [0, 1]");
    }
  }
}

CurriculumState AdvanceCurriculum(const Curriculum& curriculum,
                                  const CurriculumState& state,
                                  std::uint64_t completed,
                                  std::optional<double> probe_success) {
  const int last = static_cast<int>(curriculum.stages.size()) - 1;
  if (state.stage >= last) return state;
  const CurriculumStage& stage = curriculum.stages[state.stage];
  bool fire = false;
  switch (stage.rule) {
    case AdvanceRule::kNever:
      break;
    case AdvanceRule::kIterations:
      fire = completed >= state.stage_start + stage.iterations;
      break;
    case AdvanceRule::kSuccessThreshold:
      fire = probe_success.has_value() &&
             *probe_success >= stage.success_threshold;
      break;
  }
  if (!fire) return state;
  return {state.stage + 1, completed};
}

}  // namespace ttes
