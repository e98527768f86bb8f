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

#ifndef TTES_CURRICULUM_H_
#define TTES_CURRICULUM_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ttes/rewards.h"
#include "ttes/throw.h"

namespace ttes {

enum class AdvanceRule {
  kNever,
  kIterations,        // after `iterations` iterations in the stage
  kSuccessThreshold,  // once a probe success rate reaches the threshold
};

const char* AdvanceRuleName(AdvanceRule rule);

struct CurriculumStage {
  std::string name;
  BallDistribution distribution;
  RewardConfig rewards;
  AdvanceRule rule = AdvanceRule::kNever;
  std::uint64_t iterations = 0;
  double success_threshold = 1.0;  // fraction in [0, 1]
};

struct Curriculum {
  std::vector<CurriculumStage> stages;

  // a single stage that never advances
  static Curriculum Single(const BallDistribution& dist,
                           const RewardConfig& rewards);
  // Bimodal schedule:
  //   0: canonical + DCPS on the full table, for `first_stage_iterations`
  //   1: canonical + DTR + CPT, ball range (0.5, 0.7)
  //   2: ball range (0.3, 0.7)
  //   3: ball range (0.1, 0.7)
  //   4: full table
  // stages 1-3 advance on probe success >= `threshold`
  static Curriculum Bimodal(std::uint64_t first_stage_iterations,
                            double threshold);

  // throws ConfigError on an empty list or invalid stage
  void Validate() const;
};

// position in the schedule; stage_start is the iteration at which the
// current stage became active
struct CurriculumState {
  int stage = 0;
  std::uint64_t stage_start = 0;

  bool operator==(const CurriculumState&) const = default;
};

// State for the next iteration after `completed` iterations in total.
// `probe_success` is the latest probe success fraction, if any. Advances
// at most one stage per call and never past the last stage.
CurriculumState AdvanceCurriculum(const Curriculum& curriculum,
                                  const CurriculumState& state,
                                  std::uint64_t completed,
                                  std::optional<double> probe_success);

}  // namespace ttes

#endif  // TTES_CURRICULUM_H_
