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

#ifndef TTES_CONFIG_H_
#define TTES_CONFIG_H_

#include <cstdint>
#include <string>

#include "ttes/curriculum.h"
#include "ttes/es.h"
#include "ttes/eval.h"

namespace ttes {

enum class RunMode { kTrain, kEval, kBench };

const char* RunModeName(RunMode mode);

struct EvalSection {
  int episodes = 2500;
  std::uint64_t seed = 1;
  std::string checkpoint;  // empty: <output_dir>/checkpoint.bin
  SmoothnessReduction reduction = SmoothnessReduction::kMaxOverTime;
};

struct BenchSection {
  int episodes = 256;    // per worker count
  int max_workers = 0;   // 0: hardware concurrency
};

// Parsed run configuration. The task's distribution and rewards always
// mirror curriculum stage 0; a file without a curriculum section gets a
// single never-advancing stage built from env.distribution and rewards.
struct RunConfig {
  RunMode mode = RunMode::kTrain;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string output_dir = "runs/default";
  Task task;
  ESConfig es;
  int checkpoint_every = 10;
  Curriculum curriculum;
  EvalSection eval;
  BenchSection bench;

  // throws ConfigError
  void Validate() const;
};

// Throws ConfigError with a "line N: " prefix for unknown keys, type
// errors and invalid values, and names missing required keys.
RunConfig ParseRunConfig(const std::string& yaml_text);
RunConfig LoadRunConfig(const std::string& path);

}  // namespace ttes

#endif  // TTES_CONFIG_H_
