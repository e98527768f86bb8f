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

#ifndef TTES_RUNNER_H_
#define TTES_RUNNER_H_

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ttes/checkpoint.h"
#include "ttes/config.h"
#include "ttes/eval.h"

namespace ttes {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 2,
  kExitRuntimeError = 3,
  kExitInterrupted = 4,  // stopped early, checkpoint flushed
};

// Output layout inside RunConfig::output_dir:
//   checkpoint.bin  latest checkpoint (overwritten)
//   metrics.csv     "# ttes metrics v1", then the header
//                   iteration,mean_fitness,max_fitness,sigma_r,
//                   probe_success,probe_hit,stage
//                   and one row per iteration (probe columns empty when
//                   probes are disabled)
//   report.json, report.csv, episodes.csv   written by eval
//   bench.json                              written by bench
inline constexpr const char* kCheckpointFile = "checkpoint.bin";
inline constexpr const char* kMetricsFile = "metrics.csv";
inline constexpr const char* kMetricsVersionLine = "# ttes metrics v1";
inline constexpr const char* kMetricsHeader =
    "iteration,mean_fitness,max_fitness,sigma_r,probe_success,probe_hit,stage";

struct TrainOptions {
  std::string resume;  // checkpoint to continue from; empty starts fresh
  const std::atomic<bool>* stop = nullptr;
  std::ostream* log = nullptr;
};

struct TrainOutcome {
  TrainStatus status = TrainStatus::kCompleted;
  std::uint64_t iterations = 0;  // completed, including resumed ones
  std::string checkpoint_path;
  std::string metrics_path;
};

// On an exception after at least one iteration the last completed state is
// checkpointed before the exception propagates.
TrainOutcome RunTrain(const RunConfig& cfg, const TrainOptions& options = {});

struct EvalRunOptions {
  std::string checkpoint;  // overrides cfg.eval.checkpoint
  std::optional<int> episodes;
  std::ostream* log = nullptr;
};

// Evaluates on the distribution of the checkpoint's curriculum stage.
// Throws ShapeError when the checkpoint architecture differs from the
// configured one.
EvalReport RunEval(const RunConfig& cfg, const EvalRunOptions& options = {});

struct BenchResult {
  int workers = 0;
  int episodes = 0;
  double seconds = 0.0;
  double episodes_per_second = 0.0;
};

struct BenchReport {
  int hardware_threads = 0;
  std::vector<BenchResult> results;
};

// worker counts 1, 2, 4, ... up to bench.max_workers
BenchReport RunBench(const RunConfig& cfg, std::ostream* log = nullptr);
std::string BenchJson(const BenchReport& report);
BenchReport ParseBenchJson(const std::string& text);

// parameters drawn i.i.d. N(0, scale^2); fresh running stats
Checkpoint RandomPolicyCheckpoint(const ArchSpec& arch, std::uint64_t seed,
                                  double scale);
inline constexpr double kRandomPolicyScale = 0.5;

// reads the data rows of a metrics file
struct MetricsRow {
  std::uint64_t iteration = 0;
  double mean_fitness = 0.0;
  double max_fitness = 0.0;
  double sigma_r = 0.0;
  std::optional<double> probe_success;
  std::optional<double> probe_hit;
  int stage = 0;
};
std::vector<MetricsRow> ReadMetrics(const std::string& path);

}  // namespace ttes

#endif  // TTES_RUNNER_H_
