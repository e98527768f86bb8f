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

#ifndef TTES_EVAL_H_
#define TTES_EVAL_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ttes/es.h"
#include "ttes/rewards.h"
#include "ttes/rollout.h"
#include "ttes/worker_pool.h"

namespace ttes {

// per-joint statistic over time, averaged over joints
enum class SmoothnessReduction {
  kMaxOverTime,   // "avg max jerk": max_t |x|, then mean over joints
  kMeanOverTime,  // mean_t |x|, then mean over joints
};

struct SmoothnessMetrics {
  double jerk = 0.0;
  double acceleration = 0.0;
  double velocity = 0.0;
  double joint_range = 0.0;  // sum over joints of max - min position
};

// Throws ContractViolation for episodes shorter than 3 steps, where the
// jerk is undefined.
SmoothnessMetrics ComputeSmoothness(
    const EpisodeRecord& rec,
    SmoothnessReduction reduction = SmoothnessReduction::kMaxOverTime);

struct EpisodeRow {
  int index = 0;
  Side side = Side::kCenter;
  double landing_x = 0.0;
  bool hit = false;
  bool success = false;
  int steps = 0;
  double reward = 0.0;
  SmoothnessMetrics smoothness;
};

struct OutcomeCounts {
  int episodes = 0;
  int hits = 0;
  int successes = 0;
  // percentages, 0 for an empty group
  double hit_rate() const { return episodes ? 100.0 * hits / episodes : 0.0; }
  double success_rate() const {
    return episodes ? 100.0 * successes / episodes : 0.0;
  }
};

// Forehand counts include center throws (x1 = 0), per the tie rule; the
// center group is reported separately as a subset of the forehand group.
struct EvalReport {
  int episodes = 0;
  OutcomeCounts all;
  OutcomeCounts forehand;
  OutcomeCounts backhand;
  OutcomeCounts center;
  SmoothnessMetrics smoothness;  // mean over episodes
  std::vector<EpisodeRow> rows;

  double S() const { return all.success_rate(); }
  double H() const { return all.hit_rate(); }
};

// builds the report from rows; independent of row order
EvalReport Aggregate(std::vector<EpisodeRow> rows);

struct EvalOptions {
  int episodes = 2500;
  std::uint64_t seed = 1;
  SmoothnessReduction reduction = SmoothnessReduction::kMaxOverTime;
};

using ControllerFactory = std::function<std::unique_ptr<Controller>()>;

// Episode k uses the throw / noise stream seeded by DeriveSeed(seed, k).
// `task.arch` is unused; rewards are reported with `task.rewards`.
EvalReport EvaluateController(const ControllerFactory& factory,
                              const Task& task, const EvalOptions& options,
                              WorkerPool& pool);

EvalReport EvaluatePolicy(std::span<const double> theta,
                          const RunningStats& stats, const Task& task,
                          const EvalOptions& options, WorkerPool& pool);

// columns: S,H,J,A,V,JR,S-F,H-F,S-B,H-B,episodes
std::string ReportCsv(const EvalReport& report);
// one row per episode
std::string EpisodesCsv(const EvalReport& report);
std::string ReportJson(const EvalReport& report);
// inverse of ReportJson; throws Error on malformed input
EvalReport ParseReportJson(const std::string& text);
// fixed-width table for terminals
std::string FormatReport(const EvalReport& report);

// Commits to one of two controllers for the whole episode. The ball
// velocity is estimated from the two newest distinct ball rows of the
// observation (gravity-corrected to the newer row); the predicted landing
// x picks forehand when x >= 0 and backhand otherwise. Until a prediction
// exists, and when it fails, the forehand controller is used.
class HierarchicalController : public Controller {
 public:
  HierarchicalController(std::unique_ptr<Controller> forehand,
                         std::unique_ptr<Controller> backhand,
                         PhysicsParams physics, double dt);

  void Begin(const EnvConfig& cfg, const EnvState& state) override;
  JointVector Act(const Observation& obs, const EnvState& state) override;

  std::optional<Side> choice() const { return choice_; }

 private:
  std::unique_ptr<Controller> forehand_;
  std::unique_ptr<Controller> backhand_;
  PhysicsParams physics_;
  double dt_;
  std::optional<Side> choice_;
};

// landing x predicted from an observation history; empty without two
// distinct ball rows or without a descending crossing
std::optional<double> PredictLandingFromObservation(
    const Observation& obs, const PhysicsParams& physics, double dt);

}  // namespace ttes

#endif  // TTES_EVAL_H_
