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

#ifndef TTES_ES_H_
#define TTES_ES_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "ttes/curriculum.h"
#include "ttes/env.h"
#include "ttes/policy.h"
#include "ttes/rewards.h"
#include "ttes/running_stats.h"
#include "ttes/worker_pool.h"

namespace ttes {

struct ESConfig {
  double sigma = 0.02;
  double step_size = 0.01;
  int pairs = 64;     // n
  int top = 32;       // b, pairs kept after filtering
  int rollouts = 2;   // m, episodes averaged per candidate
  std::uint64_t iterations = 1000;
  std::uint64_t seed = 1;
  // divide by the std of the kept fitnesses; when off the estimator is the
  // plain antithetic Monte Carlo gradient 1 / (2 b sigma) sum (F+ - F-) g
  bool normalize_rewards = true;
  int state_subsample = 10;
  int probe_episodes = 32;  // per iteration, unperturbed policy; 0 disables
  int max_retries = 2;      // per iteration on worker failure

  // throws ConfigError
  void Validate() const;
};

inline constexpr double kSigmaRFloor = 1e-8;

// directions are the rows of an (n x dim) matrix
struct PerturbationBatch {
  Eigen::MatrixXd directions;
  std::vector<double> f_plus;
  std::vector<double> f_minus;

  int pairs() const { return static_cast<int>(directions.rows()); }
};

Eigen::MatrixXd SamplePerturbations(int n, int dim, Rng& rng);

struct UpdateInfo {
  double sigma_r = 0.0;
  std::vector<int> kept;  // pair indices, best first
};

// Keeps the top-b pairs by max(F+, F-) (ties broken by index) and returns
// theta + eta * g_hat.
Eigen::VectorXd EsUpdate(const Eigen::VectorXd& theta,
                         const PerturbationBatch& batch, const ESConfig& cfg,
                         UpdateInfo* info = nullptr);

struct Fitness {
  double value = 0.0;            // mean of `rollouts`
  std::vector<double> rollouts;  // per-episode totals
  RewardBreakdown breakdown;     // per-term means
  int hits = 0;
  int successes = 0;
};

struct ProbeResult {
  int episodes = 0;
  int hits = 0;
  int successes = 0;
  double hit_rate() const { return episodes ? double(hits) / episodes : 0.0; }
  double success_rate() const {
    return episodes ? double(successes) / episodes : 0.0;
  }
};

// Blackbox fitness. Evaluate must be a pure function of its arguments so
// results do not depend on the worker that runs it.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual int dimension() const = 0;
  // `samples`, when given, receives state-normalization samples
  virtual Fitness Evaluate(std::span<const double> theta,
                           const RunningStats& stats, std::uint64_t seed,
                           int rollouts, RunningStats* samples) const = 0;
  virtual std::optional<ProbeResult> Probe(std::span<const double> theta,
                                           const RunningStats& stats,
                                           std::uint64_t seed, int episodes,
                                           WorkerPool& pool) const {
    (void)theta, (void)stats, (void)seed, (void)episodes, (void)pool;
    return std::nullopt;
  }
  virtual void ApplyStage(const CurriculumStage& stage) { (void)stage; }
};

// everything needed to roll out a parameter vector
struct Task {
  EnvConfig env;
  ArchSpec arch;
  RewardConfig rewards;
  BallDistribution distribution;
  std::optional<InitPose> init_pose;  // DefaultInitPose when empty
  std::optional<double> filter_cutoff_hz;

  InitPose ResolvedInitPose() const;
};

// Mean total reward over m fresh episodes; episode r uses the throw and
// noise stream seeded by DeriveSeed(seed, r).
Fitness EvaluateCandidate(std::span<const double> theta,
                          const RunningStats& stats, const Task& task, int m,
                          std::uint64_t seed, int state_subsample = 0,
                          RunningStats* samples = nullptr);

class EpisodeObjective : public Objective {
 public:
  EpisodeObjective(Task task, int state_subsample);

  int dimension() const override;
  Fitness Evaluate(std::span<const double> theta, const RunningStats& stats,
                   std::uint64_t seed, int rollouts,
                   RunningStats* samples) const override;
  std::optional<ProbeResult> Probe(std::span<const double> theta,
                                   const RunningStats& stats,
                                   std::uint64_t seed, int episodes,
                                   WorkerPool& pool) const override;
  void ApplyStage(const CurriculumStage& stage) override;

  const Task& task() const { return task_; }

 private:
  Task task_;
  int state_subsample_;
};

struct TrainState {
  Eigen::VectorXd theta;
  RunningStats stats;
  CurriculumState curriculum;
  std::uint64_t iteration = 0;  // completed iterations
};

struct IterationMetrics {
  std::uint64_t iteration = 0;  // 1-based index of the finished iteration
  double mean_fitness = 0.0;
  double max_fitness = 0.0;
  double sigma_r = 0.0;
  std::optional<ProbeResult> probe;
  int stage = 0;  // stage the iteration ran in
};

struct TrainHooks {
  std::function<void(const IterationMetrics&, const TrainState&)> on_iteration;
  // polled between iterations
  std::function<bool()> stop_requested;
};

enum class TrainStatus { kCompleted, kStopped };

// Runs iterations until state.iteration == until. Each iteration samples
// directions, evaluates the 2n candidates against a frozen stats snapshot
// (both signs of pair i share rollout seeds), applies EsUpdate, merges the
// per-candidate state samples in index order and advances the curriculum.
// A failing iteration is retried up to cfg.max_retries times; after that
// the exception propagates and `state` holds the last completed iteration.
TrainStatus Train(const ESConfig& cfg, Objective& objective,
                  const Curriculum* curriculum, WorkerPool& pool,
                  TrainState& state, std::uint64_t until,
                  const TrainHooks& hooks = {});

}  // namespace ttes

#endif  // TTES_ES_H_
