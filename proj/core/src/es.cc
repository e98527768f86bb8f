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

#include "ttes/es.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "ttes/errors.h"
#include "ttes/rollout.h"

namespace ttes {
namespace {

void AddScaled(RewardBreakdown& acc, const RewardBreakdown& b, double s) {
  acc.hit += s * b.hit;
  acc.success += s * b.success;
  acc.style.ic += s * b.style.ic;
  acc.style.bbr += s * b.style.bbr;
  acc.style.ph += s * b.style.ph;
  acc.style.ja += s * b.style.ja;
  acc.style.v += s * b.style.v;
  acc.style.a += s * b.style.a;
  acc.style.j += s * b.style.j;
  acc.pose += s * b.pose;
  acc.dtr += s * b.dtr;
  acc.total += s * b.total;
}

// seed streams inside one iteration
constexpr std::uint64_t kDirectionStream = 0xd1;
constexpr std::uint64_t kRolloutStream = 0x52;
constexpr std::uint64_t kProbeStream = 0x9b;

}  // namespace

void ESConfig::Validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ConfigError("es.sigma must be > 0");
  }
  if (!(step_size > 0.0) || !std::isfinite(step_size)) {
    throw ConfigError("es.step_size must be > 0");
  }
  if (pairs < 1) throw ConfigError("es.pairs must be >= 1");
  if (top < 1 || top > pairs) {
    throw ConfigError("es.top must satisfy 0 < top <= pairs");
  }
  if (rollouts < 1) throw ConfigError("es.rollouts must be >= 1");
  if (state_subsample < 0) throw ConfigError("es.state_subsample must be >= 0");
  if (probe_episodes < 0) throw ConfigError("es.probe_episodes must be >= 0");
  if (max_retries < 0) throw ConfigError("es.max_retries must be >= 0");
}

Eigen::MatrixXd SamplePerturbations(int n, int dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(n, dim);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < dim; ++j) g(i, j) = normal(rng);
  }
  return g;
}

Eigen::VectorXd EsUpdate(const Eigen::VectorXd& theta,
                         const PerturbationBatch& batch, const ESConfig& cfg,
                         UpdateInfo* info) {
  const int n = batch.pairs();
  if (static_cast<int>(batch.f_plus.size()) != n ||
      static_cast<int>(batch.f_minus.size()) != n ||
      batch.directions.cols() != theta.size()) {
    throw ShapeError("perturbation batch does not match theta");
  }
  const int b = std::min(cfg.top, n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int l, int r) {
    return std::max(batch.f_plus[l], batch.f_minus[l]) >
           std::max(batch.f_plus[r], batch.f_minus[r]);
  });
  order.resize(b);

  double mean = 0.0;
  for (int i : order) mean += batch.f_plus[i] + batch.f_minus[i];
  mean /= 2.0 * b;
  double var = 0.0;
  for (int i : order) {
    var += (batch.f_plus[i] - mean) * (batch.f_plus[i] - mean);
    var += (batch.f_minus[i] - mean) * (batch.f_minus[i] - mean);
  }
  const double sigma_r = std::sqrt(var / (2.0 * b));
  if (info) {
    info->sigma_r = sigma_r;
    info->kept = order;
  }

  Eigen::VectorXd grad = Eigen::VectorXd::Zero(theta.size());
  for (int i : order) {
    grad += (batch.f_plus[i] - batch.f_minus[i]) *
            batch.directions.row(i).transpose();
  }
  if (cfg.normalize_rewards) {
    if (sigma_r < kSigmaRFloor) return theta;
    grad /= b * sigma_r;
  } else {
    grad /= 2.0 * b * cfg.sigma;
  }
  return theta + cfg.step_size * grad;
}

InitPose Task::ResolvedInitPose() const {
  return init_pose ? *init_pose : DefaultInitPose(distribution);
}

Fitness EvaluateCandidate(std::span<const double> theta,
                          const RunningStats& stats, const Task& task, int m,
                          std::uint64_t seed, int state_subsample,
                          RunningStats* samples) {
  if (static_cast<int>(theta.size()) != task.arch.ParameterCount()) {
    throw ShapeError("theta has " + std::to_string(theta.size()) +
                     " entries, architecture expects " +
                     std::to_string(task.arch.ParameterCount()));
  }
  Fitness fit;
  fit.rollouts.reserve(m);
  RolloutOptions options;
  options.filter_cutoff_hz = task.filter_cutoff_hz;
  options.state_subsample = samples ? state_subsample : 0;
  options.state_samples = samples;
  const InitPose pose = task.ResolvedInitPose();
  for (int r = 0; r < m; ++r) {
    Rng rng(DeriveSeed(seed, r));
    EnvState state = Reset(task.env, task.distribution, pose, rng);
    NetworkController controller(task.arch, theta, stats);
    EpisodeResult ep = RunEpisode(task.env, std::move(state), controller,
                                  options);
    RewardBreakdown b = TotalReward(ep.record, task.rewards);
    fit.rollouts.push_back(b.total);
    AddScaled(fit.breakdown, b, 1.0 / m);
    fit.hits += ep.record.hit;
    fit.successes += ep.record.success;
  }
  fit.value = std::accumulate(fit.rollouts.begin(), fit.rollouts.end(), 0.0) /
              m;
  return fit;
}

EpisodeObjective::EpisodeObjective(Task task, int state_subsample)
    : task_(std::move(task)), state_subsample_(state_subsample) {}

int EpisodeObjective::dimension() const { return task_.arch.ParameterCount(); }

Fitness EpisodeObjective::Evaluate(std::span<const double> theta,
                                   const RunningStats& stats,
                                   std::uint64_t seed, int rollouts,
                                   RunningStats* samples) const {
  return EvaluateCandidate(theta, stats, task_, rollouts, seed,
                           state_subsample_, samples);
}

std::optional<ProbeResult> EpisodeObjective::Probe(
    std::span<const double> theta, const RunningStats& stats,
    std::uint64_t seed, int episodes, WorkerPool& pool) const {
  std::vector<Fitness> results(episodes);
  pool.ParallelFor(episodes, [&](int k) {
    results[k] = EvaluateCandidate(theta, stats, task_, 1, DeriveSeed(seed, k));
  });
  ProbeResult probe;
  probe.episodes = episodes;
  for (const Fitness& f : results) {
    probe.hits += f.hits;
    probe.successes += f.successes;
  }
  return probe;
}

void EpisodeObjective::ApplyStage(const CurriculumStage& stage) {
  task_.distribution = stage.distribution;
  task_.rewards = stage.rewards;
}

TrainStatus Train(const ESConfig& cfg, Objective& objective,
                  const Curriculum* curriculum, WorkerPool& pool,
                  TrainState& state, std::uint64_t until,
                  const TrainHooks& hooks) {
  cfg.Validate();
  const int dim = objective.dimension();
  if (state.theta.size() != dim) {
    throw ShapeError("theta has " + std::to_string(state.theta.size()) +
                     " entries, objective expects " + std::to_string(dim));
  }
  if (curriculum) curriculum->Validate();

  const int n = cfg.pairs;
  while (state.iteration < until) {
    if (hooks.stop_requested && hooks.stop_requested()) {
      return TrainStatus::kStopped;
    }
    const std::uint64_t it = state.iteration;
    const int stage = state.curriculum.stage;
    if (curriculum) objective.ApplyStage(curriculum->stages.at(stage));

    const RunningStats snapshot = state.stats.Snapshot();
    Rng dir_rng(DeriveSeed(cfg.seed, it, kDirectionStream));
    PerturbationBatch batch;
    batch.directions = SamplePerturbations(n, dim, dir_rng);
    batch.f_plus.assign(n, 0.0);
    batch.f_minus.assign(n, 0.0);
    std::vector<RunningStats> deltas;

    for (int attempt = 0;; ++attempt) {
      deltas.assign(2 * n, RunningStats());
      try {
        pool.ParallelFor(2 * n, [&](int k) {
          const int i = k / 2;
          const double sign = (k % 2 == 0) ? 1.0 : -1.0;
          Eigen::VectorXd candidate =
              state.theta + sign * cfg.sigma * batch.directions.row(i).transpose();
          Fitness f = objective.Evaluate(
              std::span<const double>(candidate.data(), candidate.size()),
              snapshot, DeriveSeed(cfg.seed, it, kRolloutStream, i),
              cfg.rollouts, &deltas[k]);
          (k % 2 == 0 ? batch.f_plus : batch.f_minus)[i] = f.value;
        });
        break;
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception&) {
        if (attempt >= cfg.max_retries) throw;
      }
    }

    UpdateInfo info;
    state.theta = EsUpdate(state.theta, batch, cfg, &info);
    for (const RunningStats& d : deltas) state.stats.Merge(d);

    IterationMetrics metrics;
    metrics.iteration = it + 1;
    metrics.stage = stage;
    metrics.sigma_r = info.sigma_r;
    double sum = 0.0;
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      sum += batch.f_plus[i] + batch.f_minus[i];
      best = std::max({best, batch.f_plus[i], batch.f_minus[i]});
    }
    metrics.mean_fitness = sum / (2.0 * n);
    metrics.max_fitness = best;
    if (cfg.probe_episodes > 0) {
      const RunningStats probe_stats = state.stats.Snapshot();
      metrics.probe = objective.Probe(
          std::span<const double>(state.theta.data(), state.theta.size()),
          probe_stats, DeriveSeed(cfg.seed, it, kProbeStream),
          cfg.probe_episodes, pool);
    }

    state.iteration = it + 1;
    if (curriculum) {
      std::optional<double> success;
      if (metrics.probe) success = metrics.probe->success_rate();
      state.curriculum = AdvanceCurriculum(*curriculum, state.curriculum,
                                           state.iteration, success);
    }
    if (hooks.on_iteration) hooks.on_iteration(metrics, state);
  }
  return TrainStatus::kCompleted;
}

}  // namespace ttes
