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

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "ttes/action_filter.h"
#include "ttes/env.h"
#include "ttes/es.h"
#include "ttes/physics.h"
#include "ttes/policy.h"
#include "ttes/rewards.h"
#include "ttes/robot.h"
#include "ttes/rollout.h"
#include "ttes/runner.h"

namespace ttes {
namespace {

Observation RandomObservation(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Observation obs;
  for (int r = 0; r < kHistoryLength; ++r) {
    for (int c = 0; c < kObsFeatures; ++c) obs(r, c) = n(rng);
  }
  return obs;
}

void BM_PolicyForward(benchmark::State& state) {
  const ArchSpec arch =
      state.range(0) == 0 ? ArchSpec::GatedCnn() : ArchSpec::Mlp();
  const Checkpoint c = RandomPolicyCheckpoint(arch, 1, kRandomPolicyScale);
  Rng rng(2);
  const Observation obs = RandomObservation(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(PolicyForward(obs, c.theta, arch, c.stats));
  }
  state.SetLabel(state.range(0) == 0 ? "gated_cnn" : "mlp");
}
BENCHMARK(BM_PolicyForward)->Arg(0)->Arg(1);

void BM_StepBall(benchmark::State& state) {
  const PhysicsParams params;
  BallState ball{Vec3(0.1, 1.5, 0.3), Vec3(0.2, -5.0, 1.0), true};
  for (auto _ : state) {
    BallState b = ball;
    for (int i = 0; i < 10; ++i) b = StepBall(b, 1e-3, params, nullptr);
    benchmark::DoNotOptimize(b);
  }
}
BENCHMARK(BM_StepBall);

void BM_ForwardKinematics(benchmark::State& state) {
  const RobotModel model;
  JointVector q = JointVector::Constant(0.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ForwardKinematics(model, q));
    q[3] += 1e-9;
  }
}
BENCHMARK(BM_ForwardKinematics);

void BM_EnvStep(benchmark::State& state) {
  const EnvConfig cfg;
  Rng rng(3);
  EnvState s = Reset(cfg, BallDistribution::Forehand(), InitPose::kForehand,
                     rng);
  const EnvState start = s;
  const JointVector action = JointVector::Constant(0.05);
  for (auto _ : state) {
    if (s.terminated) s = start;
    benchmark::DoNotOptimize(Step(cfg, s, action));
  }
}
BENCHMARK(BM_EnvStep);

void BM_Episode(benchmark::State& state) {
  Task task;
  const Checkpoint c = RandomPolicyCheckpoint(task.arch, 0, kRandomPolicyScale);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        EvaluateCandidate(c.theta, c.stats, task, 1, ++seed).value);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Episode)->Unit(benchmark::kMillisecond);

void BM_ActionFilter(benchmark::State& state) {
  ActionFilter filter(5.0, 100.0);
  JointVector x = JointVector::Constant(0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(filter.Apply(x));
    x[0] = -x[0];
  }
}
BENCHMARK(BM_ActionFilter);

void BM_EsUpdate(benchmark::State& state) {
  const int dim = ArchSpec::GatedCnn().ParameterCount();
  ESConfig cfg;
  Rng rng(4);
  std::normal_distribution<double> n(0.0, 1.0);
  PerturbationBatch batch;
  batch.directions = SamplePerturbations(cfg.pairs, dim, rng);
  for (int i = 0; i < cfg.pairs; ++i) {
    batch.f_plus.push_back(n(rng));
    batch.f_minus.push_back(n(rng));
  }
  const Eigen::VectorXd theta = Eigen::VectorXd::Zero(dim);
  for (auto _ : state) {
    benchmark::DoNotOptimize(EsUpdate(theta, batch, cfg));
  }
}
BENCHMARK(BM_EsUpdate);

void BM_TotalReward(benchmark::State& state) {
  RewardConfig cfg = RewardConfig::Canonical();
  cfg.pose = PoseMode::kCpt;
  cfg.success_shaping = SuccessShaping::kDtr;
  EpisodeRecord rec;
  Rng rng(5);
  std::normal_distribution<double> n(0.0, 0.1);
  JointVector q = cfg.forehand_reference;
  rec.positions.push_back(q);
  rec.paddle_centers.push_back(Vec3(0.0, -1.8, 0.3));
  for (int t = 0; t < 150; ++t) {
    JointVector v;
    for (int i = 0; i < kNumJoints; ++i) v[i] = n(rng);
    q += v * rec.dt;
    rec.positions.push_back(q);
    rec.velocities.push_back(v);
    rec.paddle_centers.push_back(Vec3(0.0, -1.8, 0.3));
  }
  rec.hit = true;
  rec.contact_step = 80;
  rec.landing_x = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(TotalReward(rec, cfg).total);
  }
}
BENCHMARK(BM_TotalReward);

}  // namespace
}  // namespace ttes

BENCHMARK_MAIN();
