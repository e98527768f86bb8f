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

#include "ttes/runner.h"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <gtest/gtest.h>

#include "test_util.h"
#include "ttes/errors.h"

namespace ttes {
namespace {

namespace fs = std::filesystem;

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// a tiny training setup that finishes in well under a second per iteration
RunConfig SmokeConfig(const fs::path& out) {
  RunConfig cfg = ParseRunConfig(
      "mode: train\n"
      "seed: 5\n"
      "es: {iterations: 2, pairs: 4, top: 2, rollouts: 1, probe_episodes: 4,"
      " checkpoint_every: 1}\n");
  cfg.output_dir = out.string();
  return cfg;
}

TEST(RunnerTest, SmokeTrainWritesMetricsAndCheckpoint) {
  testing::TempDir dir("train");
  RunConfig cfg = SmokeConfig(dir.path());
  std::ostringstream log;
  TrainOutcome out = RunTrain(cfg, {.log = &log});
  EXPECT_EQ(out.status, TrainStatus::kCompleted);
  EXPECT_EQ(out.iterations, 2u);
  std::vector<MetricsRow> rows = ReadMetrics(out.metrics_path);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].iteration, 1u);
  EXPECT_EQ(rows[1].iteration, 2u);
  EXPECT_TRUE(rows[0].probe_success.has_value());
  int checkpoints = 0;
  for (const auto& e : fs::directory_iterator(dir.path())) {
    checkpoints += e.path().extension() == ".bin";
  }
  EXPECT_EQ(checkpoints, 1);
  Checkpoint c = ReadCheckpoint(out.checkpoint_path);
  EXPECT_EQ(c.iteration, 2u);
  EXPECT_EQ(c.seed, 5u);
  EXPECT_EQ(c.theta.size(), 976u);
  EXPECT_NE(log.str().find("iter 2"), std::string::npos);
}

TEST(RunnerTest, ResumeContinuesNumbering) {
  testing::TempDir dir("resume");
  RunConfig cfg = SmokeConfig(dir.path());
  std::ostringstream log;
  RunTrain(cfg, {.log = &log});
  const std::string ckpt = (dir.path() / kCheckpointFile).string();

  cfg.es.iterations = 4;
  TrainOutcome out = RunTrain(cfg, {.resume = ckpt, .log = &log});
  EXPECT_EQ(out.iterations, 4u);
  std::vector<MetricsRow> rows = ReadMetrics(out.metrics_path);
  ASSERT_EQ(rows.size(), 4u);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(rows[i].iteration, i + 1u);

  // resuming is equivalent to training straight through
  testing::TempDir straight("straight");
  RunConfig full = SmokeConfig(straight.path());
  full.es.iterations = 4;
  RunTrain(full, {.log = &log});
  EXPECT_EQ(Slurp(straight.path() / kCheckpointFile), Slurp(ckpt));
  EXPECT_EQ(Slurp(straight.path() / kMetricsFile),
            Slurp(dir.path() / kMetricsFile));
}

TEST(RunnerTest, StopFlagInterruptsAndFlushes) {
  testing::TempDir dir("stop");
  RunConfig cfg = SmokeConfig(dir.path());
  std::atomic<bool> stop{true};
  std::ostringstream log;
  TrainOutcome out = RunTrain(cfg, {.stop = &stop, .log = &log});
  EXPECT_EQ(out.status, TrainStatus::kStopped);
  EXPECT_TRUE(fs::exists(out.checkpoint_path));
}

TEST(RunnerTest, ResumeRejectsOtherArchitecture) {
  testing::TempDir dir("arch");
  const fs::path ckpt = dir.path() / "mlp.ckpt";
  WriteCheckpoint(ckpt.string(),
                  RandomPolicyCheckpoint(ArchSpec::Mlp(), 1, 0.5));
  RunConfig cfg = SmokeConfig(dir.path());
  std::ostringstream log;
  EXPECT_THROW(RunTrain(cfg, {.resume = ckpt.string(), .log = &log}),
               ShapeError);
  EXPECT_THROW(RunEval(cfg, {.checkpoint = ckpt.string(), .log = &log}),
               ShapeError);
}

TEST(RunnerTest, QuickEvalIsDeterministic) {
  testing::TempDir dir("eval");
  RunConfig cfg = ParseRunConfig("mode: eval\nseed: 2\n");
  cfg.output_dir = dir.path().string();
  const fs::path ckpt = dir.path() / "random.ckpt";
  WriteCheckpoint(ckpt.string(),
                  RandomPolicyCheckpoint(cfg.task.arch, 3, kRandomPolicyScale));
  std::ostringstream log;
  EvalReport a = RunEval(cfg, {ckpt.string(), 10, &log});
  EXPECT_EQ(a.episodes, 10);
  const std::string episodes = Slurp(dir.path() / "episodes.csv");
  EXPECT_EQ(std::count(episodes.begin(), episodes.end(), '\n'), 11);
  EXPECT_EQ(ReportJson(ParseReportJson(Slurp(dir.path() / "report.json"))),
            ReportJson(a));
  cfg.workers = 3;
  EvalReport b = RunEval(cfg, {ckpt.string(), 10, &log});
  EXPECT_EQ(ReportJson(a), ReportJson(b));
}

TEST(RunnerTest, BenchReportRoundTrips) {
  testing::TempDir dir("bench");
  RunConfig cfg = ParseRunConfig("mode: bench\nseed: 1\n");
  cfg.output_dir = dir.path().string();
  cfg.bench.episodes = 8;
  cfg.bench.max_workers = 2;
  std::ostringstream log;
  BenchReport r = RunBench(cfg, &log);
  ASSERT_EQ(r.results.size(), 2u);
  EXPECT_EQ(r.results[0].workers, 1);
  EXPECT_EQ(r.results[1].workers, 2);
  for (const BenchResult& b : r.results) {
    EXPECT_EQ(b.episodes, 8);
    EXPECT_GT(b.episodes_per_second, 0.0);
  }
  BenchReport back = ParseBenchJson(Slurp(dir.path() / "bench.json"));
  EXPECT_EQ(BenchJson(back), BenchJson(r));
  EXPECT_THROW(ParseBenchJson("{\"schema\": \"other\"}"), Error);
}

TEST(RunnerTest, BenchScalesWithWorkers) {
  if (std::thread::hardware_concurrency() < 2) {
    GTEST_SKIP() << "needs at least two hardware threads";
  }
  testing::TempDir dir("scale");
  RunConfig cfg = ParseRunConfig("mode: bench\nseed: 1\n");
  cfg.output_dir = dir.path().string();
  cfg.bench.episodes = 64;
  cfg.bench.max_workers = 2;
  std::ostringstream log;
  BenchReport r = RunBench(cfg, &log);
  ASSERT_EQ(r.results.size(), 2u);
  EXPECT_GT(r.results[1].episodes_per_second,
            1.3 * r.results[0].episodes_per_second);
}

TEST(RunnerTest, RandomPolicyFixtureBaseline) {
  const std::string fixture =
      testing::SourcePath("tests/fixtures/random_policy.ckpt");
  Checkpoint c = ReadCheckpoint(fixture);
  // the shipped file is exactly what `ttes init --seed 0` writes
  EXPECT_EQ(c, RandomPolicyCheckpoint(ArchSpec::GatedCnn(), 0,
                                      kRandomPolicyScale));

  testing::TempDir dir("fixture");
  RunConfig cfg = ParseRunConfig("mode: eval\nseed: 1\n");
  cfg.output_dir = dir.path().string();
  std::ostringstream log;
  EvalReport r = RunEval(cfg, {fixture, 2500, &log});
  EXPECT_EQ(r.S(), 0.0);
  EXPECT_LE(r.H(), 10.0);
  // the canonical smoothness limits sit at three times this baseline
  const RewardConfig canonical = RewardConfig::Canonical();
  EXPECT_NEAR(canonical.velocity.limit / r.smoothness.velocity, 3.0, 0.03);
  EXPECT_NEAR(canonical.acceleration.limit / r.smoothness.acceleration, 3.0,
              0.03);
  EXPECT_NEAR(canonical.jerk.limit / r.smoothness.jerk, 3.0, 0.03);
}

TEST(RunnerTest, CheckpointIdenticalAcrossWorkerCounts) {
  auto run = [](int workers, const fs::path& out) {
    RunConfig cfg = ParseRunConfig(
        "mode: train\n"
        "seed: 11\n"
        "es: {iterations: 10, pairs: 3, top: 2, rollouts: 1,"
        " probe_episodes: 2, checkpoint_every: 5}\n");
    cfg.output_dir = out.string();
    cfg.workers = workers;
    std::ostringstream log;
    RunTrain(cfg, {.log = &log});
    return Slurp(out / kCheckpointFile);
  };
  testing::TempDir a("w1");
  testing::TempDir b("w4");
  const std::string one = run(1, a.path());
  const std::string four = run(4, b.path());
  ASSERT_FALSE(one.empty());
  EXPECT_EQ(one, four);
  EXPECT_EQ(ParseCheckpoint(one).iteration, 10u);
}

TEST(RunnerTest, MetricsReaderRejectsForeignFiles) {
  testing::TempDir dir("metrics");
  const fs::path p = dir.path() / "m.csv";
  std::ofstream(p) << "a,b\n1,2\n";
  EXPECT_THROW(ReadMetrics(p.string()), Error);
  EXPECT_THROW(ReadMetrics((dir.path() / "none.csv").string()), Error);
}

}  // namespace
}  // namespace ttes
