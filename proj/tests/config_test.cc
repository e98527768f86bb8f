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

#include "ttes/config.h"

#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "test_util.h"
#include "ttes/errors.h"

namespace ttes {
namespace {

// returns the error raised by parsing `yaml`, failing when none is
ConfigError ParseError(const std::string& yaml) {
  try {
    ParseRunConfig(yaml);
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "no ConfigError for:\n" << yaml;
  return ConfigError("none");
}

TEST(ConfigTest, MinimalConfigUsesDefaults) {
  RunConfig cfg = ParseRunConfig("mode: train\nseed: 3\n");
  EXPECT_EQ(cfg.mode, RunMode::kTrain);
  EXPECT_EQ(cfg.seed, 3u);
  EXPECT_EQ(cfg.es.seed, 3u);
  EXPECT_EQ(cfg.workers, 1);
  EXPECT_EQ(cfg.task.arch.ParameterCount(), 976);
  EXPECT_EQ(cfg.task.distribution.kind, DistributionKind::kForehand);
  EXPECT_EQ(cfg.curriculum.stages.size(), 1u);
  EXPECT_EQ(cfg.es.sigma, ESConfig{}.sigma);
}

TEST(ConfigTest, UnknownKeyReportsItsLine) {
  ConfigError e = ParseError(
      "mode: train\n"
      "seed: 1\n"
      "es:\n"
      "  sigma: 0.02\n"
      "  sigmaa: 0.03\n");
  EXPECT_EQ(e.line(), 5);
  EXPECT_NE(std::string(e.what()).find("sigmaa"), std::string::npos);
  EXPECT_EQ(std::string(e.what()).rfind("line 5:", 0), 0u);

  e = ParseError("mode: train\nseed: 1\nworkerz: 2\n");
  EXPECT_EQ(e.line(), 3);
  EXPECT_NE(std::string(e.what()).find("workerz"), std::string::npos);
}

TEST(ConfigTest, MissingRequiredKeyIsNamed) {
  ConfigError e = ParseError("seed: 1\n");
  EXPECT_NE(std::string(e.what()).find("'mode'"), std::string::npos);
  e = ParseError("mode: eval\n");
  EXPECT_NE(std::string(e.what()).find("'seed'"), std::string::npos);
  e = ParseError(
      "mode: train\nseed: 1\n"
      "curriculum:\n"
      "  stages:\n"
      "    - name: a\n"
      "      rewards: {preset: sparse}\n");
  EXPECT_NE(std::string(e.what()).find("distribution"), std::string::npos);
  EXPECT_GT(e.line(), 0);
}

TEST(ConfigTest, BadValuesReportTheirLine) {
  ConfigError e = ParseError("mode: train\nseed: 1\nes:\n  pairs: many\n");
  EXPECT_EQ(e.line(), 4);
  e = ParseError("mode: fly\nseed: 1\n");
  EXPECT_EQ(e.line(), 1);
  EXPECT_NE(std::string(e.what()).find("train"), std::string::npos);
  e = ParseError("mode: train\nseed: 1\nworkers: 0\n");
  EXPECT_EQ(e.line(), 3);
  e = ParseError(
      "mode: train\nseed: 1\nenv:\n  distribution:\n"
      "    kind: ball_range\n    range: [0.7, 0.5]\n");
  EXPECT_EQ(e.line(), 6);
  e = ParseError("mode: train\nseed: 1\nes: [1, 2\n");
  EXPECT_GT(e.line(), 0);
  EXPECT_THROW(ParseRunConfig(""), ConfigError);
  EXPECT_THROW(ParseRunConfig("mode: train\nseed: 1\neval:\n  episodes: 0\n"),
               ConfigError);
}

TEST(ConfigTest, ReadsNestedSections) {
  RunConfig cfg = ParseRunConfig(
      "mode: eval\n"
      "seed: 9\n"
      "workers: 3\n"
      "output_dir: out/x\n"
      "env:\n"
      "  init_pose: center\n"
      "  distribution: {kind: ball_range, range: [0.2, 0.4]}\n"
      "  noise: {ball_noise: 0.0, ball_delay_max: 2}\n"
      "arch:\n"
      "  kind: mlp\n"
      "  filter_cutoff_hz: 5\n"
      "es: {sigma: 0.05, pairs: 16, top: 8, checkpoint_every: 4}\n"
      "rewards: {preset: canonical, pose: cps}\n"
      "eval: {episodes: 12, seed: 4, reduction: mean}\n"
      "bench: {episodes: 7, max_workers: 2}\n");
  EXPECT_EQ(cfg.mode, RunMode::kEval);
  EXPECT_EQ(cfg.workers, 3);
  EXPECT_EQ(cfg.output_dir, "out/x");
  EXPECT_EQ(cfg.task.ResolvedInitPose(), InitPose::kCenter);
  EXPECT_EQ(cfg.task.distribution.Describe(), "ball_range(0.2,0.4)");
  EXPECT_EQ(cfg.task.env.noise.ball_noise, 0.0);
  EXPECT_EQ(cfg.task.env.noise.ball_delay_max, 2);
  EXPECT_EQ(cfg.task.arch.ParameterCount(), 5048);
  ASSERT_TRUE(cfg.task.filter_cutoff_hz);
  EXPECT_EQ(*cfg.task.filter_cutoff_hz, 5.0);
  EXPECT_EQ(cfg.es.sigma, 0.05);
  EXPECT_EQ(cfg.es.pairs, 16);
  EXPECT_EQ(cfg.es.top, 8);
  EXPECT_EQ(cfg.checkpoint_every, 4);
  EXPECT_EQ(cfg.task.rewards.pose, PoseMode::kCps);
  EXPECT_TRUE(cfg.task.rewards.jerk.enabled);
  EXPECT_EQ(cfg.eval.episodes, 12);
  EXPECT_EQ(cfg.eval.seed, 4u);
  EXPECT_EQ(cfg.eval.reduction, SmoothnessReduction::kMeanOverTime);
  EXPECT_EQ(cfg.bench.episodes, 7);
  EXPECT_EQ(cfg.bench.max_workers, 2);
}

TEST(ConfigTest, ShippedConfigsParse) {
  int seen = 0;
  for (const auto& entry :
       std::filesystem::directory_iterator(testing::SourcePath("configs"))) {
    if (entry.path().extension() != ".yaml") continue;
    SCOPED_TRACE(entry.path().string());
    RunConfig cfg = LoadRunConfig(entry.path().string());
    EXPECT_NO_THROW(cfg.Validate());
    EXPECT_EQ(cfg.task.arch.ParameterCount(), 976);
    ++seen;
  }
  EXPECT_GE(seen, 3);
}

TEST(ConfigTest, ShippedSparseConfigMatchesDefaults) {
  RunConfig cfg =
      LoadRunConfig(testing::SourcePath("configs/forehand_sparse.yaml"));
  EXPECT_EQ(cfg.task.distribution.kind, DistributionKind::kForehand);
  EXPECT_EQ(cfg.task.rewards.pose, PoseMode::kNone);
  EXPECT_FALSE(cfg.task.rewards.jerk.enabled);
  EXPECT_EQ(cfg.task.env.noise.ball_delay_max, 4);
}

TEST(ConfigTest, MissingFileIsAConfigError) {
  EXPECT_THROW(LoadRunConfig("/nonexistent/ttes.yaml"), ConfigError);
}

}  // namespace
}  // namespace ttes
