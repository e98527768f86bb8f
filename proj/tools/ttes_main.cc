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

// ttes: train, evaluate and benchmark table-tennis ES policies.
//
//   ttes train --config configs/forehand_sparse.yaml [--resume [PATH]]
//   ttes eval  --config configs/forehand_sparse.yaml [--checkpoint PATH]
//   ttes bench --config configs/forehand_sparse.yaml
//   ttes init  --out tests/fixtures/random_policy.ckpt
//
// Exit codes: 0 ok, 2 config error, 3 runtime error, 4 interrupted (the
// checkpoint was flushed).

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ttes/checkpoint.h"
#include "ttes/config.h"
#include "ttes/errors.h"
#include "ttes/runner.h"

namespace {

std::atomic<bool> g_stop{false};

extern "C" void OnSigint(int) { g_stop.store(true); }

struct CommonFlags {
  std::string config;
  std::optional<int> workers;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool quick = false;
};

void AddCommon(CLI::App* app, CommonFlags& f) {
  app->add_option("--config", f.config, "run configuration (YAML)")
      ->required()
      ->check(CLI::ExistingFile);
  app->add_option("--workers", f.workers, "rollout worker threads")
      ->check(CLI::PositiveNumber);
  app->add_option("--seed", f.seed, "override the configured seed");
  app->add_option("--out", f.out,
                  "output directory (overrides TTES_OUT_DIR and the config)");
  app->add_flag("--quick", f.quick, "tiny run for smoke testing");
}

ttes::RunConfig LoadWithOverrides(const CommonFlags& f) {
  ttes::RunConfig cfg = ttes::LoadRunConfig(f.config);
  if (const char* env = std::getenv("TTES_OUT_DIR"); env && *env) {
    cfg.output_dir = env;
  }
  if (!f.out.empty()) cfg.output_dir = f.out;
  if (f.workers) cfg.workers = *f.workers;
  if (f.seed) {
    cfg.seed = *f.seed;
    cfg.es.seed = *f.seed;
    cfg.eval.seed = *f.seed;
  }
  return cfg;
}

int Guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ttes::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return ttes::kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ttes::kExitRuntimeError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ttes: evolution-strategies training for table-tennis policies"};
  app.require_subcommand(1);

  CommonFlags train_flags;
  std::optional<std::string> resume;
  CLI::App* train = app.add_subcommand("train", "run ES training");
  AddCommon(train, train_flags);
  train->add_option("--resume", resume,
                    "continue from a checkpoint (default: the output "
                    "directory's checkpoint.bin)")
      ->expected(0, 1);

  CommonFlags eval_flags;
  std::string eval_checkpoint;
  std::optional<int> episodes;
  CLI::App* eval = app.add_subcommand("eval", "evaluate a checkpoint");
  AddCommon(eval, eval_flags);
  eval->add_option("--checkpoint", eval_checkpoint, "checkpoint to evaluate");
  eval->add_option("--episodes", episodes, "number of evaluation episodes")
      ->check(CLI::PositiveNumber);

  CommonFlags bench_flags;
  std::optional<int> bench_episodes;
  CLI::App* bench = app.add_subcommand("bench", "measure rollout throughput");
  AddCommon(bench, bench_flags);
  bench->add_option("--episodes", bench_episodes, "episodes per worker count")
      ->check(CLI::PositiveNumber);

  std::string init_out;
  std::uint64_t init_seed = 0;
  std::string init_arch = "gated_cnn";
  CLI::App* init =
      app.add_subcommand("init", "write a random-policy checkpoint");
  init->add_option("--out", init_out, "checkpoint path")->required();
  init->add_option("--seed", init_seed, "parameter seed");
  init->add_option("--arch", init_arch, "gated_cnn or mlp")
      ->check(CLI::IsMember({"gated_cnn", "mlp"}));

  CLI11_PARSE(app, argc, argv);
  std::signal(SIGINT, OnSigint);
  std::signal(SIGTERM, OnSigint);

  if (*train) {
    return Guarded([&] {
      ttes::RunConfig cfg = LoadWithOverrides(train_flags);
      if (train_flags.quick) {
        cfg.es.iterations = 2;
        cfg.es.pairs = 4;
        cfg.es.top = 2;
        cfg.es.rollouts = 1;
        cfg.es.probe_episodes = 4;
      }
      ttes::TrainOptions opts;
      opts.stop = &g_stop;
      if (train->count("--resume") > 0) {
        opts.resume = resume.value_or("");
        if (opts.resume.empty()) {
          opts.resume = (std::filesystem::path(cfg.output_dir) /
                         ttes::kCheckpointFile)
                            .string();
        }
      }
      ttes::TrainOutcome out = ttes::RunTrain(cfg, opts);
      std::cout << "checkpoint " << out.checkpoint_path << "\nmetrics "
                << out.metrics_path << "\n";
      if (out.status == ttes::TrainStatus::kStopped) {
        std::cerr << "interrupted after iteration " << out.iterations
                  << "; checkpoint flushed\n";
        return static_cast<int>(ttes::kExitInterrupted);
      }
      return static_cast<int>(ttes::kExitOk);
    });
  }
  if (*eval) {
    return Guarded([&] {
      ttes::RunConfig cfg = LoadWithOverrides(eval_flags);
      ttes::EvalRunOptions opts;
      opts.checkpoint = eval_checkpoint;
      if (episodes) opts.episodes = *episodes;
      if (eval_flags.quick) opts.episodes = 10;
      ttes::RunEval(cfg, opts);
      return static_cast<int>(ttes::kExitOk);
    });
  }
  if (*bench) {
    return Guarded([&] {
      ttes::RunConfig cfg = LoadWithOverrides(bench_flags);
      if (bench_episodes) cfg.bench.episodes = *bench_episodes;
      if (bench_flags.workers) cfg.bench.max_workers = *bench_flags.workers;
      if (bench_flags.quick) {
        cfg.bench.episodes = 16;
        if (cfg.bench.max_workers == 0) cfg.bench.max_workers = 2;
      }
      ttes::RunBench(cfg);
      return static_cast<int>(ttes::kExitOk);
    });
  }
  if (*init) {
    return Guarded([&] {
      const ttes::ArchSpec arch = init_arch == "mlp" ? ttes::ArchSpec::Mlp()
                                                     : ttes::ArchSpec::GatedCnn();
      ttes::WriteCheckpoint(init_out,
                            ttes::RandomPolicyCheckpoint(
                                arch, init_seed, ttes::kRandomPolicyScale));
      std::cout << "wrote " << init_out << " (" << arch.ParameterCount()
                << " parameters)\n";
      return static_cast<int>(ttes::kExitOk);
    });
  }
  return static_cast<int>(ttes::kExitOk);
}
