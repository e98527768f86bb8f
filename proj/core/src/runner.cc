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

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "ttes/errors.h"

namespace ttes {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string JoinPath(const std::string& dir, const char* file) {
  return (fs::path(dir) / file).string();
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw Error("write failed: " + path);
}

std::string FormatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string MetricsLine(const IterationMetrics& m) {
  std::string line = std::to_string(m.iteration) + "," +
                     FormatDouble(m.mean_fitness) + "," +
                     FormatDouble(m.max_fitness) + "," +
                     FormatDouble(m.sigma_r) + ",";
  if (m.probe) line += FormatDouble(m.probe->success_rate());
  line += ",";
  if (m.probe) line += FormatDouble(m.probe->hit_rate());
  line += "," + std::to_string(m.stage);
  return line;
}

// Rewrites the metrics file so it holds exactly the rows up to `keep`
// (a fresh file when keep is 0), then returns an append stream.
std::ofstream OpenMetrics(const std::string& path, std::uint64_t keep) {
  std::vector<std::string> rows;
  if (keep > 0 && fs::exists(path)) {
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#' || line.rfind("iteration", 0) == 0) {
        continue;
      }
      const std::uint64_t it = std::stoull(line.substr(0, line.find(',')));
      if (it <= keep) rows.push_back(line);
    }
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << kMetricsVersionLine << '\n' << kMetricsHeader << '\n';
  for (const std::string& r : rows) out << r << '\n';
  out.flush();
  return out;
}

Checkpoint MakeCheckpoint(const RunConfig& cfg, const TrainState& state,
                          std::uint64_t seed) {
  Checkpoint c;
  c.arch = cfg.task.arch;
  c.theta.assign(state.theta.data(), state.theta.data() + state.theta.size());
  c.stats = state.stats;
  c.curriculum = state.curriculum;
  c.iteration = state.iteration;
  c.seed = seed;
  return c;
}

std::string ArchMismatch(const ArchSpec& want, const ArchSpec& got) {
  return std::string("checkpoint architecture (") + ArchKindName(got.kind) +
         ", " + std::to_string(got.ParameterCount()) +
         " parameters) does not match the configured architecture (" +
         ArchKindName(want.kind) + ", " +
         std::to_string(want.ParameterCount()) + " parameters)";
}

}  // namespace

TrainOutcome RunTrain(const RunConfig& cfg, const TrainOptions& options) {
  cfg.Validate();
  std::ostream& log = options.log ? *options.log : std::cout;
  fs::create_directories(cfg.output_dir);

  ESConfig es = cfg.es;
  TrainState state;
  if (!options.resume.empty()) {
    Checkpoint c = ReadCheckpoint(options.resume);
    if (!(c.arch == cfg.task.arch)) {
      throw ShapeError(ArchMismatch(cfg.task.arch, c.arch));
    }
    if (c.curriculum.stage >= static_cast<int>(cfg.curriculum.stages.size())) {
      throw CheckpointError("checkpoint curriculum stage " +
                            std::to_string(c.curriculum.stage) +
                            " does not exist in the configured curriculum");
    }
    state.theta = Eigen::Map<const Eigen::VectorXd>(
        c.theta.data(), static_cast<Eigen::Index>(c.theta.size()));
    state.stats = c.stats;
    state.curriculum = c.curriculum;
    state.iteration = c.iteration;
    // the run keeps the seed it was started with
    es.seed = c.seed;
    log << "resuming from " << options.resume << " at iteration "
        << c.iteration << "\n";
  } else {
    state.theta = Eigen::VectorXd::Zero(cfg.task.arch.ParameterCount());
  }

  TrainOutcome outcome;
  outcome.checkpoint_path = JoinPath(cfg.output_dir, kCheckpointFile);
  outcome.metrics_path = JoinPath(cfg.output_dir, kMetricsFile);
  std::ofstream metrics = OpenMetrics(outcome.metrics_path, state.iteration);

  EpisodeObjective objective(cfg.task, es.state_subsample);
  WorkerPool pool(cfg.workers);
  const std::uint64_t start = state.iteration;
  auto save = [&](const TrainState& s) {
    WriteCheckpoint(outcome.checkpoint_path, MakeCheckpoint(cfg, s, es.seed));
  };

  TrainHooks hooks;
  hooks.on_iteration = [&](const IterationMetrics& m, const TrainState& s) {
    metrics << MetricsLine(m) << '\n';
    metrics.flush();
    if (s.iteration % cfg.checkpoint_every == 0) save(s);
    log << "iter " << m.iteration << " stage " << m.stage << " mean "
        << m.mean_fitness << " max " << m.max_fitness;
    if (m.probe) {
      log << " probe_success " << m.probe->success_rate() << " probe_hit "
          << m.probe->hit_rate();
    }
    log << "\n";
  };
  if (options.stop) {
    hooks.stop_requested = [&] { return options.stop->load(); };
  }

  try {
    outcome.status =
        Train(es, objective, &cfg.curriculum, pool, state, es.iterations, hooks);
  } catch (...) {
    if (state.iteration > start) save(state);
    throw;
  }
  save(state);
  outcome.iterations = state.iteration;
  return outcome;
}

EvalReport RunEval(const RunConfig& cfg, const EvalRunOptions& options) {
  cfg.Validate();
  std::ostream& log = options.log ? *options.log : std::cout;
  std::string path = options.checkpoint;
  if (path.empty()) path = cfg.eval.checkpoint;
  if (path.empty()) path = JoinPath(cfg.output_dir, kCheckpointFile);
  const Checkpoint c = ReadCheckpoint(path);
  if (!(c.arch == cfg.task.arch)) {
    throw ShapeError(ArchMismatch(cfg.task.arch, c.arch));
  }
  Task task = cfg.task;
  const int stage = std::min<int>(c.curriculum.stage,
                                  static_cast<int>(cfg.curriculum.stages.size()) - 1);
  task.distribution = cfg.curriculum.stages[stage].distribution;
  task.rewards = cfg.curriculum.stages[stage].rewards;

  EvalOptions eo;
  eo.episodes = options.episodes ? *options.episodes : cfg.eval.episodes;
  eo.seed = cfg.eval.seed;
  eo.reduction = cfg.eval.reduction;
  if (eo.episodes < 1) throw ConfigError("episodes must be >= 1");
  WorkerPool pool(cfg.workers);
  EvalReport report = EvaluatePolicy(c.theta, c.stats, task, eo, pool);

  fs::create_directories(cfg.output_dir);
  WriteText(JoinPath(cfg.output_dir, "report.json"), ReportJson(report));
  WriteText(JoinPath(cfg.output_dir, "report.csv"), ReportCsv(report));
  WriteText(JoinPath(cfg.output_dir, "episodes.csv"), EpisodesCsv(report));
  log << "checkpoint " << path << " (iteration " << c.iteration << ", "
      << task.distribution.Describe() << ")\n"
      << FormatReport(report);
  return report;
}

BenchReport RunBench(const RunConfig& cfg, std::ostream* log_stream) {
  cfg.Validate();
  std::ostream& log = log_stream ? *log_stream : std::cout;
  BenchReport report;
  report.hardware_threads =
      static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const int max_workers = cfg.bench.max_workers > 0 ? cfg.bench.max_workers
                                                    : report.hardware_threads;
  const Checkpoint policy =
      RandomPolicyCheckpoint(cfg.task.arch, cfg.seed, kRandomPolicyScale);
  EvalOptions eo;
  eo.episodes = cfg.bench.episodes;
  eo.seed = cfg.seed;
  for (int w = 1; w <= max_workers; w *= 2) {
    WorkerPool pool(w);
    const auto t0 = std::chrono::steady_clock::now();
    EvaluatePolicy(policy.theta, policy.stats, cfg.task, eo, pool);
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
    BenchResult r{w, eo.episodes, secs, eo.episodes / std::max(secs, 1e-9)};
    report.results.push_back(r);
    log << "workers " << w << ": " << r.episodes_per_second
        << " episodes/s\n";
  }
  fs::create_directories(cfg.output_dir);
  WriteText(JoinPath(cfg.output_dir, "bench.json"), BenchJson(report));
  return report;
}

std::string BenchJson(const BenchReport& report) {
  json j;
  j["schema"] = "ttes.bench.v1";
  j["hardware_threads"] = report.hardware_threads;
  j["results"] = json::array();
  for (const BenchResult& r : report.results) {
    j["results"].push_back({{"workers", r.workers},
                            {"episodes", r.episodes},
                            {"seconds", r.seconds},
                            {"episodes_per_second", r.episodes_per_second}});
  }
  return j.dump(2);
}

BenchReport ParseBenchJson(const std::string& text) {
  try {
    const json j = json::parse(text);
    if (j.at("schema").get<std::string>() != "ttes.bench.v1") {
      throw Error("unsupported bench schema");
    }
    BenchReport report;
    report.hardware_threads = j.at("hardware_threads").get<int>();
    for (const json& r : j.at("results")) {
      report.results.push_back({r.at("workers").get<int>(),
                                r.at("episodes").get<int>(),
                                r.at("seconds").get<double>(),
                                r.at("episodes_per_second").get<double>()});
    }
    return report;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed bench report: ") + e.what());
  }
}

Checkpoint RandomPolicyCheckpoint(const ArchSpec& arch, std::uint64_t seed,
                                  double scale) {
  arch.Validate();
  Checkpoint c;
  c.arch = arch;
  c.seed = seed;
  Rng rng(DeriveSeed(seed, 0x7a11d0));
  std::normal_distribution<double> normal(0.0, scale);
  c.theta.resize(arch.ParameterCount());
  for (double& v : c.theta) v = normal(rng);
  return c;
}

std::vector<MetricsRow> ReadMetrics(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open metrics file " + path);
  std::string line;
  if (!std::getline(in, line) || line != kMetricsVersionLine) {
    throw Error("metrics file " + path + " lacks the version line");
  }
  if (!std::getline(in, line) || line != kMetricsHeader) {
    throw Error("metrics file " + path + " has an unexpected header");
  }
  std::vector<MetricsRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 7) throw Error("malformed metrics row: " + line);
    MetricsRow r;
    r.iteration = std::stoull(f[0]);
    r.mean_fitness = std::stod(f[1]);
    r.max_fitness = std::stod(f[2]);
    r.sigma_r = std::stod(f[3]);
    if (!f[4].empty()) r.probe_success = std::stod(f[4]);
    if (!f[5].empty()) r.probe_hit = std::stod(f[5]);
    r.stage = std::stoi(f[6]);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace ttes
