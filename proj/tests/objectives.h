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

#ifndef TTES_TESTS_OBJECTIVES_H_
#define TTES_TESTS_OBJECTIVES_H_

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ttes/curriculum.h"
#include "ttes/es.h"
#include "ttes/worker_pool.h"

namespace ttes::testing {

// F(theta) = -|theta - target|^2
class SphereObjective : public Objective {
 public:
  explicit SphereObjective(Eigen::VectorXd target)
      : target_(std::move(target)) {}
  int dimension() const override { return static_cast<int>(target_.size()); }
  Fitness Evaluate(std::span<const double> theta, const RunningStats&,
                   std::uint64_t, int, RunningStats*) const override {
    Eigen::Map<const Eigen::VectorXd> t(theta.data(), theta.size());
    Fitness f;
    f.value = -(t - target_).squaredNorm();
    f.rollouts = {f.value};
    return f;
  }
  const Eigen::VectorXd& target() const { return target_; }

 private:
  Eigen::VectorXd target_;
};

// F(theta) = c . theta
class LinearObjective : public Objective {
 public:
  explicit LinearObjective(Eigen::VectorXd c) : c_(std::move(c)) {}
  int dimension() const override { return static_cast<int>(c_.size()); }
  Fitness Evaluate(std::span<const double> theta, const RunningStats&,
                   std::uint64_t, int, RunningStats*) const override {
    Fitness f;
    f.value = c_.dot(Eigen::Map<const Eigen::VectorXd>(theta.data(),
                                                       theta.size()));
    f.rollouts = {f.value};
    return f;
  }

 private:
  Eigen::VectorXd c_;
};

// a two-parameter objective whose probe success is scripted: below the
// threshold for the first `ramp` probes of each stage, above it after
class ScriptedProbeObjective : public Objective {
 public:
  explicit ScriptedProbeObjective(int ramp) : ramp_(ramp) {}
  int dimension() const override { return 2; }
  Fitness Evaluate(std::span<const double> theta, const RunningStats&,
                   std::uint64_t, int, RunningStats*) const override {
    Fitness f;
    f.value = -(theta[0] * theta[0] + theta[1] * theta[1]);
    return f;
  }
  std::optional<ProbeResult> Probe(std::span<const double>,
                                   const RunningStats&, std::uint64_t, int,
                                   WorkerPool&) const override {
    ProbeResult p;
    p.episodes = 10;
    p.successes = ++probes_in_stage_ > ramp_ ? 7 : 3;
    return p;
  }
  void ApplyStage(const CurriculumStage& stage) override {
    if (stage.name != current_) {
      current_ = stage.name;
      probes_in_stage_ = 0;
      seen_.push_back(stage.distribution.Describe());
    }
  }
  const std::vector<std::string>& seen() const { return seen_; }

 private:
  int ramp_;
  mutable int probes_in_stage_ = 0;
  std::string current_;
  std::vector<std::string> seen_;
};

// the sphere setting shared by the unit and acceptance suites
inline ESConfig SphereEsConfig() {
  ESConfig cfg;
  cfg.sigma = 0.02;
  cfg.step_size = 0.02;
  cfg.pairs = 64;
  cfg.top = 64;
  cfg.rollouts = 1;
  cfg.iterations = 300;
  cfg.probe_episodes = 0;
  cfg.seed = 7;
  return cfg;
}

}  // namespace ttes::testing

#endif  // TTES_TESTS_OBJECTIVES_H_
