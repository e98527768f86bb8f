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

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "ttes/errors.h"

namespace ttes {
namespace {

int Line(const YAML::Node& n) { return n.Mark().line + 1; }

void RequireMap(const YAML::Node& n, const std::string& where) {
  if (!n.IsMap()) throw ConfigError(where + " must be a mapping", Line(n));
}

// rejects keys outside `allowed`
void CheckKeys(const YAML::Node& n, const std::string& where,
               std::initializer_list<const char*> allowed) {
  RequireMap(n, where);
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& kv : n) {
    const std::string key = kv.first.as<std::string>();
    if (!ok.count(key)) {
      throw ConfigError("unknown key '" + key + "' in " + where,
                        Line(kv.first));
    }
  }
}

template <typename T>
T As(const YAML::Node& n, const std::string& name) {
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("invalid value for '" + name + "'", Line(n));
  }
}

template <typename T>
void Read(const YAML::Node& parent, const char* key, T& out,
          const std::string& where) {
  const YAML::Node n = parent[key];
  if (n) out = As<T>(n, where + "." + key);
}

Interval ReadInterval(const YAML::Node& n, const std::string& name) {
  if (!n.IsSequence() || n.size() != 2) {
    throw ConfigError("'" + name + "' must be a [lo, hi] pair", Line(n));
  }
  Interval iv{As<double>(n[0], name), As<double>(n[1], name)};
  if (!(iv.lo <= iv.hi)) {
    throw ConfigError("'" + name + "' has lo > hi", Line(n));
  }
  return iv;
}

JointVector ReadJoints(const YAML::Node& n, const std::string& name) {
  if (!n.IsSequence() || n.size() != kNumJoints) {
    throw ConfigError("'" + name + "' must list " +
                          std::to_string(kNumJoints) + " joint values",
                      Line(n));
  }
  JointVector q;
  for (int i = 0; i < kNumJoints; ++i) q[i] = As<double>(n[i], name);
  return q;
}

template <typename Enum>
Enum ReadEnum(const YAML::Node& n, const std::string& name,
              std::initializer_list<std::pair<const char*, Enum>> values) {
  const std::string s = As<std::string>(n, name);
  std::string options;
  for (const auto& [text, value] : values) {
    if (s == text) return value;
    options += options.empty() ? text : std::string(", ") + text;
  }
  throw ConfigError("'" + name + "' must be one of: " + options, Line(n));
}

// `where` is the dotted path of this section for messages
BallDistribution ReadDistribution(const YAML::Node& n,
                                  const std::string& where) {
  CheckKeys(n, where,
            {"kind", "range", "x0", "y0", "z0", "vz", "x1", "y1"});
  if (!n["kind"]) {
    throw ConfigError("missing required key '" + where + ".kind'", Line(n));
  }
  const auto kind = ReadEnum<DistributionKind>(
      n["kind"], where + ".kind",
      {{"forehand", DistributionKind::kForehand},
       {"full_table", DistributionKind::kFullTable},
       {"ball_range", DistributionKind::kBallRange}});
  BallDistribution d;
  switch (kind) {
    case DistributionKind::kForehand:
      d = BallDistribution::Forehand();
      break;
    case DistributionKind::kFullTable:
      d = BallDistribution::FullTable();
      break;
    case DistributionKind::kBallRange: {
      if (!n["range"]) {
        throw ConfigError("ball_range needs '" + where + ".range'", Line(n));
      }
      Interval r = ReadInterval(n["range"], where + ".range");
      if (!(r.lo >= 0.0 && r.lo < r.hi)) {
        throw ConfigError("ball range requires 0 <= a < b", Line(n["range"]));
      }
      d = BallDistribution::BallRange(r.lo, r.hi);
      break;
    }
  }
  if (n["range"] && kind != DistributionKind::kBallRange) {
    throw ConfigError("'" + where + ".range' only applies to ball_range",
                      Line(n["range"]));
  }
  auto interval = [&](const char* key, Interval& out) {
    if (n[key]) out = ReadInterval(n[key], where + "." + key);
  };
  interval("x0", d.x0);
  interval("y0", d.y0);
  interval("z0", d.z0);
  interval("vz", d.vz);
  interval("x1", d.x1);
  interval("y1", d.y1);
  try {
    d.Validate();
  } catch (const ConfigError& e) {
    throw ConfigError(e.what(), Line(n));
  }
  return d;
}

void ReadToggle(const YAML::Node& n, const std::string& where, bool& enabled,
                double& weight, const char* extra_key, double* extra) {
  if (extra_key) {
    CheckKeys(n, where, {"enabled", "weight", extra_key});
  } else {
    CheckKeys(n, where, {"enabled", "weight"});
  }
  Read(n, "enabled", enabled, where);
  Read(n, "weight", weight, where);
  if (extra_key) Read(n, extra_key, *extra, where);
}

RewardConfig ReadRewards(const YAML::Node& n, const std::string& where) {
  CheckKeys(n, where,
            {"preset", "hit_weight", "success_weight", "ic", "bbr", "ph", "ja",
             "velocity", "acceleration", "jerk", "pose", "pose_weight",
             "success_shaping", "dtr_weight", "landing_bonus", "center_width",
             "forehand_reference", "backhand_reference"});
  RewardConfig r = RewardConfig::Sparse();
  if (n["preset"]) {
    const bool canonical =
        ReadEnum<bool>(n["preset"], where + ".preset",
                       {{"sparse", false}, {"canonical", true}});
    if (canonical) r = RewardConfig::Canonical();
  }
  Read(n, "hit_weight", r.hit_weight, where);
  Read(n, "success_weight", r.success_weight, where);
  if (n["ic"]) ReadToggle(n["ic"], where + ".ic", r.ic, r.ic_weight, nullptr, nullptr);
  if (n["bbr"]) {
    ReadToggle(n["bbr"], where + ".bbr", r.bbr, r.bbr_weight, "limit",
               &r.bbr_limit);
  }
  if (n["ph"]) {
    ReadToggle(n["ph"], where + ".ph", r.ph, r.ph_weight, "clearance",
               &r.ph_clearance);
  }
  if (n["ja"]) {
    ReadToggle(n["ja"], where + ".ja", r.ja, r.ja_weight, "margin",
               &r.ja_margin);
  }
  auto excess = [&](const char* key, ExcessPenalty& p) {
    if (n[key]) {
      ReadToggle(n[key], where + "." + key, p.enabled, p.weight, "limit",
                 &p.limit);
    }
  };
  excess("velocity", r.velocity);
  excess("acceleration", r.acceleration);
  excess("jerk", r.jerk);
  if (n["pose"]) {
    r.pose = ReadEnum<PoseMode>(n["pose"], where + ".pose",
                                {{"none", PoseMode::kNone},
                                 {"cps", PoseMode::kCps},
                                 {"dcps", PoseMode::kDcps},
                                 {"cpt", PoseMode::kCpt}});
  }
  Read(n, "pose_weight", r.pose_weight, where);
  if (n["success_shaping"]) {
    r.success_shaping = ReadEnum<SuccessShaping>(
        n["success_shaping"], where + ".success_shaping",
        {{"none", SuccessShaping::kNone},
         {"dtr", SuccessShaping::kDtr},
         {"landing_bonus", SuccessShaping::kLandingBonus}});
  }
  Read(n, "dtr_weight", r.dtr_weight, where);
  Read(n, "landing_bonus", r.landing_bonus, where);
  Read(n, "center_width", r.center_width, where);
  if (n["forehand_reference"]) {
    r.forehand_reference =
        ReadJoints(n["forehand_reference"], where + ".forehand_reference");
  }
  if (n["backhand_reference"]) {
    r.backhand_reference =
        ReadJoints(n["backhand_reference"], where + ".backhand_reference");
  }
  try {
    r.Validate();
  } catch (const ConfigError& e) {
    throw ConfigError(e.what(), Line(n));
  }
  return r;
}

void ReadEnv(const YAML::Node& n, Task& task, BallDistribution& dist) {
  CheckKeys(n, "env",
            {"distribution", "init_pose", "noise", "physics", "max_steps",
             "substeps", "init_perturbation", "back_plane_y",
             "forehand_pose", "center_pose"});
  EnvConfig& env = task.env;
  if (n["distribution"]) dist = ReadDistribution(n["distribution"], "env.distribution");
  if (n["init_pose"]) {
    task.init_pose = ReadEnum<InitPose>(n["init_pose"], "env.init_pose",
                                        {{"forehand", InitPose::kForehand},
                                         {"center", InitPose::kCenter}});
  }
  if (const YAML::Node noise = n["noise"]) {
    CheckKeys(noise, "env.noise",
              {"ball_noise", "ball_delay_max", "robot_delay_max",
               "action_delay_max"});
    Read(noise, "ball_noise", env.noise.ball_noise, "env.noise");
    Read(noise, "ball_delay_max", env.noise.ball_delay_max, "env.noise");
    Read(noise, "robot_delay_max", env.noise.robot_delay_max, "env.noise");
    Read(noise, "action_delay_max", env.noise.action_delay_max, "env.noise");
  }
  if (const YAML::Node p = n["physics"]) {
    CheckKeys(p, "env.physics",
              {"gravity", "ball_radius", "paddle_radius", "table_restitution",
               "paddle_restitution", "contact_margin"});
    Read(p, "gravity", env.physics.gravity, "env.physics");
    Read(p, "ball_radius", env.physics.ball_radius, "env.physics");
    Read(p, "paddle_radius", env.physics.paddle_radius, "env.physics");
    Read(p, "table_restitution", env.physics.table_restitution, "env.physics");
    Read(p, "paddle_restitution", env.physics.paddle_restitution,
         "env.physics");
    Read(p, "contact_margin", env.physics.contact_margin, "env.physics");
  }
  Read(n, "max_steps", env.max_steps, "env");
  Read(n, "substeps", env.substeps, "env");
  Read(n, "init_perturbation", env.init_perturbation, "env");
  Read(n, "back_plane_y", env.back_plane_y, "env");
  if (n["forehand_pose"]) {
    env.forehand_pose = ReadJoints(n["forehand_pose"], "env.forehand_pose");
  }
  if (n["center_pose"]) {
    env.center_pose = ReadJoints(n["center_pose"], "env.center_pose");
  }
  try {
    env.Validate();
  } catch (const ConfigError& e) {
    throw ConfigError(e.what(), Line(n));
  }
}

void ReadArch(const YAML::Node& n, Task& task) {
  CheckKeys(n, "arch", {"kind", "conv", "mlp_hidden", "filter_cutoff_hz"});
  ArchSpec& a = task.arch;
  if (n["kind"]) {
    const ArchKind kind =
        ReadEnum<ArchKind>(n["kind"], "arch.kind",
                           {{"gated_cnn", ArchKind::kGatedCnn},
                            {"mlp", ArchKind::kMlp}});
    a = kind == ArchKind::kGatedCnn ? ArchSpec::GatedCnn() : ArchSpec::Mlp();
  }
  if (const YAML::Node conv = n["conv"]) {
    if (!conv.IsSequence()) {
      throw ConfigError("'arch.conv' must be a list", Line(conv));
    }
    a.conv.clear();
    for (const YAML::Node& l : conv) {
      CheckKeys(l, "arch.conv[]",
                {"channels", "kernel", "dilation", "stride", "gated"});
      ConvLayerSpec spec;
      Read(l, "channels", spec.channels, "arch.conv[]");
      Read(l, "kernel", spec.kernel, "arch.conv[]");
      Read(l, "dilation", spec.dilation, "arch.conv[]");
      Read(l, "stride", spec.stride, "arch.conv[]");
      Read(l, "gated", spec.gated, "arch.conv[]");
      a.conv.push_back(spec);
    }
  }
  if (const YAML::Node h = n["mlp_hidden"]) {
    a.mlp_hidden = As<std::vector<int>>(h, "arch.mlp_hidden");
  }
  if (const YAML::Node f = n["filter_cutoff_hz"]) {
    if (!f.IsNull()) task.filter_cutoff_hz = As<double>(f, "arch.filter_cutoff_hz");
  }
  try {
    a.Validate();
    if (task.filter_cutoff_hz) {
      const double nyquist = 0.5 / task.env.control_dt;
      if (!(*task.filter_cutoff_hz > 0.0 && *task.filter_cutoff_hz < nyquist)) {
        throw ConfigError("arch.filter_cutoff_hz must lie in (0, " +
                          std::to_string(nyquist) + ") Hz");
      }
    }
  } catch (const ConfigError& e) {
    throw ConfigError(e.what(), Line(n));
  }
}

void ReadEs(const YAML::Node& n, RunConfig& cfg) {
  CheckKeys(n, "es",
            {"sigma", "step_size", "pairs", "top", "rollouts", "iterations",
             "normalize_rewards", "state_subsample", "probe_episodes",
             "max_retries", "checkpoint_every"});
  ESConfig& es = cfg.es;
  Read(n, "sigma", es.sigma, "es");
  Read(n, "step_size", es.step_size, "es");
  Read(n, "pairs", es.pairs, "es");
  Read(n, "top", es.top, "es");
  Read(n, "rollouts", es.rollouts, "es");
  Read(n, "iterations", es.iterations, "es");
  Read(n, "normalize_rewards", es.normalize_rewards, "es");
  Read(n, "state_subsample", es.state_subsample, "es");
  Read(n, "probe_episodes", es.probe_episodes, "es");
  Read(n, "max_retries", es.max_retries, "es");
  Read(n, "checkpoint_every", cfg.checkpoint_every, "es");
  try {
    es.Validate();
  } catch (const ConfigError& e) {
    throw ConfigError(e.what(), Line(n));
  }
  if (cfg.checkpoint_every < 1) {
    throw ConfigError("es.checkpoint_every must be >= 1", Line(n));
  }
}

CurriculumStage ReadStage(const YAML::Node& n, int index,
                          const RewardConfig& default_rewards) {
  const std::string where = "curriculum.stages[" + std::to_string(index) + "]";
  CheckKeys(n, where, {"name", "distribution", "rewards", "advance"});
  CurriculumStage s;
  s.name = "stage" + std::to_string(index);
  Read(n, "name", s.name, where);
  if (!n["distribution"]) {
    throw ConfigError("missing required key '" + where + ".distribution'",
                      Line(n));
  }
  s.distribution = ReadDistribution(n["distribution"], where + ".distribution");
  s.rewards = n["rewards"] ? ReadRewards(n["rewards"], where + ".rewards")
                           : default_rewards;
  if (const YAML::Node adv = n["advance"]) {
    CheckKeys(adv, where + ".advance", {"rule", "iterations", "threshold"});
    if (!adv["rule"]) {
      throw ConfigError("missing required key '" + where + ".advance.rule'",
                        Line(adv));
    }
    s.rule = ReadEnum<AdvanceRule>(
        adv["rule"], where + ".advance.rule",
        {{"never", AdvanceRule::kNever},
         {"iterations", AdvanceRule::kIterations},
         {"success_threshold", AdvanceRule::kSuccessThreshold}});
    Read(adv, "iterations", s.iterations, where + ".advance");
    Read(adv, "threshold", s.success_threshold, where + ".advance");
    if (s.rule == AdvanceRule::kIterations && !adv["iterations"]) {
      throw ConfigError("missing required key '" + where +
                            ".advance.iterations'",
                        Line(adv));
    }
    if (s.rule == AdvanceRule::kSuccessThreshold && !adv["threshold"]) {
      throw ConfigError("missing required key '" + where +
                            ".advance.threshold'",
                        Line(adv));
    }
  }
  return s;
}

}  // namespace

const char* RunModeName(RunMode mode) {
  switch (mode) {
    case RunMode::kTrain:
      return "train";
    case RunMode::kEval:
      return "eval";
    case RunMode::kBench:
      return "bench";
  }
  return "unknown";
}

void RunConfig::Validate() const {
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
  task.env.Validate();
  task.arch.Validate();
  task.rewards.Validate();
  task.distribution.Validate();
  es.Validate();
  curriculum.Validate();
  if (eval.episodes < 1) throw ConfigError("eval.episodes must be >= 1");
  if (bench.episodes < 1) throw ConfigError("bench.episodes must be >= 1");
}

RunConfig ParseRunConfig(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.msg, e.mark.line + 1);
  }
  if (!root || root.IsNull()) throw ConfigError("empty config");
  CheckKeys(root, "config",
            {"mode", "seed", "workers", "output_dir", "env", "arch", "es",
             "rewards", "curriculum", "eval", "bench"});
  for (const char* key : {"mode", "seed"}) {
    if (!root[key]) {
      throw ConfigError(std::string("missing required key '") + key + "'",
                        Line(root));
    }
  }
  RunConfig cfg;
  cfg.mode = ReadEnum<RunMode>(root["mode"], "mode",
                               {{"train", RunMode::kTrain},
                                {"eval", RunMode::kEval},
                                {"bench", RunMode::kBench}});
  cfg.seed = As<std::uint64_t>(root["seed"], "seed");
  Read(root, "workers", cfg.workers, "config");
  Read(root, "output_dir", cfg.output_dir, "config");
  if (cfg.workers < 1) {
    throw ConfigError("workers must be >= 1", Line(root["workers"]));
  }

  BallDistribution dist = BallDistribution::Forehand();
  if (root["env"]) ReadEnv(root["env"], cfg.task, dist);
  if (root["arch"]) ReadArch(root["arch"], cfg.task);
  if (root["es"]) ReadEs(root["es"], cfg);
  cfg.es.seed = cfg.seed;
  RewardConfig rewards = RewardConfig::Sparse();
  if (root["rewards"]) rewards = ReadRewards(root["rewards"], "rewards");

  if (const YAML::Node c = root["curriculum"]) {
    CheckKeys(c, "curriculum", {"stages"});
    const YAML::Node stages = c["stages"];
    if (!stages || !stages.IsSequence() || stages.size() == 0) {
      throw ConfigError("'curriculum.stages' must be a non-empty list",
                        Line(c));
    }
    for (std::size_t i = 0; i < stages.size(); ++i) {
      cfg.curriculum.stages.push_back(
          ReadStage(stages[i], static_cast<int>(i), rewards));
    }
    try {
      cfg.curriculum.Validate();
    } catch (const ConfigError& e) {
      throw ConfigError(e.what(), Line(c));
    }
  } else {
    cfg.curriculum = Curriculum::Single(dist, rewards);
  }
  cfg.task.distribution = cfg.curriculum.stages.front().distribution;
  cfg.task.rewards = cfg.curriculum.stages.front().rewards;

  if (const YAML::Node e = root["eval"]) {
    CheckKeys(e, "eval", {"episodes", "seed", "checkpoint", "reduction"});
    Read(e, "episodes", cfg.eval.episodes, "eval");
    Read(e, "seed", cfg.eval.seed, "eval");
    Read(e, "checkpoint", cfg.eval.checkpoint, "eval");
    if (e["reduction"]) {
      cfg.eval.reduction = ReadEnum<SmoothnessReduction>(
          e["reduction"], "eval.reduction",
          {{"max", SmoothnessReduction::kMaxOverTime},
           {"mean", SmoothnessReduction::kMeanOverTime}});
    }
    if (cfg.eval.episodes < 1) {
      throw ConfigError("eval.episodes must be >= 1", Line(e));
    }
  }
  if (const YAML::Node b = root["bench"]) {
    CheckKeys(b, "bench", {"episodes", "max_workers"});
    Read(b, "episodes", cfg.bench.episodes, "bench");
    Read(b, "max_workers", cfg.bench.max_workers, "bench");
    if (cfg.bench.episodes < 1) {
      throw ConfigError("bench.episodes must be >= 1", Line(b));
    }
  }
  cfg.Validate();
  return cfg;
}

RunConfig LoadRunConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseRunConfig(ss.str());
}

}  // namespace ttes
