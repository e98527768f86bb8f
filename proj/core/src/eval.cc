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

#include "ttes/eval.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ttes/errors.h"

namespace ttes {
namespace {

using nlohmann::json;

// per joint reduce |x| over time, then mean over joints
double Reduce(const std::vector<JointVector>& xs,
              SmoothnessReduction reduction) {
  JointVector acc = JointVector::Zero();
  for (const JointVector& x : xs) {
    if (reduction == SmoothnessReduction::kMaxOverTime) {
      acc = acc.cwiseMax(x.cwiseAbs());
    } else {
      acc += x.cwiseAbs();
    }
  }
  if (reduction == SmoothnessReduction::kMeanOverTime && !xs.empty()) {
    acc /= static_cast<double>(xs.size());
  }
  return acc.mean();
}

void Count(OutcomeCounts& c, const EpisodeRow& row) {
  ++c.episodes;
  c.hits += row.hit;
  c.successes += row.success;
}

json CountsJson(const OutcomeCounts& c) {
  return {{"episodes", c.episodes},
          {"hits", c.hits},
          {"successes", c.successes}};
}

OutcomeCounts CountsFromJson(const json& j) {
  OutcomeCounts c;
  c.episodes = j.at("episodes").get<int>();
  c.hits = j.at("hits").get<int>();
  c.successes = j.at("successes").get<int>();
  return c;
}

json SmoothnessJson(const SmoothnessMetrics& s) {
  return {{"J", s.jerk}, {"A", s.acceleration}, {"V", s.velocity},
          {"JR", s.joint_range}};
}

SmoothnessMetrics SmoothnessFromJson(const json& j) {
  SmoothnessMetrics s;
  s.jerk = j.at("J").get<double>();
  s.acceleration = j.at("A").get<double>();
  s.velocity = j.at("V").get<double>();
  s.joint_range = j.at("JR").get<double>();
  return s;
}

Side SideFromName(const std::string& name) {
  if (name == "forehand") return Side::kForehand;
  if (name == "backhand") return Side::kBackhand;
  if (name == "center") return Side::kCenter;
  throw Error("unknown side '" + name + "'");
}

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

bool HasDistinctBallRows(const Observation& obs) {
  const int newest = kHistoryLength - 1;
  for (int r = 0; r < newest; ++r) {
    if (obs.row(r).tail<3>() != obs.row(newest).tail<3>()) return true;
  }
  return false;
}

}  // namespace

SmoothnessMetrics ComputeSmoothness(const EpisodeRecord& rec,
                                    SmoothnessReduction reduction) {
  if (rec.steps() < 3) {
    throw ContractViolation("smoothness needs at least 3 steps, episode has " +
                            std::to_string(rec.steps()));
  }
  SmoothnessMetrics m;
  m.velocity = Reduce(rec.velocities, reduction);
  m.acceleration = Reduce(rec.Accelerations(), reduction);
  m.jerk = Reduce(rec.Jerks(), reduction);
  JointVector lo = rec.positions.front();
  JointVector hi = rec.positions.front();
  for (const JointVector& q : rec.positions) {
    lo = lo.cwiseMin(q);
    hi = hi.cwiseMax(q);
  }
  m.joint_range = (hi - lo).sum();
  return m;
}

EvalReport Aggregate(std::vector<EpisodeRow> rows) {
  std::sort(rows.begin(), rows.end(),
            [](const EpisodeRow& a, const EpisodeRow& b) {
              return a.index < b.index;
            });
  EvalReport r;
  r.episodes = static_cast<int>(rows.size());
  for (const EpisodeRow& row : rows) {
    Count(r.all, row);
    if (row.side == Side::kBackhand) {
      Count(r.backhand, row);
    } else {
      Count(r.forehand, row);
      if (row.side == Side::kCenter) Count(r.center, row);
    }
    r.smoothness.jerk += row.smoothness.jerk;
    r.smoothness.acceleration += row.smoothness.acceleration;
    r.smoothness.velocity += row.smoothness.velocity;
    r.smoothness.joint_range += row.smoothness.joint_range;
  }
  if (r.episodes > 0) {
    r.smoothness.jerk /= r.episodes;
    r.smoothness.acceleration /= r.episodes;
    r.smoothness.velocity /= r.episodes;
    r.smoothness.joint_range /= r.episodes;
  }
  r.rows = std::move(rows);
  return r;
}

EvalReport EvaluateController(const ControllerFactory& factory,
                              const Task& task, const EvalOptions& options,
                              WorkerPool& pool) {
  std::vector<EpisodeRow> rows(options.episodes);
  RolloutOptions ro;
  ro.filter_cutoff_hz = task.filter_cutoff_hz;
  const InitPose pose = task.ResolvedInitPose();
  pool.ParallelFor(options.episodes, [&](int k) {
    Rng rng(DeriveSeed(options.seed, k));
    EnvState state = Reset(task.env, task.distribution, pose, rng);
    std::unique_ptr<Controller> controller = factory();
    EpisodeResult ep = RunEpisode(task.env, std::move(state), *controller, ro);
    EpisodeRow& row = rows[k];
    row.index = k;
    row.landing_x = ep.record.landing_x;
    row.side = SideOf(row.landing_x);
    row.hit = ep.record.hit;
    row.success = ep.record.success;
    row.steps = ep.record.steps();
    row.reward = TotalReward(ep.record, task.rewards).total;
    row.smoothness = ComputeSmoothness(ep.record, options.reduction);
  });
  return Aggregate(std::move(rows));
}

EvalReport EvaluatePolicy(std::span<const double> theta,
                          const RunningStats& stats, const Task& task,
                          const EvalOptions& options, WorkerPool& pool) {
  if (static_cast<int>(theta.size()) != task.arch.ParameterCount()) {
    throw ShapeError("theta has " + std::to_string(theta.size()) +
                     " entries, architecture expects " +
                     std::to_string(task.arch.ParameterCount()));
  }
  const RunningStats frozen = stats.Snapshot();
  return EvaluateController(
      [&] {
        return std::make_unique<NetworkController>(task.arch, theta, frozen);
      },
      task, options, pool);
}

std::string ReportCsv(const EvalReport& r) {
  std::ostringstream os;
  os << "S,H,J,A,V,JR,S-F,H-F,S-B,H-B,episodes\n";
  os << Fixed(r.S(), 2) << ',' << Fixed(r.H(), 2) << ','
     << Fixed(r.smoothness.jerk, 6) << ',' << Fixed(r.smoothness.acceleration, 6)
     << ',' << Fixed(r.smoothness.velocity, 6) << ','
     << Fixed(r.smoothness.joint_range, 6) << ','
     << Fixed(r.forehand.success_rate(), 2) << ','
     << Fixed(r.forehand.hit_rate(), 2) << ','
     << Fixed(r.backhand.success_rate(), 2) << ','
     << Fixed(r.backhand.hit_rate(), 2) << ',' << r.episodes << '\n';
  return os.str();
}

std::string EpisodesCsv(const EvalReport& r) {
  std::ostringstream os;
  os << "episode,side,landing_x,hit,success,steps,reward,J,A,V,JR\n";
  for (const EpisodeRow& row : r.rows) {
    os << row.index << ',' << SideName(row.side) << ','
       << Fixed(row.landing_x, 6) << ',' << row.hit << ',' << row.success
       << ',' << row.steps << ',' << Fixed(row.reward, 6) << ','
       << Fixed(row.smoothness.jerk, 6) << ','
       << Fixed(row.smoothness.acceleration, 6) << ','
       << Fixed(row.smoothness.velocity, 6) << ','
       << Fixed(row.smoothness.joint_range, 6) << '\n';
  }
  return os.str();
}

std::string ReportJson(const EvalReport& r) {
  json j;
  j["schema"] = "ttes.eval_report.v1";
  j["episodes"] = r.episodes;
  j["S"] = r.S();
  j["H"] = r.H();
  j["S-F"] = r.forehand.success_rate();
  j["H-F"] = r.forehand.hit_rate();
  j["S-B"] = r.backhand.success_rate();
  j["H-B"] = r.backhand.hit_rate();
  j["smoothness"] = SmoothnessJson(r.smoothness);
  j["counts"] = {{"all", CountsJson(r.all)},
                 {"forehand", CountsJson(r.forehand)},
                 {"backhand", CountsJson(r.backhand)},
                 {"center", CountsJson(r.center)}};
  json rows = json::array();
  for (const EpisodeRow& row : r.rows) {
    rows.push_back({{"episode", row.index},
                    {"side", SideName(row.side)},
                    {"landing_x", row.landing_x},
                    {"hit", row.hit},
                    {"success", row.success},
                    {"steps", row.steps},
                    {"reward", row.reward},
                    {"smoothness", SmoothnessJson(row.smoothness)}});
  }
  j["rows"] = std::move(rows);
  return j.dump(2);
}

EvalReport ParseReportJson(const std::string& text) {
  try {
    const json j = json::parse(text);
    if (j.at("schema").get<std::string>() != "ttes.eval_report.v1") {
      throw Error("unsupported report schema");
    }
    EvalReport r;
    r.episodes = j.at("episodes").get<int>();
    r.smoothness = SmoothnessFromJson(j.at("smoothness"));
    const json& c = j.at("counts");
    r.all = CountsFromJson(c.at("all"));
    r.forehand = CountsFromJson(c.at("forehand"));
    r.backhand = CountsFromJson(c.at("backhand"));
    r.center = CountsFromJson(c.at("center"));
    for (const json& jr : j.at("rows")) {
      EpisodeRow row;
      row.index = jr.at("episode").get<int>();
      row.side = SideFromName(jr.at("side").get<std::string>());
      row.landing_x = jr.at("landing_x").get<double>();
      row.hit = jr.at("hit").get<bool>();
      row.success = jr.at("success").get<bool>();
      row.steps = jr.at("steps").get<int>();
      row.reward = jr.at("reward").get<double>();
      row.smoothness = SmoothnessFromJson(jr.at("smoothness"));
      r.rows.push_back(row);
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed report: ") + e.what());
  }
}

std::string FormatReport(const EvalReport& r) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof(line), "%8s %6s %6s %9s %9s %7s %7s %6s %6s %6s %6s\n",
                "episodes", "S", "H", "J", "A", "V", "JR", "S-F", "H-F",
                "S-B", "H-B");
  os << line;
  std::snprintf(line, sizeof(line),
                "%8d %6.1f %6.1f %9.1f %9.2f %7.3f %7.3f %6.1f %6.1f %6.1f %6.1f\n",
                r.episodes, r.S(), r.H(), r.smoothness.jerk,
                r.smoothness.acceleration, r.smoothness.velocity,
                r.smoothness.joint_range, r.forehand.success_rate(),
                r.forehand.hit_rate(), r.backhand.success_rate(),
                r.backhand.hit_rate());
  os << line;
  return os.str();
}

std::optional<double> PredictLandingFromObservation(
    const Observation& obs, const PhysicsParams& physics, double dt) {
  const int newest = kHistoryLength - 1;
  const Vec3 p2 = obs.row(newest).tail<3>().transpose();
  for (int r = newest - 1; r >= 0; --r) {
    const Vec3 p1 = obs.row(r).tail<3>().transpose();
    if (p1 == p2) continue;
    const double span = (newest - r) * dt;
    BallState ball;
    ball.position = p2;
    ball.velocity = (p2 - p1) / span;
    // the difference quotient is the velocity at the middle of the span
    ball.velocity.z() -= physics.gravity * 0.5 * span;
    return PredictLandingX(ball, physics);
  }
  return std::nullopt;
}

HierarchicalController::HierarchicalController(
    std::unique_ptr<Controller> forehand, std::unique_ptr<Controller> backhand,
    PhysicsParams physics, double dt)
    : forehand_(std::move(forehand)),
      backhand_(std::move(backhand)),
      physics_(physics),
      dt_(dt) {}

void HierarchicalController::Begin(const EnvConfig& cfg,
                                   const EnvState& state) {
  choice_.reset();
  forehand_->Begin(cfg, state);
  backhand_->Begin(cfg, state);
}

JointVector HierarchicalController::Act(const Observation& obs,
                                        const EnvState& state) {
  if (!choice_ && HasDistinctBallRows(obs)) {
    std::optional<double> x = PredictLandingFromObservation(obs, physics_, dt_);
    choice_ = (!x || *x >= 0.0) ? Side::kForehand : Side::kBackhand;
  }
  // keep both sub-controllers in step so stateful ones see every frame
  JointVector fore = forehand_->Act(obs, state);
  JointVector back = backhand_->Act(obs, state);
  return choice_ == Side::kBackhand ? back : fore;
}

}  // namespace ttes
