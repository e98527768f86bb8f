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

#include "ttes/rewards.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ttes/errors.h"
#include "ttes/robot.h"

namespace ttes {

const char* PoseModeName(PoseMode mode) {
  switch (mode) {
    case PoseMode::kNone:
      return "none";
    case PoseMode::kCps:
      return "cps";
    case PoseMode::kDcps:
      return "dcps";
    case PoseMode::kCpt:
      return "cpt";
  }
  return "?";
}

const char* SuccessShapingName(SuccessShaping mode) {
  switch (mode) {
    case SuccessShaping::kNone:
      return "none";
    case SuccessShaping::kDtr:
      return "dtr";
    case SuccessShaping::kLandingBonus:
      return "landing_bonus";
  }
  return "?";
}

RewardConfig RewardConfig::Sparse() {
  RewardConfig c;
  RobotModel robot = RobotModel::Default();
  c.joint_lower = robot.lower();
  c.joint_upper = robot.upper();
  c.forehand_reference = ForehandPose();
  c.backhand_reference = BackhandPose();
  return c;
}

RewardConfig RewardConfig::Canonical() {
  RewardConfig c = Sparse();
  c.ic = c.bbr = c.ph = c.ja = true;
  c.velocity.enabled = c.acceleration.enabled = c.jerk.enabled = true;
  return c;
}

void RewardConfig::Validate() const {
  auto finite = [](double w, const char* name) {
    if (!std::isfinite(w)) {
      throw ConfigError(std::string("reward weight ") + name +
                        " must be finite");
    }
  };
  finite(hit_weight, "hit");
  finite(success_weight, "success");
  finite(ic_weight, "ic");
  finite(bbr_weight, "bbr");
  finite(ph_weight, "ph");
  finite(ja_weight, "ja");
  finite(velocity.weight, "v");
  finite(acceleration.weight, "a");
  finite(jerk.weight, "j");
  finite(pose_weight, "pose");
  finite(dtr_weight, "dtr");
  finite(landing_bonus, "landing_bonus");
  if (!(center_width > 0.0)) throw ConfigError("center_width must be > 0");
  if (!(ja_margin >= 0.0 && ja_margin < 0.5)) {
    throw ConfigError("ja_margin must lie in [0, 0.5)");
  }
  if (std::abs(cpt_j1_forehand_sign) != 1 ||
      std::abs(cpt_j4_forehand_sign) != 1) {
    throw ConfigError("cpt forehand signs must be +1 or -1");
  }
  for (int i = 0; i < kNumJoints; ++i) {
    if (!(joint_lower[i] < joint_upper[i])) {
      throw ConfigError("reward joint limits require lower < upper");
    }
  }
}

std::vector<JointVector> EpisodeRecord::Accelerations() const {
  std::vector<JointVector> a;
  for (std::size_t t = 1; t < velocities.size(); ++t) {
    a.push_back((velocities[t] - velocities[t - 1]) / dt);
  }
  return a;
}

std::vector<JointVector> EpisodeRecord::Jerks() const {
  std::vector<JointVector> a = Accelerations();
  std::vector<JointVector> j;
  for (std::size_t t = 1; t < a.size(); ++t) {
    j.push_back((a[t] - a[t - 1]) / dt);
  }
  return j;
}

int EpisodeRecord::PreContactSamples() const {
  int n = static_cast<int>(positions.size());
  if (contact_step < 0) return n;
  return std::min(n, contact_step + 1);
}

std::vector<std::pair<std::string, double>> RewardBreakdown::Terms() const {
  return {{"hit", hit},     {"success", success}, {"ic", style.ic},
          {"bbr", style.bbr}, {"ph", style.ph},   {"ja", style.ja},
          {"v", style.v},   {"a", style.a},       {"j", style.j},
          {"pose", pose},   {"dtr", dtr},         {"total", total}};
}

double SparseReward(const EpisodeRecord& rec) {
  return (rec.hit ? 1.0 : 0.0) + (rec.success ? 1.0 : 0.0);
}

namespace {

// per-sample raw penalty amounts (before weights); shared by the batch and
// streaming paths so both sum identical terms in identical order
double BbrExcess(const JointVector& q, const RewardConfig& cfg) {
  return std::max(0.0, std::abs(q[kBaseJoint]) - cfg.bbr_limit);
}

double PhExcess(const Vec3& paddle, const RewardConfig& cfg) {
  bool over = std::abs(paddle.x()) < cfg.table_half_width &&
              std::abs(paddle.y()) < cfg.table_half_length;
  double h = paddle.z() - cfg.table_height;
  return over && h < cfg.ph_clearance ? cfg.ph_clearance - h : 0.0;
}

double JaExcess(const JointVector& q, const RewardConfig& cfg) {
  double sum = 0.0;
  for (int i = 0; i < kNumJoints; ++i) {
    double margin = cfg.ja_margin * (cfg.joint_upper[i] - cfg.joint_lower[i]);
    sum += std::max(0.0, margin - (q[i] - cfg.joint_lower[i]));
    sum += std::max(0.0, margin - (cfg.joint_upper[i] - q[i]));
  }
  return sum;
}

double LimitExcess(const JointVector& x, double limit) {
  double sum = 0.0;
  for (int i = 0; i < kNumJoints; ++i) {
    sum += std::max(0.0, std::abs(x[i]) - limit);
  }
  return sum;
}

// Raw sums kept separately so the weight is applied once at the end.
struct StyleSums {
  double bbr = 0.0, ph = 0.0, ja = 0.0, v = 0.0, a = 0.0, j = 0.0;
};

StylePenalties Weighted(const StyleSums& s, bool collision,
                        const RewardConfig& cfg) {
  StylePenalties p;
  if (cfg.ic && collision) p.ic = -cfg.ic_weight;
  if (cfg.bbr) p.bbr = -cfg.bbr_weight * s.bbr;
  if (cfg.ph) p.ph = -cfg.ph_weight * s.ph;
  if (cfg.ja) p.ja = -cfg.ja_weight * s.ja;
  if (cfg.velocity.enabled) p.v = -cfg.velocity.weight * s.v;
  if (cfg.acceleration.enabled) p.a = -cfg.acceleration.weight * s.a;
  if (cfg.jerk.enabled) p.j = -cfg.jerk.weight * s.j;
  return p;
}

double MinDistance(const EpisodeRecord& rec, const JointVector& ref) {
  int n = rec.PreContactSamples();
  double best = std::numeric_limits<double>::infinity();
  for (int t = 0; t < n; ++t) {
    best = std::min(best, (rec.positions[t] - ref).norm());
  }
  return best;
}

RewardBreakdown Combine(const EpisodeRecord& rec, const RewardConfig& cfg,
                        const StylePenalties& style) {
  RewardBreakdown b;
  if (cfg.sparse) {
    b.hit = rec.hit ? cfg.hit_weight : 0.0;
    b.success = rec.success ? cfg.success_weight : 0.0;
  }
  if (cfg.success_shaping == SuccessShaping::kLandingBonus && rec.success) {
    b.success += cfg.landing_bonus;
  }
  b.style = style;
  switch (cfg.pose) {
    case PoseMode::kNone:
      break;
    case PoseMode::kCps:
      b.pose = cfg.pose_weight *
               PoseRewardCps(rec, cfg,
                             rec.landing_x >= 0.0 ? Side::kForehand
                                                  : Side::kBackhand);
      break;
    case PoseMode::kDcps:
      b.pose = cfg.pose_weight * PoseRewardDcps(rec, cfg, rec.landing_x);
      break;
    case PoseMode::kCpt:
      b.pose = cfg.pose_weight * PoseRewardCpt(rec, cfg, rec.landing_x);
      break;
  }
  if (cfg.success_shaping == SuccessShaping::kDtr) {
    b.dtr = cfg.dtr_weight * DtrReward(rec);
  }
  b.total = b.hit + b.success + b.style.sum() + b.pose + b.dtr;
  return b;
}

}  // namespace

StylePenalties ComputeStylePenalties(const EpisodeRecord& rec,
                                     const RewardConfig& cfg) {
  StyleSums s;
  for (std::size_t t = 1; t < rec.positions.size(); ++t) {
    s.bbr += BbrExcess(rec.positions[t], cfg);
    s.ja += JaExcess(rec.positions[t], cfg);
  }
  for (std::size_t t = 1; t < rec.paddle_centers.size(); ++t) {
    s.ph += PhExcess(rec.paddle_centers[t], cfg);
  }
  for (const JointVector& v : rec.velocities) {
    s.v += LimitExcess(v, cfg.velocity.limit);
  }
  for (const JointVector& a : rec.Accelerations()) {
    s.a += LimitExcess(a, cfg.acceleration.limit);
  }
  for (const JointVector& j : rec.Jerks()) {
    s.j += LimitExcess(j, cfg.jerk.limit);
  }
  return Weighted(s, rec.collision, cfg);
}

double CenterWeight(double landing_x, const RewardConfig& cfg) {
  return std::clamp(std::abs(landing_x) / cfg.center_width, 0.0, 1.0);
}

double PoseRewardCps(const EpisodeRecord& rec, const RewardConfig& cfg,
                     Side side) {
  const JointVector& ref = side == Side::kBackhand ? cfg.backhand_reference
                                                   : cfg.forehand_reference;
  return 1.0 - MinDistance(rec, ref);
}

double PoseRewardDcps(const EpisodeRecord& rec, const RewardConfig& cfg,
                      double landing_x) {
  double w = CenterWeight(landing_x, cfg);
  double diff = PoseRewardCps(rec, cfg, Side::kForehand) -
                PoseRewardCps(rec, cfg, Side::kBackhand);
  return landing_x >= 0.0 ? w * diff : -w * diff;
}

double PoseRewardCpt(const EpisodeRecord& rec, const RewardConfig& cfg,
                     double landing_x) {
  int n = rec.PreContactSamples();
  if (n == 0) return 0.0;
  const double mid1 =
      0.5 * (cfg.joint_lower[kBaseJoint] + cfg.joint_upper[kBaseJoint]);
  const double mid4 = 0.5 * (cfg.joint_lower[kForearmRollJoint] +
                             cfg.joint_upper[kForearmRollJoint]);
  int forehand = 0, backhand = 0;
  for (int t = 0; t < n; ++t) {
    double s1 = cfg.cpt_j1_forehand_sign * (rec.positions[t][kBaseJoint] - mid1);
    double s4 = cfg.cpt_j4_forehand_sign *
                (rec.positions[t][kForearmRollJoint] - mid4);
    if (s1 > 0.0 && s4 > 0.0) ++forehand;
    if (s1 < 0.0 && s4 < 0.0) ++backhand;
  }
  double tf = double(forehand) / n;
  double tb = double(backhand) / n;
  double w = CenterWeight(landing_x, cfg);
  return landing_x >= 0.0 ? w * (tf - tb) : w * (tb - tf);
}

double DtrReward(const EpisodeRecord& rec) {
  if (!rec.hit) return 0.0;
  return std::max(1.0 - rec.min_opponent_distance, -2.0);
}

RewardBreakdown TotalReward(const EpisodeRecord& rec, const RewardConfig& cfg) {
  return Combine(rec, cfg, ComputeStylePenalties(rec, cfg));
}

RewardAccumulator::RewardAccumulator(const RewardConfig& cfg, double dt)
    : cfg_(cfg), dt_(dt) {}

void RewardAccumulator::Begin(const JointVector& q0, const Vec3& paddle0) {
  (void)paddle0;
  steps_ = 0;
  q_prev_ = q0;
  v_prev_.setZero();
  a_prev_.setZero();
  sums_bbr_ = sums_ph_ = sums_ja_ = sums_v_ = sums_a_ = sums_j_ = 0.0;
}

void RewardAccumulator::AddStep(const JointVector& q, const Vec3& paddle) {
  ++steps_;
  sums_bbr_ += BbrExcess(q, cfg_);
  sums_ja_ += JaExcess(q, cfg_);
  sums_ph_ += PhExcess(paddle, cfg_);
  JointVector v = (q - q_prev_) / dt_;
  sums_v_ += LimitExcess(v, cfg_.velocity.limit);
  if (steps_ >= 2) {
    JointVector a = (v - v_prev_) / dt_;
    sums_a_ += LimitExcess(a, cfg_.acceleration.limit);
    if (steps_ >= 3) {
      JointVector j = (a - a_prev_) / dt_;
      sums_j_ += LimitExcess(j, cfg_.jerk.limit);
    }
    a_prev_ = a;
  }
  v_prev_ = v;
  q_prev_ = q;
}

RewardBreakdown RewardAccumulator::Finish(const EpisodeRecord& rec) const {
  StyleSums s;
  s.bbr = sums_bbr_;
  s.ph = sums_ph_;
  s.ja = sums_ja_;
  s.v = sums_v_;
  s.a = sums_a_;
  s.j = sums_j_;
  return Combine(rec, cfg_, Weighted(s, rec.collision, cfg_));
}

}  // namespace ttes
