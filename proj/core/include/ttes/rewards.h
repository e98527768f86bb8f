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

#ifndef TTES_REWARDS_H_
#define TTES_REWARDS_H_

#include <string>
#include <vector>

#include "ttes/throw.h"
#include "ttes/types.h"

namespace ttes {

// joint indices of the arm's base rotation (J1) and forearm roll (J4)
inline constexpr int kBaseJoint = 2;
inline constexpr int kForearmRollJoint = 5;

enum class PoseMode { kNone, kCps, kDcps, kCpt };
enum class SuccessShaping { kNone, kDtr, kLandingBonus };

const char* PoseModeName(PoseMode mode);
const char* SuccessShapingName(SuccessShaping mode);

// per-step penalty on the positive excess of |x| over `limit`, summed over
// joints and steps and scaled by -weight
struct ExcessPenalty {
  bool enabled = false;
  double weight = 0.1;
  double limit = 1.0;
};

struct RewardConfig {
  // ST
  bool sparse = true;
  double hit_weight = 1.0;
  double success_weight = 1.0;
  // IC: once per episode with any self or table collision
  bool ic = false;
  double ic_weight = 1.0;
  // BBR: per step, excess of |J1| beyond bbr_limit (base turned backwards)
  bool bbr = false;
  double bbr_weight = 0.5;
  double bbr_limit = 1.25 * M_PI / 2.0;
  // PH: per step, paddle center below the clearance while over the table
  bool ph = false;
  double ph_weight = 1.0;
  double ph_clearance = 0.05;
  // JA: per step and joint, intrusion into a margin (fraction of the range)
  // at either limit
  bool ja = false;
  double ja_weight = 1.0;
  double ja_margin = 0.05;
  // limits: 3x the avg-max velocity / acceleration / jerk of the
  // random-policy fixture on the forehand distribution
  ExcessPenalty velocity{false, 0.1, 7.68};
  ExcessPenalty acceleration{false, 0.1, 551.0};
  ExcessPenalty jerk{false, 0.1, 54500.0};

  PoseMode pose = PoseMode::kNone;
  double pose_weight = 1.0;
  SuccessShaping success_shaping = SuccessShaping::kNone;
  double dtr_weight = 1.0;
  double landing_bonus = 1.0;

  JointVector forehand_reference = JointVector::Zero();
  JointVector backhand_reference = JointVector::Zero();
  // w(x) = clamp(|x| / center_width, 0, 1) scales DCPS and CPT
  double center_width = 0.2;
  // CPT: -1 if the lower half of the joint's range is the forehand half
  int cpt_j1_forehand_sign = -1;
  int cpt_j4_forehand_sign = -1;

  JointVector joint_lower = JointVector::Constant(-1.0);
  JointVector joint_upper = JointVector::Constant(1.0);
  double table_half_width = 0.7625;
  double table_half_length = 1.37;
  double table_height = 0.0;

  // ST only, references and limits from the default robot
  static RewardConfig Sparse();
  // ST, IC, BBR, PH, JA, V, A, J
  static RewardConfig Canonical();

  // throws ConfigError on non-finite weights or invalid limits
  void Validate() const;
};

// Everything the reward terms read from one episode, sampled at the control
// rate. positions[0] is the reset pose and positions[t] the pose after step
// t; velocities[t - 1] is the realized (q[t] - q[t-1]) / dt.
struct EpisodeRecord {
  double dt = 0.01;
  std::vector<JointVector> positions;
  std::vector<JointVector> velocities;
  std::vector<Vec3> paddle_centers;  // same indexing as positions
  bool hit = false;
  bool success = false;
  bool collision = false;
  int contact_step = -1;  // step during which the paddle touched the ball
  double landing_x = 0.0;  // landing x of the incoming throw
  double min_opponent_distance = 0.0;  // after contact; unused without a hit
  std::vector<Vec3> ball_after_contact;

  int steps() const { return static_cast<int>(velocities.size()); }
  // (v[t] - v[t-1]) / dt and (a[t] - a[t-1]) / dt on the same grid
  std::vector<JointVector> Accelerations() const;
  std::vector<JointVector> Jerks() const;
  // number of leading samples of `positions` that precede the contact
  int PreContactSamples() const;
};

struct StylePenalties {
  double ic = 0.0;
  double bbr = 0.0;
  double ph = 0.0;
  double ja = 0.0;
  double v = 0.0;
  double a = 0.0;
  double j = 0.0;
  double sum() const { return ic + bbr + ph + ja + v + a + j; }
};

struct RewardBreakdown {
  double hit = 0.0;
  double success = 0.0;
  StylePenalties style;
  double pose = 0.0;
  double dtr = 0.0;
  double total = 0.0;

  // named (term, value) pairs in a fixed order, for reports
  std::vector<std::pair<std::string, double>> Terms() const;
};

// hit + success, each worth 1
double SparseReward(const EpisodeRecord& rec);

StylePenalties ComputeStylePenalties(const EpisodeRecord& rec,
                                     const RewardConfig& cfg);

double CenterWeight(double landing_x, const RewardConfig& cfg);

// 1 - min pre-contact joint-space distance to the side's reference pose
double PoseRewardCps(const EpisodeRecord& rec, const RewardConfig& cfg,
                     Side side);
double PoseRewardDcps(const EpisodeRecord& rec, const RewardConfig& cfg,
                      double landing_x);
double PoseRewardCpt(const EpisodeRecord& rec, const RewardConfig& cfg,
                     double landing_x);

// max(1 - d, -2) on the minimum return-ball distance to the opponent half;
// 0 without a hit
double DtrReward(const EpisodeRecord& rec);

RewardBreakdown TotalReward(const EpisodeRecord& rec, const RewardConfig& cfg);

// Incremental version of TotalReward: per-step penalties are accumulated as
// the episode runs, episode-level terms are added in Finish. Produces the
// same breakdown as TotalReward on the finished record.
class RewardAccumulator {
 public:
  RewardAccumulator(const RewardConfig& cfg, double dt);

  void Begin(const JointVector& q0, const Vec3& paddle0);
  void AddStep(const JointVector& q, const Vec3& paddle);
  // `rec` supplies the episode-level fields (events, landing x, contact,
  // pre-contact poses)
  RewardBreakdown Finish(const EpisodeRecord& rec) const;

 private:
  const RewardConfig& cfg_;
  double dt_;
  int steps_ = 0;
  JointVector q_prev_ = JointVector::Zero();
  JointVector v_prev_ = JointVector::Zero();
  JointVector a_prev_ = JointVector::Zero();
  double sums_bbr_ = 0.0, sums_ph_ = 0.0, sums_ja_ = 0.0;
  double sums_v_ = 0.0, sums_a_ = 0.0, sums_j_ = 0.0;
};

}  // namespace ttes

#endif  // TTES_REWARDS_H_
