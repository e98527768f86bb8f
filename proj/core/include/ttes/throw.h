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

#ifndef TTES_THROW_H_
#define TTES_THROW_H_

#include <string>

#include "ttes/physics.h"
#include "ttes/types.h"

namespace ttes {

// accepted band for the solved y velocity of a throw (m/s)
inline constexpr double kThrowVyMin = -8.5;
inline constexpr double kThrowVyMax = -3.5;

enum class Side { kForehand, kBackhand, kCenter };

const char* SideName(Side side);

// x1 > 0 is the forehand side, x1 < 0 backhand, exactly 0 is center
Side SideOf(double landing_x);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  bool Contains(double v) const { return v >= lo && v <= hi; }
};

struct ThrowSpec {
  Vec3 start = Vec3::Zero();
  double target_x = 0.0;
  double target_y = 0.0;
  Vec3 velocity = Vec3::Zero();
  Side side = Side::kCenter;
};

enum class DistributionKind { kForehand, kFullTable, kBallRange };

const char* DistributionKindName(DistributionKind kind);

// Sampling box for throws. For kBallRange the landing x is drawn from
// [-b, -a] U [a, b] with equal probability per side and x1 is ignored.
struct BallDistribution {
  DistributionKind kind = DistributionKind::kForehand;
  Interval x0{-0.2, 0.2};
  Interval y0{1.2, 1.8};
  Interval z0{0.15, 0.45};
  Interval vz{0.5, 2.0};
  Interval x1{-0.2, 0.7};
  Interval y1{-1.1, -0.4};
  double range_lo = 0.0;
  double range_hi = 0.0;

  static BallDistribution Forehand();
  static BallDistribution FullTable();
  static BallDistribution BallRange(double a, double b);

  // throws ConfigError on empty or inverted bounds
  void Validate() const;
  std::string Describe() const;
};

// Initial velocity that carries a ball from start to (x1, y1) on the table
// plane, given the vertical launch speed. Uses the descending (positive)
// flight-time root. Throws UnsolvableThrowError if no such root exists.
Vec3 SolveThrow(const Vec3& start, double target_x, double target_y, double vz,
                double gravity, double table_height = 0.0);

// Rejection-samples a throw whose solved vy lies in [kThrowVyMin,
// kThrowVyMax] and whose flight clears the net. Throws ConfigError after
// max_draws rejected draws.
ThrowSpec SampleThrow(const BallDistribution& dist, Rng& rng,
                      const PhysicsParams& params, int max_draws = 10000);

}  // namespace ttes

#endif  // TTES_THROW_H_
