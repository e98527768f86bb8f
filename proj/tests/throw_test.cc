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

#include "ttes/throw.h"

#include <cmath>

#include <gtest/gtest.h>

#include "test_util.h"
#include "ttes/errors.h"

namespace ttes {
namespace {

// first table bounce of a throw re-simulated with StepBall at 1 ms
std::optional<Vec3> ResimulatedBounce(const ThrowSpec& spec,
                                      const PhysicsParams& params) {
  BallState ball{spec.start, spec.velocity, true};
  for (int i = 0; i < 5000 && ball.live; ++i) {
    BallEvents ev;
    ball = StepBall(ball, 1e-3, params, &ev);
    if (ev.table_bounce) return ev.bounce_point;
  }
  return std::nullopt;
}

TEST(ThrowTest, StraightDropHasNoHorizontalVelocity) {
  Vec3 start(0.0, -2.0, 0.5);
  Vec3 v = SolveThrow(start, 0.0, -2.0, 0.0, 9.81);
  EXPECT_DOUBLE_EQ(v.x(), 0.0);
  EXPECT_DOUBLE_EQ(v.y(), 0.0);
  EXPECT_DOUBLE_EQ(v.z(), 0.0);
}

TEST(ThrowTest, SolvedThrowLandsOnTarget) {
  PhysicsParams params;
  ThrowSpec spec;
  spec.start = Vec3(0.3, -2.4, 0.4);
  spec.velocity = SolveThrow(spec.start, 0.2, 1.0, 1.5, params.gravity);
  EXPECT_DOUBLE_EQ(spec.velocity.z(), 1.5);
  auto bounce = ResimulatedBounce(spec, params);
  ASSERT_TRUE(bounce);
  EXPECT_NEAR(bounce->x(), 0.2, 0.01);
  EXPECT_NEAR(bounce->y(), 1.0, 0.01);

  auto oracle = testing::OracleFlight(spec.start, spec.velocity,
                                      params.gravity, 0.0);
  ASSERT_TRUE(oracle);
  EXPECT_NEAR(oracle->point.x(), 0.2, 1e-5);
  EXPECT_NEAR(oracle->point.y(), 1.0, 1e-5);
}

TEST(ThrowTest, UnreachablePlaneThrows) {
  // below the plane and moving down never crosses it descending
  EXPECT_THROW(SolveThrow(Vec3(0.0, 0.0, -1.0), 0.0, 0.0, -1.0, 9.81),
               UnsolvableThrowError);
}

TEST(ThrowTest, SideOfLandingX) {
  EXPECT_EQ(SideOf(0.3), Side::kForehand);
  EXPECT_EQ(SideOf(-0.3), Side::kBackhand);
  EXPECT_EQ(SideOf(0.0), Side::kCenter);
}

class SampleThrowTest : public ::testing::TestWithParam<int> {
 protected:
  BallDistribution Dist() const {
    switch (GetParam()) {
      case 0:
        return BallDistribution::Forehand();
      case 1:
        return BallDistribution::FullTable();
      default:
        return BallDistribution::BallRange(0.5, 0.7);
    }
  }
};

TEST_P(SampleThrowTest, AcceptedThrowsRespectBandsAndLand) {
  PhysicsParams params;
  BallDistribution dist = Dist();
  Rng rng(17 + GetParam());
  for (int i = 0; i < 300; ++i) {
    ThrowSpec spec = SampleThrow(dist, rng, params);
    EXPECT_GE(spec.velocity.y(), kThrowVyMin);
    EXPECT_LE(spec.velocity.y(), kThrowVyMax);
    EXPECT_TRUE(dist.x0.Contains(spec.start.x()));
    EXPECT_TRUE(dist.y0.Contains(spec.start.y()));
    EXPECT_TRUE(dist.z0.Contains(spec.start.z()));
    EXPECT_TRUE(dist.vz.Contains(spec.velocity.z()));
    EXPECT_TRUE(dist.y1.Contains(spec.target_y));
    if (dist.kind == DistributionKind::kBallRange) {
      EXPECT_GE(std::abs(spec.target_x), dist.range_lo);
      EXPECT_LE(std::abs(spec.target_x), dist.range_hi);
    } else {
      EXPECT_TRUE(dist.x1.Contains(spec.target_x));
    }
    EXPECT_EQ(spec.side, SideOf(spec.target_x));
    auto bounce = ResimulatedBounce(spec, params);
    ASSERT_TRUE(bounce) << "throw " << i << " never bounced";
    EXPECT_NEAR(bounce->x(), spec.target_x, 0.01);
    EXPECT_NEAR(bounce->y(), spec.target_y, 0.01);
  }
}

TEST_P(SampleThrowTest, SameSeedSameSequence) {
  PhysicsParams params;
  BallDistribution dist = Dist();
  Rng a(99), b(99);
  for (int i = 0; i < 50; ++i) {
    ThrowSpec x = SampleThrow(dist, a, params);
    ThrowSpec y = SampleThrow(dist, b, params);
    EXPECT_EQ(x.start, y.start);
    EXPECT_EQ(x.velocity, y.velocity);
    EXPECT_EQ(x.target_x, y.target_x);
    EXPECT_EQ(x.target_y, y.target_y);
  }
}

INSTANTIATE_TEST_SUITE_P(Distributions, SampleThrowTest,
                         ::testing::Values(0, 1, 2));

TEST(ThrowTest, BallRangeCoversBothSides) {
  PhysicsParams params;
  BallDistribution dist = BallDistribution::BallRange(0.5, 0.7);
  Rng rng(3);
  int left = 0;
  const int n = 400;
  for (int i = 0; i < n; ++i) {
    if (SampleThrow(dist, rng, params).target_x < 0.0) ++left;
  }
  // binomial(400, 0.5): 5 standard deviations is 50
  EXPECT_NEAR(left, n / 2, 50);
}

TEST(ThrowTest, InvalidDistributionsRejected) {
  BallDistribution d = BallDistribution::Forehand();
  d.y0 = {2.0, 1.0};
  EXPECT_THROW(d.Validate(), ConfigError);
  EXPECT_THROW(BallDistribution::BallRange(0.7, 0.5).Validate(), ConfigError);
  EXPECT_THROW(BallDistribution::BallRange(-0.1, 0.5).Validate(), ConfigError);
}

TEST(ThrowTest, ImpossibleBandExhaustsDraws) {
  PhysicsParams params;
  BallDistribution d = BallDistribution::Forehand();
  // launched from the net line toward the net line: |vy| far below the band
  d.y0 = {0.1, 0.1};
  d.y1 = {0.0, 0.0};
  Rng rng(1);
  EXPECT_THROW(SampleThrow(d, rng, params, 100), ConfigError);
}

}  // namespace
}  // namespace ttes
