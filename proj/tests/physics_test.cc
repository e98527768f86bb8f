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

#include "ttes/physics.h"

#include <cmath>

#include <gtest/gtest.h>

#include "test_util.h"
#include "ttes/throw.h"

namespace ttes {
namespace {

using ::ttes::testing::OracleFlight;

TEST(PhysicsTest, FreeFallMatchesClosedForm) {
  PhysicsParams params;
  BallState ball;
  ball.position = Vec3(0.0, 0.5, 1.0);
  const int n = 30;
  const double dt = 0.01;
  for (int i = 0; i < n; ++i) ball = StepBall(ball, dt, params);
  double t = n * dt;
  EXPECT_TRUE(ball.live);
  EXPECT_NEAR(ball.position.z(), 1.0 - 0.5 * params.gravity * t * t, 1e-9);
  EXPECT_NEAR(ball.velocity.z(), -params.gravity * t, 1e-9);
  EXPECT_DOUBLE_EQ(ball.position.x(), 0.0);
  EXPECT_DOUBLE_EQ(ball.position.y(), 0.5);
}

TEST(PhysicsTest, TableBounceAppliesRestitutionToVerticalOnly) {
  PhysicsParams params;
  BallState ball;
  ball.position = Vec3(0.1, 0.5, 0.05);
  ball.velocity = Vec3(0.3, 1.0, -2.0);
  const double g = params.gravity;
  // 0.05 - 2 t - g t^2 / 2 = 0
  double t_hit = (-2.0 + std::sqrt(4.0 + 2.0 * g * 0.05)) / g;
  double vz_hit = -2.0 - g * t_hit;
  const double after = 1e-3;

  BallEvents events;
  BallState out = StepBall(ball, t_hit + after, params, &events);
  ASSERT_TRUE(events.table_bounce);
  EXPECT_TRUE(out.live);
  EXPECT_NEAR(events.bounce_point.x(), 0.1 + 0.3 * t_hit, 1e-12);
  EXPECT_NEAR(events.bounce_point.y(), 0.5 + 1.0 * t_hit, 1e-12);
  EXPECT_DOUBLE_EQ(events.bounce_point.z(), 0.0);
  EXPECT_NEAR(out.velocity.z(), -params.table_restitution * vz_hit - g * after,
              1e-9);
  EXPECT_DOUBLE_EQ(out.velocity.x(), 0.3);
  EXPECT_DOUBLE_EQ(out.velocity.y(), 1.0);
}

TEST(PhysicsTest, BounceApexScalesWithRestitutionSquared) {
  PhysicsParams params;
  BallState ball;
  ball.position = Vec3(0.0, 0.6, 0.5);
  double apex = 0.0;
  bool bounced = false;
  for (int i = 0; i < 1000 && ball.live; ++i) {
    BallEvents ev;
    ball = StepBall(ball, 1e-3, params, &ev);
    if (ev.table_bounce) {
      if (bounced) break;
      bounced = true;
    }
    if (bounced) apex = std::max(apex, ball.position.z());
  }
  ASSERT_TRUE(bounced);
  double e = params.table_restitution;
  EXPECT_NEAR(apex, e * e * 0.5, 1e-4);
}

TEST(PhysicsTest, OutsideTableFallsToFloorWithoutBounce) {
  PhysicsParams params;
  BallState ball;
  // beyond the side edge (half width 0.7625)
  ball.position = Vec3(1.0, 0.5, 0.1);
  bool bounced = false;
  bool floor = false;
  for (int i = 0; i < 100 && ball.live; ++i) {
    BallEvents ev;
    ball = StepBall(ball, 0.01, params, &ev);
    bounced |= ev.table_bounce;
    floor |= ev.floor;
  }
  EXPECT_FALSE(bounced);
  EXPECT_TRUE(floor);
  EXPECT_FALSE(ball.live);
  EXPECT_DOUBLE_EQ(ball.position.z(), params.floor_z);

  // just past the end line behaves the same
  ball = BallState{};
  ball.position = Vec3(0.0, params.table.half_length() + 0.01, 0.1);
  bounced = false;
  for (int i = 0; i < 100 && ball.live; ++i) {
    BallEvents ev;
    ball = StepBall(ball, 0.01, params, &ev);
    bounced |= ev.table_bounce;
  }
  EXPECT_FALSE(bounced);
  EXPECT_FALSE(ball.live);
}

TEST(PhysicsTest, NetStopsLowBall) {
  PhysicsParams params;
  BallState ball;
  ball.position = Vec3(0.0, 0.5, 0.08);
  ball.velocity = Vec3(0.0, -3.0, 0.5);
  BallEvents events;
  for (int i = 0; i < 50 && ball.live; ++i) {
    ball = StepBall(ball, 0.01, params, &events);
  }
  EXPECT_TRUE(events.net);
  EXPECT_FALSE(events.table_bounce);
  EXPECT_FALSE(ball.live);
  EXPECT_DOUBLE_EQ(ball.position.y(), 0.0);
}

TEST(PhysicsTest, HighBallClearsNet) {
  PhysicsParams params;
  BallState ball;
  ball.position = Vec3(0.0, 0.5, 0.4);
  ball.velocity = Vec3(0.0, -3.0, 0.5);
  BallEvents events;
  for (int i = 0; i < 20 && ball.live; ++i) {
    ball = StepBall(ball, 0.01, params, &events);
  }
  EXPECT_FALSE(events.net);
  EXPECT_LT(ball.position.y(), 0.0);
}

TEST(PhysicsTest, SlowBounceEndsFlight) {
  PhysicsParams params;
  BallState ball;
  ball.position = Vec3(0.0, 0.5, 1e-6);
  ball.velocity = Vec3(0.0, 0.0, -0.01);
  ball = StepBall(ball, 0.01, params);
  EXPECT_FALSE(ball.live);
}

TEST(PhysicsTest, DeadBallIsFrozen) {
  PhysicsParams params;
  BallState ball;
  ball.position = Vec3(0.1, 0.2, 0.3);
  ball.velocity = Vec3(1.0, 1.0, 1.0);
  ball.live = false;
  BallState out = StepBall(ball, 0.01, params);
  EXPECT_EQ(out.position, ball.position);
  EXPECT_EQ(out.velocity, ball.velocity);
}

TEST(PhysicsTest, TableGeometryExcludesEdges) {
  TableGeometry t;
  EXPECT_FALSE(t.Inside(t.half_width(), 0.0));
  EXPECT_FALSE(t.Inside(0.0, -t.half_length()));
  EXPECT_TRUE(t.Inside(0.76, 1.36));
  EXPECT_TRUE(t.InsideOpponentHalf(0.0, 0.1));
  EXPECT_FALSE(t.InsideOpponentHalf(0.0, -0.1));
  EXPECT_NEAR(t.DistanceToOpponentHalf(Vec3(0.0, 0.5, 0.4)), 0.4, 1e-15);
  EXPECT_NEAR(t.DistanceToOpponentHalf(Vec3(0.0, -0.3, 0.0)), 0.3, 1e-15);
  EXPECT_NEAR(t.DistanceToOpponentHalf(Vec3(1.0, 0.5, 0.0)),
              1.0 - t.half_width(), 1e-15);
  EXPECT_NEAR(t.DistanceToOpponentHalf(Vec3(0.0, -0.3, 0.4)), 0.5, 1e-15);
}

TEST(PhysicsTest, DescendingCrossingTime) {
  auto t = DescendingCrossingTime(0.5, 0.0, 9.81, 0.0);
  ASSERT_TRUE(t);
  EXPECT_NEAR(*t, std::sqrt(2.0 * 0.5 / 9.81), 1e-15);
  EXPECT_FALSE(DescendingCrossingTime(-0.1, 1.0, 9.81, 0.0));
  // rising ball: the descending root is after the apex
  t = DescendingCrossingTime(0.0, 2.0, 9.81, 0.0);
  ASSERT_TRUE(t);
  EXPECT_NEAR(*t, 4.0 / 9.81, 1e-15);
}

TEST(PhysicsTest, PredictLandingInvertsThrowSolver) {
  PhysicsParams params;
  Vec3 start(0.1, 1.5, 0.3);
  Vec3 v = SolveThrow(start, 0.35, -0.7, 1.0, params.gravity);
  BallState ball{start, v, true};
  auto x = PredictLandingX(ball, params);
  ASSERT_TRUE(x);
  EXPECT_NEAR(*x, 0.35, 1e-6);
}

TEST(PhysicsTest, PredictLandingZeroLateralVelocity) {
  PhysicsParams params;
  BallState ball{Vec3(-0.27, 0.8, 0.4), Vec3(0.0, -5.0, 0.3), true};
  auto x = PredictLandingX(ball, params);
  ASSERT_TRUE(x);
  EXPECT_DOUBLE_EQ(*x, -0.27);
}

TEST(PhysicsTest, PredictLandingAfterBounceMatchesIntegration) {
  PhysicsParams params;
  BallState ball{Vec3(0.2, -0.5, 1e-4), Vec3(0.4, -4.0, 2.5), true};
  auto x = PredictLandingX(ball, params);
  auto oracle = OracleFlight(ball.position, ball.velocity, params.gravity,
                             params.table.height);
  ASSERT_TRUE(x);
  ASSERT_TRUE(oracle);
  EXPECT_NEAR(*x, oracle->point.x(), 1e-3);
}

TEST(PhysicsTest, PredictLandingUndefinedCases) {
  PhysicsParams params;
  BallState dead{Vec3(0.0, 0.0, 0.3), Vec3::Zero(), false};
  EXPECT_FALSE(PredictLandingX(dead, params));
  BallState below{Vec3(0.0, 0.0, -0.3), Vec3(0.0, 0.0, -1.0), true};
  EXPECT_FALSE(PredictLandingX(below, params));
}

}  // namespace
}  // namespace ttes
