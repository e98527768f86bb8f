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

#ifndef TTES_PHYSICS_H_
#define TTES_PHYSICS_H_

#include <optional>

#include "ttes/types.h"

namespace ttes {

// Table-tennis table with its center at the origin. x runs across the width,
// y along the length; the robot plays from the y < 0 half. The table plane
// z = height is the plane the ball *center* touches at a bounce, so the ball
// radius is folded into the table height.
struct TableGeometry {
  double length = 2.74;
  double width = 1.525;
  double height = 0.0;
  double net_height = 0.1525;
  double net_overhang = 0.1525;  // net posts extend past the table sides

  double half_length() const { return 0.5 * length; }
  double half_width() const { return 0.5 * width; }

  // strictly inside the table top (edges excluded)
  bool Inside(double x, double y) const;
  bool InsideOpponentHalf(double x, double y) const;

  // distance from a point to the opponent half of the table surface
  double DistanceToOpponentHalf(const Vec3& p) const;
};

struct PhysicsParams {
  double gravity = 9.81;
  double ball_radius = 0.02;
  double paddle_radius = 0.085;
  double table_restitution = 0.87;
  double paddle_restitution = 0.75;
  // extra slack added to the ball radius when testing paddle contact
  double contact_margin = 0.0;
  double floor_z = -0.76;
  // ball is dead once it leaves this box
  Vec3 bounds_lo = Vec3(-3.0, -4.0, -0.76);
  Vec3 bounds_hi = Vec3(3.0, 4.0, 4.0);
  // bounces slower than this end the ball's flight (no rolling model)
  double min_bounce_speed = 0.05;
  TableGeometry table;
};

struct BallState {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  bool live = true;
};

// what happened during one StepBall call
struct BallEvents {
  bool table_bounce = false;
  Vec3 bounce_point = Vec3::Zero();  // first bounce in the step
  bool net = false;
  bool floor = false;
  bool out_of_bounds = false;
};

// Gravity-only flight over dt with table bounces (restitution on the normal
// component), net and floor deaths. Flight segments use the closed-form
// constant-acceleration update.
BallState StepBall(const BallState& ball, double dt,
                   const PhysicsParams& params, BallEvents* events = nullptr);

// x where the ball next crosses the table plane while descending, from the
// closed-form flight solution. Bounces leave vx unchanged, so the answer does
// not depend on whether a bounce happens in between. Empty when the ball is
// dead or below the plane.
std::optional<double> PredictLandingX(const BallState& ball,
                                      const PhysicsParams& params);

// earliest descending crossing time of the plane z = plane_z
std::optional<double> DescendingCrossingTime(double z, double vz,
                                             double gravity, double plane_z);

}  // namespace ttes

#endif  // TTES_PHYSICS_H_
