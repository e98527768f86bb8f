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

#include <algorithm>
#include <cmath>

namespace ttes {

bool TableGeometry::Inside(double x, double y) const {
  return std::abs(x) < half_width() && std::abs(y) < half_length();
}

bool TableGeometry::InsideOpponentHalf(double x, double y) const {
  return Inside(x, y) && y > 0.0;
}

double TableGeometry::DistanceToOpponentHalf(const Vec3& p) const {
  double cx = std::clamp(p.x(), -half_width(), half_width());
  double cy = std::clamp(p.y(), 0.0, half_length());
  double dx = p.x() - cx;
  double dy = p.y() - cy;
  double dz = p.z() - height;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

std::optional<double> DescendingCrossingTime(double z, double vz,
                                             double gravity, double plane_z) {
  double h = z - plane_z;
  if (h < 0.0) return std::nullopt;
  double disc = vz * vz + 2.0 * gravity * h;
  if (disc < 0.0) return std::nullopt;
  double t = (vz + std::sqrt(disc)) / gravity;
  if (t < 0.0) return std::nullopt;
  return t;
}

namespace {

void Advance(BallState& b, double t, double g) {
  b.position += b.velocity * t;
  b.position.z() -= 0.5 * g * t * t;
  b.velocity.z() -= g * t;
}

bool InBounds(const Vec3& p, const PhysicsParams& params) {
  return (p.array() >= params.bounds_lo.array()).all() &&
         (p.array() <= params.bounds_hi.array()).all();
}

}  // namespace

BallState StepBall(const BallState& ball, double dt,
                   const PhysicsParams& params, BallEvents* events) {
  BallState b = ball;
  if (!b.live) return b;
  const double g = params.gravity;
  const TableGeometry& table = params.table;
  double remaining = dt;

  // a step can contain a net crossing and a bounce; a handful of events
  // at most, but bound the loop anyway
  for (int guard = 0; guard < 8 && remaining > 0.0; ++guard) {
    double t_table = remaining + 1.0;
    if (b.position.z() >= table.height) {
      auto t = DescendingCrossingTime(b.position.z(), b.velocity.z(), g,
                                      table.height);
      // a ball resting on the plane moving up has t > 0; t == 0 with vz < 0
      // means it is exactly on the plane heading down
      if (t && *t <= remaining && (*t > 1e-12 || b.velocity.z() < 0.0)) {
        t_table = *t;
      }
    }

    double t_net = remaining + 1.0;
    if (b.velocity.y() != 0.0) {
      double t = -b.position.y() / b.velocity.y();
      if (t > 0.0 && t <= remaining) t_net = t;
    }

    if (t_net <= remaining && t_net < t_table) {
      BallState at = b;
      Advance(at, t_net, g);
      double z = at.position.z() - table.height;
      bool in_span =
          std::abs(at.position.x()) <= table.half_width() + table.net_overhang;
      if (in_span && z >= 0.0 && z <= table.net_height) {
        at.position.y() = 0.0;
        at.live = false;
        if (events) events->net = true;
        return at;
      }
    }

    if (t_table <= remaining) {
      BallState at = b;
      Advance(at, t_table, g);
      at.position.z() = table.height;
      remaining -= t_table;
      if (table.Inside(at.position.x(), at.position.y())) {
        if (events && !events->table_bounce) {
          events->table_bounce = true;
          events->bounce_point = at.position;
        }
        at.velocity.z() = -params.table_restitution * at.velocity.z();
        b = at;
        if (b.velocity.z() < params.min_bounce_speed) {
          b.live = false;
          return b;
        }
        continue;
      }
      // crossed outside the table: keep falling past the plane
      b = at;
      b.position.z() = std::nextafter(table.height, -1.0);
      continue;
    }

    Advance(b, remaining, g);
    remaining = 0.0;
  }

  if (b.position.z() <= params.floor_z) {
    b.position.z() = params.floor_z;
    b.live = false;
    if (events) events->floor = true;
  } else if (!InBounds(b.position, params)) {
    b.live = false;
    if (events) events->out_of_bounds = true;
  }
  return b;
}

std::optional<double> PredictLandingX(const BallState& ball,
                                      const PhysicsParams& params) {
  if (!ball.live) return std::nullopt;
  auto t = DescendingCrossingTime(ball.position.z(), ball.velocity.z(),
                                  params.gravity, params.table.height);
  if (!t) return std::nullopt;
  return ball.position.x() + ball.velocity.x() * *t;
}

}  // namespace ttes
