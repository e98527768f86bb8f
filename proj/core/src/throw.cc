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
#include <sstream>

#include "ttes/errors.h"

namespace ttes {

const char* SideName(Side side) {
  switch (side) {
    case Side::kForehand:
      return "forehand";
    case Side::kBackhand:
      return "backhand";
    case Side::kCenter:
      return "center";
  }
  return "?";
}

Side SideOf(double landing_x) {
  if (landing_x > 0.0) return Side::kForehand;
  if (landing_x < 0.0) return Side::kBackhand;
  return Side::kCenter;
}

const char* DistributionKindName(DistributionKind kind) {
  switch (kind) {
    case DistributionKind::kForehand:
      return "forehand";
    case DistributionKind::kFullTable:
      return "full_table";
    case DistributionKind::kBallRange:
      return "ball_range";
  }
  return "?";
}

BallDistribution BallDistribution::Forehand() { return BallDistribution{}; }

BallDistribution BallDistribution::FullTable() {
  BallDistribution d;
  d.kind = DistributionKind::kFullTable;
  d.x1 = {-0.7, 0.7};
  return d;
}

BallDistribution BallDistribution::BallRange(double a, double b) {
  BallDistribution d;
  d.kind = DistributionKind::kBallRange;
  d.range_lo = a;
  d.range_hi = b;
  d.x1 = {-b, b};
  return d;
}

void BallDistribution::Validate() const {
  auto check = [](const Interval& i, const char* name) {
    if (!(i.lo <= i.hi) || !std::isfinite(i.lo) || !std::isfinite(i.hi)) {
      throw ConfigError(std::string("distribution bound ") + name +
                        " must satisfy lo <= hi");
    }
  };
  check(x0, "x0");
  check(y0, "y0");
  check(z0, "z0");
  check(vz, "vz");
  check(y1, "y1");
  if (kind == DistributionKind::kBallRange) {
    if (!(range_lo >= 0.0 && range_lo < range_hi)) {
      throw ConfigError("ball_range(a, b) requires 0 <= a < b");
    }
  } else {
    check(x1, "x1");
  }
}

std::string BallDistribution::Describe() const {
  std::ostringstream os;
  os << DistributionKindName(kind);
  if (kind == DistributionKind::kBallRange) {
    os << "(" << range_lo << "," << range_hi << ")";
  } else {
    os << " x1=[" << x1.lo << "," << x1.hi << "]";
  }
  return os.str();
}

Vec3 SolveThrow(const Vec3& start, double target_x, double target_y, double vz,
                double gravity, double table_height) {
  // z0 + vz t - g t^2 / 2 = table_height
  double h = start.z() - table_height;
  double disc = vz * vz + 2.0 * gravity * h;
  if (disc < 0.0) {
    throw UnsolvableThrowError("throw never reaches the table plane");
  }
  double t = (vz + std::sqrt(disc)) / gravity;
  if (!(t > 0.0)) {
    throw UnsolvableThrowError("no positive flight time to the table plane");
  }
  return Vec3((target_x - start.x()) / t, (target_y - start.y()) / t, vz);
}

namespace {

double Uniform(Rng& rng, const Interval& i) {
  return std::uniform_real_distribution<double>(i.lo, i.hi)(rng);
}

bool ClearsNet(const Vec3& start, const Vec3& v, const PhysicsParams& params) {
  if (start.y() <= 0.0 || v.y() >= 0.0) return true;
  double t = -start.y() / v.y();
  double z = start.z() + v.z() * t - 0.5 * params.gravity * t * t;
  return z - params.table.height > params.table.net_height + params.ball_radius;
}

}  // namespace

ThrowSpec SampleThrow(const BallDistribution& dist, Rng& rng,
                      const PhysicsParams& params, int max_draws) {
  dist.Validate();
  for (int draw = 0; draw < max_draws; ++draw) {
    ThrowSpec spec;
    spec.start = Vec3(Uniform(rng, dist.x0), Uniform(rng, dist.y0),
                      Uniform(rng, dist.z0));
    double vz = Uniform(rng, dist.vz);
    if (dist.kind == DistributionKind::kBallRange) {
      double magnitude = Uniform(rng, {dist.range_lo, dist.range_hi});
      bool left = std::bernoulli_distribution(0.5)(rng);
      spec.target_x = left ? -magnitude : magnitude;
    } else {
      spec.target_x = Uniform(rng, dist.x1);
    }
    spec.target_y = Uniform(rng, dist.y1);
    try {
      spec.velocity = SolveThrow(spec.start, spec.target_x, spec.target_y, vz,
                                 params.gravity, params.table.height);
    } catch (const UnsolvableThrowError&) {
      continue;
    }
    if (spec.velocity.y() < kThrowVyMin || spec.velocity.y() > kThrowVyMax) {
      continue;
    }
    if (!ClearsNet(spec.start, spec.velocity, params)) continue;
    spec.side = SideOf(spec.target_x);
    return spec;
  }
  throw ConfigError("throw distribution " + dist.Describe() +
                    " produced no throw inside the vy band after " +
                    std::to_string(max_draws) + " draws");
}

}  // namespace ttes
