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

#ifndef TTES_TYPES_H_
#define TTES_TYPES_H_

#include <Eigen/Core>

#include <cstdint>
#include <random>

namespace ttes {

// robot degrees of freedom: two linear axes followed by six revolute joints
inline constexpr int kNumJoints = 8;

// observation history length (rows of the policy input)
inline constexpr int kHistoryLength = 8;

// features per history row: joint positions then ball position
inline constexpr int kObsFeatures = kNumJoints + 3;

using Vec3 = Eigen::Vector3d;
using JointVector = Eigen::Matrix<double, kNumJoints, 1>;

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to derive independent stream seeds from
// (seed, iteration, index) tuples so results do not depend on scheduling.
inline std::uint64_t MixSeed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t a,
                                std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t h = MixSeed(seed);
  h = MixSeed(h ^ a);
  h = MixSeed(h ^ (b + 0x632be59bd9b4e019ULL));
  h = MixSeed(h ^ (c + 0x8cb92ba72f3d8dd7ULL));
  return h;
}

}  // namespace ttes

#endif  // TTES_TYPES_H_
