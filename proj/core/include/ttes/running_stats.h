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

#ifndef TTES_RUNNING_STATS_H_
#define TTES_RUNNING_STATS_H_

#include <cstdint>

#include <Eigen/Core>

#include "ttes/types.h"

namespace ttes {

// Streaming per-feature mean / variance (Welford, with Chan's pairwise
// merge). With fewer than two samples the variance reads as 1 so a fresh
// instance normalizes with mean 0, std 1.
class RunningStats {
 public:
  using Vector = Eigen::Matrix<double, kObsFeatures, 1>;

  static constexpr double kEpsilon = 1e-8;

  RunningStats();

  void Push(const Vector& x);
  void Merge(const RunningStats& other);

  std::uint64_t count() const { return count_; }
  const Vector& mean() const { return mean_; }
  const Vector& m2() const { return m2_; }
  Vector Variance() const;
  // sqrt(variance + kEpsilon)
  Vector Scale() const;

  // a frozen copy rejects Push/Merge; used as the per-iteration snapshot
  RunningStats Snapshot() const;
  bool frozen() const { return frozen_; }

  static RunningStats FromMoments(std::uint64_t count, const Vector& mean,
                                  const Vector& m2);

  bool operator==(const RunningStats& o) const {
    return count_ == o.count_ && mean_ == o.mean_ && m2_ == o.m2_;
  }

 private:
  std::uint64_t count_ = 0;
  Vector mean_;
  Vector m2_;
  bool frozen_ = false;
};

}  // namespace ttes

#endif  // TTES_RUNNING_STATS_H_
