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

#include "ttes/running_stats.h"

#include "ttes/errors.h"

namespace ttes {

RunningStats::RunningStats() : mean_(Vector::Zero()), m2_(Vector::Zero()) {}

void RunningStats::Push(const Vector& x) {
  if (frozen_) throw ContractViolation("Push on a frozen RunningStats");
  ++count_;
  Vector delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta.cwiseProduct(x - mean_);
}

void RunningStats::Merge(const RunningStats& other) {
  if (frozen_) throw ContractViolation("Merge into a frozen RunningStats");
  if (other.count_ == 0) return;
  if (count_ == 0) {
    count_ = other.count_;
    mean_ = other.mean_;
    m2_ = other.m2_;
    return;
  }
  double na = static_cast<double>(count_);
  double nb = static_cast<double>(other.count_);
  double n = na + nb;
  Vector delta = other.mean_ - mean_;
  mean_ += delta * (nb / n);
  m2_ += other.m2_ + delta.cwiseProduct(delta) * (na * nb / n);
  count_ += other.count_;
}

RunningStats::Vector RunningStats::Variance() const {
  if (count_ < 2) return Vector::Ones();
  return (m2_ / static_cast<double>(count_)).cwiseMax(0.0);
}

RunningStats::Vector RunningStats::Scale() const {
  return (Variance().array() + kEpsilon).sqrt();
}

RunningStats RunningStats::Snapshot() const {
  RunningStats s = *this;
  s.frozen_ = true;
  return s;
}

RunningStats RunningStats::FromMoments(std::uint64_t count, const Vector& mean,
                                       const Vector& m2) {
  RunningStats s;
  s.count_ = count;
  s.mean_ = mean;
  s.m2_ = m2;
  return s;
}

}  // namespace ttes
