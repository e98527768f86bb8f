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

#ifndef TTES_ACTION_FILTER_H_
#define TTES_ACTION_FILTER_H_

#include "ttes/types.h"

namespace ttes {

// Second-order Butterworth low-pass (bilinear transform with prewarping)
// applied independently to each joint command.
class ActionFilter {
 public:
  // throws ConfigError unless 0 < cutoff_hz < sample_hz / 2
  ActionFilter(double cutoff_hz, double sample_hz = 100.0);

  JointVector Apply(const JointVector& raw);
  void Reset();

  double cutoff_hz() const { return cutoff_hz_; }
  double b0() const { return b0_; }
  double b1() const { return b1_; }
  double b2() const { return b2_; }
  double a1() const { return a1_; }
  double a2() const { return a2_; }

  // |H(e^{jw})| at frequency f (Hz)
  double Gain(double f_hz) const;

 private:
  double cutoff_hz_;
  double sample_hz_;
  double b0_, b1_, b2_, a1_, a2_;
  // transposed direct form II delay line
  JointVector z1_ = JointVector::Zero();
  JointVector z2_ = JointVector::Zero();
};

}  // namespace ttes

#endif  // TTES_ACTION_FILTER_H_
