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

#include "ttes/action_filter.h"

#include <cmath>
#include <complex>

#include "ttes/errors.h"

namespace ttes {

ActionFilter::ActionFilter(double cutoff_hz, double sample_hz)
    : cutoff_hz_(cutoff_hz), sample_hz_(sample_hz) {
  if (!(sample_hz > 0.0)) throw ConfigError("filter sample rate must be > 0");
  if (!(cutoff_hz > 0.0 && cutoff_hz < 0.5 * sample_hz)) {
    throw ConfigError("filter cutoff must lie in (0, Nyquist)");
  }
  const double k = std::tan(M_PI * cutoff_hz / sample_hz);
  const double k2 = k * k;
  const double norm = 1.0 / (1.0 + M_SQRT2 * k + k2);
  b0_ = k2 * norm;
  b1_ = 2.0 * b0_;
  b2_ = b0_;
  a1_ = 2.0 * (k2 - 1.0) * norm;
  a2_ = (1.0 - M_SQRT2 * k + k2) * norm;
}

JointVector ActionFilter::Apply(const JointVector& x) {
  JointVector y = b0_ * x + z1_;
  z1_ = b1_ * x - a1_ * y + z2_;
  z2_ = b2_ * x - a2_ * y;
  return y;
}

void ActionFilter::Reset() {
  z1_.setZero();
  z2_.setZero();
}

double ActionFilter::Gain(double f_hz) const {
  const std::complex<double> z =
      std::polar(1.0, -2.0 * M_PI * f_hz / sample_hz_);
  const std::complex<double> num = b0_ + b1_ * z + b2_ * z * z;
  const std::complex<double> den = 1.0 + a1_ * z + a2_ * z * z;
  return std::abs(num / den);
}

}  // namespace ttes
