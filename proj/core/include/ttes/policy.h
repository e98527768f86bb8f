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

#ifndef TTES_POLICY_H_
#define TTES_POLICY_H_

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ttes/env.h"
#include "ttes/running_stats.h"
#include "ttes/types.h"

namespace ttes {

enum class ArchKind { kGatedCnn, kMlp };

const char* ArchKindName(ArchKind kind);

struct ConvLayerSpec {
  int channels = 8;
  int kernel = 2;
  int dilation = 1;
  int stride = 1;
  bool gated = true;

  bool operator==(const ConvLayerSpec&) const = default;
};

// Controller architecture. The gated CNN convolves over the time axis of a
// (time_steps, features) input with the features as channels; the MLP
// flattens the same input row-major.
struct ArchSpec {
  ArchKind kind = ArchKind::kGatedCnn;
  int time_steps = kHistoryLength;
  int features = kObsFeatures;
  int outputs = kNumJoints;
  std::vector<ConvLayerSpec> conv = {
      {8, 2, 1, 1, true}, {12, 2, 2, 1, true}, {8, 2, 4, 1, false}};
  std::vector<int> mlp_hidden = {50, 10};

  static ArchSpec GatedCnn();
  static ArchSpec Mlp();

  // throws ConfigError; for the CNN the receptive field must consume the
  // whole history and the last layer must emit `outputs` channels
  void Validate() const;
  int ParameterCount() const;
  // (length, channels) of the input and of every layer output
  std::vector<std::pair<int, int>> LayerShapes() const;

  bool operator==(const ArchSpec&) const = default;
};

// where one layer's weights and biases live inside the flat parameter vector
struct ParamSlice {
  std::size_t weight_offset = 0;
  std::size_t weight_size = 0;
  std::size_t bias_offset = 0;
  std::size_t bias_size = 0;
};

// Flat layout, layer by layer: weights then biases.
//   conv weight index: (tap * in_channels + in) * out_width + out, where
//   out_width = 2 * channels for gated layers (first half o1, second o2)
//   and tap 0 is the oldest row of the window.
//   dense weight index: in * out_size + out.
std::vector<ParamSlice> ParameterLayout(const ArchSpec& spec);

// per-layer view of a flat parameter vector
struct LayerParams {
  std::vector<Eigen::MatrixXd> taps;  // conv: one (in x out_width) per tap;
                                      // dense: a single (in x out) matrix
  Eigen::VectorXd bias;
};

std::vector<LayerParams> Unflatten(const ArchSpec& spec,
                                   std::span<const double> theta);
std::vector<double> Flatten(const ArchSpec& spec,
                            const std::vector<LayerParams>& layers);

// 1D convolution over time (rows). Output row j covers input rows
// j, j + d, ..., j + d (k - 1); the row count shrinks by d (k - 1).
// Gated layers return tanh(o1) * sigmoid(o2), ungated tanh(o1).
Eigen::MatrixXd GatedConvLayer(const Eigen::MatrixXd& input,
                               const LayerParams& params,
                               const ConvLayerSpec& layer);

// column-wise (obs - mean) / sqrt(var + eps)
Observation NormalizeObservation(const Observation& obs,
                                 const RunningStats& stats);

// Raw action in (-1, 1) for the CNN (final tanh), unbounded for the MLP's
// linear head. Throws ShapeError on a parameter-count mismatch.
JointVector PolicyForward(const Observation& obs, std::span<const double> theta,
                          const ArchSpec& spec, const RunningStats& stats);

// gated CNN path; PolicyForward dispatches here for kGatedCnn
JointVector CnnForward(const Observation& obs, std::span<const double> theta,
                       const ArchSpec& spec, const RunningStats& stats);

JointVector MlpForward(const Observation& obs, std::span<const double> theta,
                       const ArchSpec& spec, const RunningStats& stats);

}  // namespace ttes

#endif  // TTES_POLICY_H_
