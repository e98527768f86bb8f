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

#include "ttes/policy.h"

#include <cmath>

#include "ttes/errors.h"

namespace ttes {

namespace {

inline double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

int OutWidth(const ConvLayerSpec& l) { return l.gated ? 2 * l.channels : l.channels; }

void CheckTheta(const ArchSpec& spec, std::span<const double> theta) {
  int expected = spec.ParameterCount();
  if (static_cast<int>(theta.size()) != expected) {
    throw ShapeError("parameter vector has " + std::to_string(theta.size()) +
                     " entries, architecture " + ArchKindName(spec.kind) +
                     " expects " + std::to_string(expected));
  }
}

}  // namespace

const char* ArchKindName(ArchKind kind) {
  return kind == ArchKind::kGatedCnn ? "gated_cnn" : "mlp";
}

ArchSpec ArchSpec::GatedCnn() { return ArchSpec{}; }

ArchSpec ArchSpec::Mlp() {
  ArchSpec s;
  s.kind = ArchKind::kMlp;
  return s;
}

void ArchSpec::Validate() const {
  if (time_steps != kHistoryLength || features != kObsFeatures ||
      outputs != kNumJoints) {
    throw ConfigError("architecture input must be (8, 11) with 8 outputs");
  }
  if (kind == ArchKind::kGatedCnn) {
    if (conv.empty()) throw ConfigError("gated_cnn needs at least one layer");
    int receptive = 1;
    for (const ConvLayerSpec& l : conv) {
      if (l.channels < 1 || l.kernel < 1 || l.dilation < 1) {
        throw ConfigError("conv layer sizes must be positive");
      }
      if (l.stride != 1) throw ConfigError("only stride 1 is supported");
      receptive += l.dilation * (l.kernel - 1);
    }
    if (receptive != time_steps) {
      throw ConfigError("conv receptive field " + std::to_string(receptive) +
                        " must equal the history length " +
                        std::to_string(time_steps));
    }
    if (conv.back().channels != outputs) {
      throw ConfigError("last conv layer must have " +
                        std::to_string(outputs) + " channels");
    }
  } else {
    for (int h : mlp_hidden) {
      if (h < 1) throw ConfigError("mlp hidden sizes must be positive");
    }
  }
}

std::vector<std::pair<int, int>> ArchSpec::LayerShapes() const {
  std::vector<std::pair<int, int>> shapes;
  if (kind == ArchKind::kGatedCnn) {
    int len = time_steps;
    shapes.emplace_back(len, features);
    for (const ConvLayerSpec& l : conv) {
      len -= l.dilation * (l.kernel - 1);
      shapes.emplace_back(len, l.channels);
    }
  } else {
    shapes.emplace_back(1, time_steps * features);
    for (int h : mlp_hidden) shapes.emplace_back(1, h);
    shapes.emplace_back(1, outputs);
  }
  return shapes;
}

std::vector<ParamSlice> ParameterLayout(const ArchSpec& spec) {
  std::vector<ParamSlice> out;
  std::size_t offset = 0;
  auto add = [&](std::size_t weights, std::size_t bias) {
    ParamSlice s;
    s.weight_offset = offset;
    s.weight_size = weights;
    offset += weights;
    s.bias_offset = offset;
    s.bias_size = bias;
    offset += bias;
    out.push_back(s);
  };
  if (spec.kind == ArchKind::kGatedCnn) {
    int in = spec.features;
    for (const ConvLayerSpec& l : spec.conv) {
      int w = OutWidth(l);
      add(std::size_t(l.kernel) * in * w, w);
      in = l.channels;
    }
  } else {
    int in = spec.time_steps * spec.features;
    for (int h : spec.mlp_hidden) {
      add(std::size_t(in) * h, h);
      in = h;
    }
    add(std::size_t(in) * spec.outputs, spec.outputs);
  }
  return out;
}

int ArchSpec::ParameterCount() const {
  auto layout = ParameterLayout(*this);
  if (layout.empty()) return 0;
  return static_cast<int>(layout.back().bias_offset + layout.back().bias_size);
}

std::vector<LayerParams> Unflatten(const ArchSpec& spec,
                                   std::span<const double> theta) {
  CheckTheta(spec, theta);
  auto layout = ParameterLayout(spec);
  std::vector<LayerParams> layers(layout.size());
  auto copy_matrix = [&](std::size_t offset, int rows, int cols) {
    Eigen::MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) m(r, c) = theta[offset + r * cols + c];
    }
    return m;
  };
  for (std::size_t li = 0; li < layout.size(); ++li) {
    const ParamSlice& s = layout[li];
    LayerParams& lp = layers[li];
    if (spec.kind == ArchKind::kGatedCnn) {
      const ConvLayerSpec& l = spec.conv[li];
      int in = li == 0 ? spec.features : spec.conv[li - 1].channels;
      int w = OutWidth(l);
      for (int k = 0; k < l.kernel; ++k) {
        lp.taps.push_back(copy_matrix(s.weight_offset + std::size_t(k) * in * w,
                                      in, w));
      }
    } else {
      int out = static_cast<int>(s.bias_size);
      int in = static_cast<int>(s.weight_size) / out;
      lp.taps.push_back(copy_matrix(s.weight_offset, in, out));
    }
    lp.bias = Eigen::Map<const Eigen::VectorXd>(theta.data() + s.bias_offset,
                                                s.bias_size);
  }
  return layers;
}

std::vector<double> Flatten(const ArchSpec& spec,
                            const std::vector<LayerParams>& layers) {
  auto layout = ParameterLayout(spec);
  if (layers.size() != layout.size()) {
    throw ShapeError("layer count does not match the architecture");
  }
  std::vector<double> theta(spec.ParameterCount());
  for (std::size_t li = 0; li < layout.size(); ++li) {
    const ParamSlice& s = layout[li];
    std::size_t offset = s.weight_offset;
    for (const Eigen::MatrixXd& m : layers[li].taps) {
      for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < m.cols(); ++c) theta[offset++] = m(r, c);
      }
    }
    if (offset != s.weight_offset + s.weight_size ||
        std::size_t(layers[li].bias.size()) != s.bias_size) {
      throw ShapeError("layer " + std::to_string(li) + " has the wrong size");
    }
    for (std::size_t i = 0; i < s.bias_size; ++i) {
      theta[s.bias_offset + i] = layers[li].bias[i];
    }
  }
  return theta;
}

Eigen::MatrixXd GatedConvLayer(const Eigen::MatrixXd& input,
                               const LayerParams& params,
                               const ConvLayerSpec& layer) {
  const int span = layer.dilation * (layer.kernel - 1);
  const int out_len = static_cast<int>(input.rows()) - span;
  if (out_len < 1) {
    throw ShapeError("input of length " + std::to_string(input.rows()) +
                     " is shorter than the layer's receptive extent " +
                     std::to_string(span + 1));
  }
  if (static_cast<int>(params.taps.size()) != layer.kernel ||
      params.taps[0].rows() != input.cols()) {
    throw ShapeError("conv weights do not match the input channels");
  }
  const int c = layer.channels;
  Eigen::MatrixXd pre(out_len, params.bias.size());
  for (int j = 0; j < out_len; ++j) {
    Eigen::RowVectorXd acc = params.bias.transpose();
    for (int k = 0; k < layer.kernel; ++k) {
      acc += input.row(j + k * layer.dilation) * params.taps[k];
    }
    pre.row(j) = acc;
  }
  Eigen::MatrixXd out(out_len, c);
  for (int j = 0; j < out_len; ++j) {
    for (int ch = 0; ch < c; ++ch) {
      double a = std::tanh(pre(j, ch));
      out(j, ch) = layer.gated ? a * Sigmoid(pre(j, c + ch)) : a;
    }
  }
  return out;
}

Observation NormalizeObservation(const Observation& obs,
                                 const RunningStats& stats) {
  const RunningStats::Vector scale = stats.Scale();
  Observation out;
  for (int r = 0; r < kHistoryLength; ++r) {
    for (int f = 0; f < kObsFeatures; ++f) {
      out(r, f) = (obs(r, f) - stats.mean()[f]) / scale[f];
    }
  }
  return out;
}

JointVector CnnForward(const Observation& obs, std::span<const double> theta,
                       const ArchSpec& spec, const RunningStats& stats) {
  CheckTheta(spec, theta);
  // row-major (length x channels) activations in fixed scratch buffers
  thread_local std::vector<double> cur, next, pre;
  Observation x = NormalizeObservation(obs, stats);
  int len = kHistoryLength;
  int in_ch = kObsFeatures;
  cur.assign(x.data(), x.data() + x.size());
  const double* p = theta.data();
  for (const ConvLayerSpec& l : spec.conv) {
    const int w = OutWidth(l);
    const int out_len = len - l.dilation * (l.kernel - 1);
    const double* weights = p;
    const double* bias = p + std::size_t(l.kernel) * in_ch * w;
    p = bias + w;
    pre.assign(std::size_t(out_len) * w, 0.0);
    for (int j = 0; j < out_len; ++j) {
      double* acc = pre.data() + std::size_t(j) * w;
      for (int o = 0; o < w; ++o) acc[o] = bias[o];
      for (int k = 0; k < l.kernel; ++k) {
        const double* row = cur.data() + std::size_t(j + k * l.dilation) * in_ch;
        const double* wk = weights + std::size_t(k) * in_ch * w;
        for (int i = 0; i < in_ch; ++i) {
          const double xi = row[i];
          const double* wi = wk + std::size_t(i) * w;
          for (int o = 0; o < w; ++o) acc[o] += xi * wi[o];
        }
      }
    }
    next.resize(std::size_t(out_len) * l.channels);
    for (int j = 0; j < out_len; ++j) {
      const double* acc = pre.data() + std::size_t(j) * w;
      double* y = next.data() + std::size_t(j) * l.channels;
      for (int ch = 0; ch < l.channels; ++ch) {
        double a = std::tanh(acc[ch]);
        y[ch] = l.gated ? a * Sigmoid(acc[l.channels + ch]) : a;
      }
    }
    std::swap(cur, next);
    len = out_len;
    in_ch = l.channels;
  }
  JointVector out;
  for (int i = 0; i < kNumJoints; ++i) out[i] = cur[i];
  return out;
}

JointVector MlpForward(const Observation& obs, std::span<const double> theta,
                       const ArchSpec& spec, const RunningStats& stats) {
  CheckTheta(spec, theta);
  thread_local std::vector<double> cur, next;
  Observation x = NormalizeObservation(obs, stats);
  cur.assign(x.data(), x.data() + x.size());  // row-major flatten
  const double* p = theta.data();
  auto dense = [&](int out, bool activate) {
    const int in = static_cast<int>(cur.size());
    const double* weights = p;
    const double* bias = p + std::size_t(in) * out;
    p = bias + out;
    next.assign(bias, bias + out);
    for (int i = 0; i < in; ++i) {
      const double xi = cur[i];
      const double* wi = weights + std::size_t(i) * out;
      for (int o = 0; o < out; ++o) next[o] += xi * wi[o];
    }
    if (activate) {
      for (double& v : next) v = std::tanh(v);
    }
    std::swap(cur, next);
  };
  for (int h : spec.mlp_hidden) dense(h, true);
  dense(spec.outputs, false);
  JointVector out;
  for (int i = 0; i < kNumJoints; ++i) out[i] = cur[i];
  return out;
}

JointVector PolicyForward(const Observation& obs, std::span<const double> theta,
                          const ArchSpec& spec, const RunningStats& stats) {
  return spec.kind == ArchKind::kGatedCnn ? CnnForward(obs, theta, spec, stats)
                                          : MlpForward(obs, theta, spec, stats);
}

}  // namespace ttes
