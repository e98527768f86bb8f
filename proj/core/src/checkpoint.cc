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

#include "ttes/checkpoint.h"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ttes/errors.h"

namespace ttes {
namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint IO assumes a little-endian host");

constexpr char kMagic[8] = {'T', 'T', 'E', 'S', 'C', 'K', 'P', 'T'};

class Writer {
 public:
  template <typename T>
  void Put(T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out_.append(buf, sizeof(T));
  }
  void Raw(const char* p, std::size_t n) { out_.append(p, n); }
  std::string& str() { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(const std::string& in) : in_(in) {}
  template <typename T>
  T Get() {
    if (pos_ + sizeof(T) > in_.size()) {
      throw CheckpointError("checkpoint truncated at byte " +
                            std::to_string(pos_));
    }
    T v;
    std::memcpy(&v, in_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::size_t pos() const { return pos_; }

 private:
  const std::string& in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::uint64_t Fnv1a64(const void* data, std::size_t size) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string SerializeCheckpoint(const Checkpoint& ckpt) {
  if (static_cast<int>(ckpt.theta.size()) != ckpt.arch.ParameterCount()) {
    throw ShapeError("checkpoint theta has " +
                     std::to_string(ckpt.theta.size()) +
                     " entries, architecture expects " +
                     std::to_string(ckpt.arch.ParameterCount()));
  }
  Writer w;
  w.Raw(kMagic, sizeof(kMagic));
  w.Put<std::uint32_t>(kCheckpointVersion);
  const ArchSpec& a = ckpt.arch;
  w.Put<std::uint32_t>(a.kind == ArchKind::kGatedCnn ? 0 : 1);
  w.Put<std::uint32_t>(a.time_steps);
  w.Put<std::uint32_t>(a.features);
  w.Put<std::uint32_t>(a.outputs);
  w.Put<std::uint32_t>(static_cast<std::uint32_t>(a.conv.size()));
  for (const ConvLayerSpec& l : a.conv) {
    w.Put<std::uint32_t>(l.channels);
    w.Put<std::uint32_t>(l.kernel);
    w.Put<std::uint32_t>(l.dilation);
    w.Put<std::uint32_t>(l.stride);
    w.Put<std::uint8_t>(l.gated ? 1 : 0);
  }
  w.Put<std::uint32_t>(static_cast<std::uint32_t>(a.mlp_hidden.size()));
  for (int h : a.mlp_hidden) w.Put<std::uint32_t>(h);
  w.Put<std::uint64_t>(ckpt.theta.size());
  for (double v : ckpt.theta) w.Put<double>(v);
  w.Put<std::uint64_t>(ckpt.stats.count());
  for (int i = 0; i < kObsFeatures; ++i) w.Put<double>(ckpt.stats.mean()[i]);
  for (int i = 0; i < kObsFeatures; ++i) w.Put<double>(ckpt.stats.m2()[i]);
  w.Put<std::uint32_t>(ckpt.curriculum.stage);
  w.Put<std::uint64_t>(ckpt.curriculum.stage_start);
  w.Put<std::uint64_t>(ckpt.iteration);
  w.Put<std::uint64_t>(ckpt.seed);
  w.Put<std::uint64_t>(Fnv1a64(w.str().data(), w.str().size()));
  return std::move(w.str());
}

Checkpoint ParseCheckpoint(const std::string& bytes) {
  if (bytes.size() < sizeof(kMagic) ||
      std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw CheckpointError("not a checkpoint (bad magic)");
  }
  if (bytes.size() < sizeof(kMagic) + 4 + 8) {
    throw CheckpointError("checkpoint truncated");
  }
  const std::size_t body = bytes.size() - sizeof(std::uint64_t);
  std::uint64_t stored;
  std::memcpy(&stored, bytes.data() + body, sizeof(stored));

  Reader r(bytes);
  for (std::size_t i = 0; i < sizeof(kMagic); ++i) r.Get<char>();
  const auto version = r.Get<std::uint32_t>();
  if (version != kCheckpointVersion) {
    throw CheckpointError("unsupported checkpoint version " +
                          std::to_string(version));
  }
  if (Fnv1a64(bytes.data(), body) != stored) {
    throw CheckpointError("checkpoint checksum mismatch");
  }

  Checkpoint c;
  const auto kind = r.Get<std::uint32_t>();
  if (kind > 1) throw CheckpointError("unknown architecture kind");
  c.arch.kind = kind == 0 ? ArchKind::kGatedCnn : ArchKind::kMlp;
  c.arch.time_steps = static_cast<int>(r.Get<std::uint32_t>());
  c.arch.features = static_cast<int>(r.Get<std::uint32_t>());
  c.arch.outputs = static_cast<int>(r.Get<std::uint32_t>());
  const auto n_conv = r.Get<std::uint32_t>();
  if (n_conv > 64) throw CheckpointError("implausible conv layer count");
  c.arch.conv.clear();
  for (std::uint32_t i = 0; i < n_conv; ++i) {
    ConvLayerSpec l;
    l.channels = static_cast<int>(r.Get<std::uint32_t>());
    l.kernel = static_cast<int>(r.Get<std::uint32_t>());
    l.dilation = static_cast<int>(r.Get<std::uint32_t>());
    l.stride = static_cast<int>(r.Get<std::uint32_t>());
    l.gated = r.Get<std::uint8_t>() != 0;
    c.arch.conv.push_back(l);
  }
  const auto n_hidden = r.Get<std::uint32_t>();
  if (n_hidden > 64) throw CheckpointError("implausible hidden layer count");
  c.arch.mlp_hidden.clear();
  for (std::uint32_t i = 0; i < n_hidden; ++i) {
    c.arch.mlp_hidden.push_back(static_cast<int>(r.Get<std::uint32_t>()));
  }
  const auto dim = r.Get<std::uint64_t>();
  if (dim > (bytes.size() - r.pos()) / sizeof(double)) {
    throw CheckpointError("checkpoint truncated in parameters");
  }
  c.theta.resize(dim);
  for (double& v : c.theta) v = r.Get<double>();
  const auto count = r.Get<std::uint64_t>();
  RunningStats::Vector mean, m2;
  for (int i = 0; i < kObsFeatures; ++i) mean[i] = r.Get<double>();
  for (int i = 0; i < kObsFeatures; ++i) m2[i] = r.Get<double>();
  c.stats = RunningStats::FromMoments(count, mean, m2);
  c.curriculum.stage = static_cast<int>(r.Get<std::uint32_t>());
  c.curriculum.stage_start = r.Get<std::uint64_t>();
  c.iteration = r.Get<std::uint64_t>();
  c.seed = r.Get<std::uint64_t>();
  if (r.pos() != body) throw CheckpointError("trailing bytes in checkpoint");

  c.arch.Validate();
  if (static_cast<int>(c.theta.size()) != c.arch.ParameterCount()) {
    throw ShapeError("checkpoint holds " + std::to_string(c.theta.size()) +
                     " parameters, its architecture expects " +
                     std::to_string(c.arch.ParameterCount()));
  }
  return c;
}

void WriteCheckpoint(const std::string& path, const Checkpoint& ckpt) {
  const std::string bytes = SerializeCheckpoint(ckpt);
  const std::filesystem::path target(path);
  if (target.has_parent_path()) {
    std::filesystem::create_directories(target.parent_path());
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointError("cannot open " + tmp + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw CheckpointError("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, target);
}

Checkpoint ReadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseCheckpoint(ss.str());
}

}  // namespace ttes
