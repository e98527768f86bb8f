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

#ifndef TTES_CHECKPOINT_H_
#define TTES_CHECKPOINT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "ttes/curriculum.h"
#include "ttes/policy.h"
#include "ttes/running_stats.h"

namespace ttes {

// Binary checkpoint, little endian, version 1:
//   char[8]  magic "TTESCKPT"
//   u32      version
//   u32      arch kind (0 gated cnn, 1 mlp), time_steps, features, outputs
//   u32      conv layer count, then per layer u32 channels, kernel,
//            dilation, stride and u8 gated
//   u32      mlp hidden count, then u32 per hidden width
//   u64      parameter count, then f64 per parameter
//   u64      stats count, f64[11] mean, f64[11] m2
//   u32      curriculum stage, u64 stage start iteration
//   u64      completed iterations
//   u64      run seed
//   u64      FNV-1a 64 of every preceding byte
struct Checkpoint {
  ArchSpec arch;
  std::vector<double> theta;
  RunningStats stats;
  CurriculumState curriculum;
  std::uint64_t iteration = 0;
  std::uint64_t seed = 0;

  bool operator==(const Checkpoint& o) const {
    return arch == o.arch && theta == o.theta && stats == o.stats &&
           curriculum == o.curriculum && iteration == o.iteration &&
           seed == o.seed;
  }
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

std::string SerializeCheckpoint(const Checkpoint& ckpt);
// throws CheckpointError on bad magic, version, checksum or truncation and
// ShapeError when theta does not match the stored architecture
Checkpoint ParseCheckpoint(const std::string& bytes);

// written to a temporary file and renamed into place
void WriteCheckpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint ReadCheckpoint(const std::string& path);

std::uint64_t Fnv1a64(const void* data, std::size_t size);

}  // namespace ttes

#endif  // TTES_CHECKPOINT_H_
