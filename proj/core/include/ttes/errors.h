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

#ifndef TTES_ERRORS_H_
#define TTES_ERRORS_H_

#include <stdexcept>
#include <string>

namespace ttes {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// invalid or inconsistent configuration; line is 1-based, 0 when unknown
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// tensor or parameter-vector dimensions do not match the architecture
class ShapeError : public Error {
 public:
  using Error::Error;
};

// no positive flight time reaches the table plane
class UnsolvableThrowError : public Error {
 public:
  using Error::Error;
};

// operation called in a state its contract forbids (e.g. stepping a
// terminated episode)
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// unreadable, truncated or corrupted checkpoint
class CheckpointError : public Error {
 public:
  using Error::Error;
};

}  // namespace ttes

#endif  // TTES_ERRORS_H_
