// Copyright 2026 The GuDA Authors
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

#ifndef GUDA_ERROR_H_
#define GUDA_ERROR_H_

#include <stdexcept>
#include <string>

namespace guda {

// Failure classes; the CLI maps each to a process exit code.
enum class ErrorKind {
  kConfig = 2,
  kData = 3,
  kNumeric = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }
  int exit_code() const { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error(ErrorKind::kConfig, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what)
      : Error(ErrorKind::kData, what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what)
      : Error(ErrorKind::kNumeric, what) {}
};

// A transform moved a segment into an infeasible region (wall, out of
// bounds, insufficient clearance). Samplers catch this and retry.
class InvalidPlacement : public DataError {
 public:
  InvalidPlacement() : DataError("invalid placement") {}
};

// Raised when every retry for one source window produced an invalid
// placement. Callers resample the source window.
class RejectionExhausted : public DataError {
 public:
  explicit RejectionExhausted(const std::string& rule)
      : DataError("rejection budget exhausted (rule " + rule + ")") {}
};

}  // namespace guda

#endif  // GUDA_ERROR_H_
