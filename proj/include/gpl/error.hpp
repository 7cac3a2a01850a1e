// Copyright 2026 The UnityGraph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gpl {

enum class ErrorCode {
  ZeroClips,
  FormatError,
  DimensionError,
  ZeroVector,
  OverlapError,
  RangeError,
  LengthMismatch,
  AllClipsRemoved,
  NumericalError,
  KTooLarge,
  TooLarge,
  InfeasibleSeparation,
  MissingArtifact,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Process exit code for an error: 2 config, 3 data, 4 numerical.
int exit_code_for(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        message_(what) {}

  ErrorCode code() const noexcept { return code_; }
  // what() without the code prefix
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace gpl
