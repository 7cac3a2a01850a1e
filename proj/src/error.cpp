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


#include "gpl/error.hpp"

namespace gpl {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroClips: return "ZeroClips";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::DimensionError: return "DimensionError";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::OverlapError: return "OverlapError";
    case ErrorCode::RangeError: return "RangeError";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::AllClipsRemoved: return "AllClipsRemoved";
    case ErrorCode::NumericalError: return "NumericalError";
    case ErrorCode::KTooLarge: return "KTooLarge";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::InfeasibleSeparation: return "InfeasibleSeparation";
    case ErrorCode::MissingArtifact: return "MissingArtifact";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::KTooLarge:
    case ErrorCode::TooLarge:
    case ErrorCode::InfeasibleSeparation:
      return 2;
    case ErrorCode::NumericalError:
      return 4;
    default:
      return 3;
  }
}

}  // namespace gpl
