// Copyright 2026 The kinfit Authors
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

#include "kinfit/error.hpp"

namespace kinfit {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyCloud: return "EmptyCloud";
    case ErrorCode::PartNotInMask: return "PartNotInMask";
    case ErrorCode::NoValidDepth: return "NoValidDepth";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::InconsistentParts: return "InconsistentParts";
    case ErrorCode::MalformedPly: return "MalformedPly";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::MissingScene: return "MissingScene";
    case ErrorCode::MissingPairScore: return "MissingPairScore";
    case ErrorCode::MissingJointValue: return "MissingJointValue";
    case ErrorCode::PartSetMismatch: return "PartSetMismatch";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::DegenerateCloud: return "DegenerateCloud";
    case ErrorCode::NoCorrespondences: return "NoCorrespondences";
    case ErrorCode::AllOutliers: return "AllOutliers";
    case ErrorCode::DegenerateMotion: return "DegenerateMotion";
  }
  return "UnknownError";
}

bool is_estimation_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateCloud:
    case ErrorCode::NoCorrespondences:
    case ErrorCode::AllOutliers:
    case ErrorCode::DegenerateMotion:
      return true;
    default:
      return false;
  }
}

}  // namespace kinfit
