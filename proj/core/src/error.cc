// Copyright 2026 The ftcal Authors.
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

#include "ftcal/error.h"

namespace ftcal {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kEmptyDataset: return "EmptyDataset";
    case ErrorKind::kInvalidGravity: return "InvalidGravity";
    case ErrorKind::kDegenerateSpan: return "DegenerateSpan";
    case ErrorKind::kRankDeficientSystem: return "RankDeficientSystem";
    case ErrorKind::kNotIdentifiable: return "NotIdentifiable";
    case ErrorKind::kIllConditioned: return "IllConditioned";
    case ErrorKind::kRankDeficient: return "RankDeficient";
    case ErrorKind::kDegeneratePointSet: return "DegeneratePointSet";
    case ErrorKind::kNonEllipsoidQuadric: return "NonEllipsoidQuadric";
    case ErrorKind::kSignalTooShort: return "SignalTooShort";
    case ErrorKind::kBadWindow: return "BadWindow";
    case ErrorKind::kParseError: return "ParseError";
    case ErrorKind::kNoValidSamples: return "NoValidSamples";
    case ErrorKind::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace ftcal
