// Copyright 2026 The fairscore Authors
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

#include "fairscore/error.hpp"

namespace fairscore {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDegenerateVector: return "DegenerateVector";
    case ErrorCode::kInvalidRadius: return "InvalidRadius";
    case ErrorCode::kInvalidPlane: return "InvalidPlane";
    case ErrorCode::kInvalidDimension: return "InvalidDimension";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kTooCoarse: return "TooCoarse";
    case ErrorCode::kInvalidProbability: return "InvalidProbability";
    case ErrorCode::kInvalidRegion: return "InvalidRegion";
    case ErrorCode::kRegionTooSmall: return "RegionTooSmall";
    case ErrorCode::kUnknownGroup: return "UnknownGroup";
    case ErrorCode::kInvalidConstraint: return "InvalidConstraint";
    case ErrorCode::kDegenerateExchange: return "DegenerateExchange";
    case ErrorCode::kInvalidConfidence: return "InvalidConfidence";
    case ErrorCode::kReferenceOutsideRegion: return "ReferenceOutsideRegion";
    case ErrorCode::kRegionNotMaterialized: return "RegionNotMaterialized";
    case ErrorCode::kInvalidHyperplane: return "InvalidHyperplane";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kFormatError: return "FormatError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

bool is_data_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSchemaError:
    case ErrorCode::kParseError:
    case ErrorCode::kEmptyDataset:
    case ErrorCode::kUnknownGroup:
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kIoError:
      return true;
    default:
      return false;
  }
}

}  // namespace fairscore
