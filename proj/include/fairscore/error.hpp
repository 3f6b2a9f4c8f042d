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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fairscore {

enum class ErrorCode {
  kInvalidArgument,
  kDegenerateVector,
  kInvalidRadius,
  kInvalidPlane,
  kInvalidDimension,
  kDimensionMismatch,
  kTooCoarse,
  kInvalidProbability,
  kInvalidRegion,
  kRegionTooSmall,
  kUnknownGroup,
  kInvalidConstraint,
  kDegenerateExchange,
  kInvalidConfidence,
  kReferenceOutsideRegion,
  kRegionNotMaterialized,
  kInvalidHyperplane,
  kSchemaError,
  kParseError,
  kEmptyDataset,
  kFormatError,
  kIoError,
};

std::string_view to_string(ErrorCode code);

// Input-shaped failures (bad files, unknown columns or groups). The CLI maps
// these to exit code 2 and the service to 400/422.
bool is_data_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by load_csv; carries the 1-based data row and the column name of the
// offending cell.
class ParseError : public Error {
 public:
  ParseError(std::size_t row, std::string column, const std::string& message)
      : Error(ErrorCode::kParseError,
              "row " + std::to_string(row) + ", column '" + column + "': " +
                  message),
        row_(row),
        column_(std::move(column)) {}

  std::size_t row() const noexcept { return row_; }
  const std::string& column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::string column_;
};

}  // namespace fairscore
