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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fairscore/arrangement.hpp"
#include "fairscore/estimators.hpp"
#include "fairscore/sampler.hpp"
#include "fairscore/scoring.hpp"

namespace fairscore {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

enum class Normalization { kNone, kMinMax };

struct IngestConfig {
  std::vector<std::string> scoring_columns;
  std::optional<std::string> id_column;
  std::optional<std::string> sensitive_column;
  Normalization normalization = Normalization::kNone;
  // Sensitive values that may have no rows but can still appear in constraints.
  std::vector<std::string> declared_groups;

  // Throws kSchemaError unless the scoring columns are non-empty and distinct.
  void validate() const;
};

Normalization parse_normalization(std::string_view name);

// Comma-separated, header row first, '.' decimals; double quotes may wrap any
// field. Rows without an id column get ids t1, t2, ... in file order.
Dataset parse_csv(std::string_view text, const IngestConfig& config);
Dataset load_csv(const std::filesystem::path& path, const IngestConfig& config);

// Min-max scales each scoring column to [0, 1]; constant columns become 0 and
// are listed in the attached NormalizationInfo. The info always maps back to
// the original values, also when normalizing twice.
Dataset normalize(const Dataset& data);

// 64-bit FNV-1a over ids, scoring values and groups, as 16 hex digits.
std::string dataset_digest(const Dataset& data);

enum class ReportFormat { kJson, kCsv };

ReportFormat parse_format(std::string_view name);

struct Report {
  std::string kind;  // up, audit, stability, suggestion, arrangement, ranking, samples
  Json payload;
  Json metadata;

  bool operator==(const Report&) const = default;
};

// JSON: one object with sorted keys and "schema_version". CSV: one table per
// kind. Throws kFormatError for kinds without a CSV layout.
std::string export_report(const Report& report, ReportFormat format);
// Inverse of the JSON export.
Report parse_report(std::string_view json_text);

// Payload builders shared by the CLI and the service.
Json to_json(const UpEstimate& up);
Json to_json(const AuditResult& audit, const Dataset& data);
Json to_json(const StabilityReport& report, const Dataset& data);
Json to_json(const Suggestion& suggestion, const Dataset& data);
Json to_json(const ApproxArrangement& arrangement);
Json ranking_json(const Ranking& ranking, const Dataset& data);
Json region_json(const RegionOfInterest& roi);
Json dataset_json(const Dataset& data);

}  // namespace fairscore
