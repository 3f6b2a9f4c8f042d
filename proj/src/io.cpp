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

#include "fairscore/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "fairscore/error.hpp"

namespace fairscore {

namespace {

struct CsvRow {
  std::size_t line;  // 1-based line of the row's first character
  std::vector<std::string> fields;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::vector<CsvRow> split_csv(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::vector<CsvRow> rows;
  CsvRow row{1, {}};
  std::string field;
  bool quoted = false;
  bool in_quotes = false;
  std::size_t line = 1;

  auto end_field = [&] {
    row.fields.push_back(quoted ? field : std::string(trim(field)));
    field.clear();
    quoted = false;
  };
  auto end_row = [&] {
    end_field();
    const bool blank = row.fields.size() == 1 && row.fields[0].empty();
    if (!blank) rows.push_back(std::move(row));
    row = CsvRow{line, {}};
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!trim(field).empty()) {
          throw Error(ErrorCode::kParseError,
                      "line " + std::to_string(line) + ": quote inside unquoted field");
        }
        field.clear();
        quoted = true;
        in_quotes = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        ++line;
        end_row();
        break;
      default:
        field += c;
    }
  }
  if (in_quotes) {
    throw Error(ErrorCode::kParseError, "line " + std::to_string(row.line) + ": unterminated quote");
  }
  end_row();
  return rows;
}

std::optional<double> parse_number(std::string_view cell) {
  cell = trim(cell);
  if (cell.starts_with('+')) cell.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::string column_name(const Dataset& data, std::size_t j) {
  return j < data.attribute_names().size() ? data.attribute_names()[j] : "x" + std::to_string(j + 1);
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_value(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return csv_field(v.get<std::string>());
  if (v.is_array()) {
    std::string joined;
    for (const Json& x : v) {
      if (!joined.empty()) joined += ' ';
      joined += x.is_string() ? x.get<std::string>() : x.dump();
    }
    return csv_field(joined);
  }
  return v.dump();
}

void csv_line(std::ostringstream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
  out << '\n';
}

// Rows of `objects` projected on `keys`.
std::string csv_table(const std::vector<std::string>& keys, const Json& objects) {
  std::ostringstream out;
  csv_line(out, keys);
  for (const Json& o : objects) {
    std::vector<std::string> cells;
    for (const std::string& k : keys) cells.push_back(o.contains(k) ? csv_value(o.at(k)) : "");
    csv_line(out, cells);
  }
  return out.str();
}

std::string export_csv(const Report& r) {
  const Json& p = r.payload;
  if (r.kind == "up") {
    return csv_table({"up", "error", "alpha", "samples", "unfair"}, Json::array({p}));
  }
  if (r.kind == "audit") {
    return csv_table({"stability", "error", "alpha", "samples", "hits", "scope"}, Json::array({p}));
  }
  if (r.kind == "suggestion") {
    return csv_table({"found", "function", "angular_gap", "samples_used"}, Json::array({p}));
  }
  if (r.kind == "stability") {
    std::map<std::string, Json> rankings;
    for (const Json& t : p.at("top_rankings")) rankings[t.at("fingerprint")] = t.at("ranking");
    Json rows = Json::array();
    for (const Json& h : p.at("histogram")) {
      Json row = h;
      const auto it = rankings.find(h.at("fingerprint").get<std::string>());
      row["ranking"] = it == rankings.end() ? Json() : it->second;
      rows.push_back(std::move(row));
    }
    return csv_table({"fingerprint", "ranking", "count", "stability"}, rows);
  }
  if (r.kind == "ranking") {
    return csv_table({"position", "id", "score", "group"}, p.at("entries"));
  }
  if (r.kind == "arrangement") {
    return csv_table({"first", "last", "volume", "signature"}, p.at("regions"));
  }
  if (r.kind == "samples") {
    std::ostringstream out;
    const Json& samples = p.at("samples");
    const std::size_t d = samples.empty() ? p.value("dimension", std::size_t{0}) : samples[0].size();
    std::vector<std::string> header;
    for (std::size_t j = 0; j < d; ++j) header.push_back("w" + std::to_string(j + 1));
    csv_line(out, header);
    for (const Json& w : samples) {
      std::vector<std::string> cells;
      for (const Json& x : w) cells.push_back(x.dump());
      csv_line(out, cells);
    }
    return out.str();
  }
  throw Error(ErrorCode::kFormatError, "no CSV layout for report kind '" + r.kind + "'");
}

Json ids_json(const Ranking& r, const Dataset& data) { return r.ids(data); }

}  // namespace

void IngestConfig::validate() const {
  if (scoring_columns.empty()) throw Error(ErrorCode::kSchemaError, "no scoring columns given");
  std::set<std::string> seen;
  for (const std::string& c : scoring_columns) {
    if (c.empty()) throw Error(ErrorCode::kSchemaError, "empty scoring column name");
    if (!seen.insert(c).second) {
      throw Error(ErrorCode::kSchemaError, "scoring column '" + c + "' listed twice");
    }
  }
}

Normalization parse_normalization(std::string_view name) {
  if (name == "none") return Normalization::kNone;
  if (name == "minmax" || name == "min-max") return Normalization::kMinMax;
  throw Error(ErrorCode::kInvalidArgument, "unknown normalization '" + std::string(name) + "'");
}

Dataset parse_csv(std::string_view text, const IngestConfig& config) {
  config.validate();
  const std::vector<CsvRow> rows = split_csv(text);
  if (rows.empty()) throw Error(ErrorCode::kEmptyDataset, "input has no header row");
  const std::vector<std::string>& header = rows.front().fields;

  auto find_column = [&](const std::string& name) -> std::size_t {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw Error(ErrorCode::kSchemaError, "missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  std::vector<std::size_t> scoring;
  for (const std::string& c : config.scoring_columns) scoring.push_back(find_column(c));
  const std::optional<std::size_t> id_col =
      config.id_column ? std::optional(find_column(*config.id_column)) : std::nullopt;
  const std::optional<std::size_t> group_col =
      config.sensitive_column ? std::optional(find_column(*config.sensitive_column)) : std::nullopt;
  if (rows.size() < 2) throw Error(ErrorCode::kEmptyDataset, "input has no data rows");

  std::vector<Tuple> tuples;
  tuples.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const std::vector<std::string>& fields = rows[r].fields;
    if (fields.size() != header.size()) {
      throw ParseError(r, "", "expected " + std::to_string(header.size()) + " fields, found " +
                                  std::to_string(fields.size()));
    }
    Tuple t;
    t.id = id_col ? fields[*id_col] : "t" + std::to_string(r);
    if (t.id.empty()) throw ParseError(r, *config.id_column, "empty id");
    for (std::size_t j = 0; j < scoring.size(); ++j) {
      const auto value = parse_number(fields[scoring[j]]);
      if (!value) {
        throw ParseError(r, config.scoring_columns[j],
                         "'" + fields[scoring[j]] + "' is not a finite number");
      }
      t.scoring.push_back(*value);
    }
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (std::find(scoring.begin(), scoring.end(), c) == scoring.end()) {
        t.attributes[header[c]] = fields[c];
      }
    }
    if (group_col && !fields[*group_col].empty()) t.group = fields[*group_col];
    tuples.push_back(std::move(t));
  }
  Dataset data(std::move(tuples), config.scoring_columns, config.sensitive_column,
               config.declared_groups);
  return config.normalization == Normalization::kMinMax ? normalize(data) : data;
}

Dataset load_csv(const std::filesystem::path& path, const IngestConfig& config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIoError, "cannot read '" + path.string() + "'");
  return parse_csv(buffer.str(), config);
}

Dataset normalize(const Dataset& data) {
  const std::size_t d = data.dimension();
  const std::size_t n = data.size();
  std::vector<double> lo(d, INFINITY), hi(d, -INFINITY);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = data.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      lo[j] = std::min(lo[j], row[j]);
      hi[j] = std::max(hi[j], row[j]);
    }
  }
  std::vector<Tuple> tuples = data.tuples();
  for (Tuple& t : tuples) {
    for (std::size_t j = 0; j < d; ++j) {
      t.scoring[j] = hi[j] > lo[j] ? (t.scoring[j] - lo[j]) / (hi[j] - lo[j]) : 0.0;
    }
  }

  // Express the bounds in the units of the original, un-normalized data.
  NormalizationInfo info;
  const auto& prior = data.normalization();
  std::set<std::string> constant;
  if (prior) constant.insert(prior->constant_columns.begin(), prior->constant_columns.end());
  for (std::size_t j = 0; j < d; ++j) {
    double min_j = lo[j], max_j = hi[j];
    if (prior) {
      const double base = prior->minimums[j];
      const double range = prior->maximums[j] - prior->minimums[j];
      min_j = base + lo[j] * range;
      max_j = base + hi[j] * range;
      if (range == 0.0) max_j = min_j = base;
    }
    if (!(hi[j] > lo[j])) constant.insert(column_name(data, j));
    info.minimums.push_back(min_j);
    info.maximums.push_back(max_j);
  }
  info.constant_columns.assign(constant.begin(), constant.end());
  return Dataset(std::move(tuples), data.attribute_names(), data.sensitive_attribute(),
                 data.groups())
      .with_normalization(std::move(info));
}

std::string dataset_digest(const Dataset& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](std::string_view bytes) {
    for (unsigned char c : bytes) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= 0xff;
    h *= 0x100000001b3ULL;
  };
  feed(std::to_string(data.size()) + "x" + std::to_string(data.dimension()));
  for (const std::string& name : data.attribute_names()) feed(name);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Tuple& t = data.tuple(i);
    feed(t.id);
    for (double x : data.row(i)) feed(std::to_string(std::bit_cast<std::uint64_t>(x)));
    feed(t.group.value_or(""));
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ReportFormat parse_format(std::string_view name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "csv") return ReportFormat::kCsv;
  throw Error(ErrorCode::kFormatError, "unsupported format '" + std::string(name) + "'");
}

std::string export_report(const Report& report, ReportFormat format) {
  if (format == ReportFormat::kCsv) return export_csv(report);
  const Json doc = {{"schema_version", kSchemaVersion},
                    {"kind", report.kind},
                    {"metadata", report.metadata},
                    {"payload", report.payload}};
  return doc.dump(2) + "\n";
}

Report parse_report(std::string_view json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kFormatError, std::string("malformed report: ") + e.what());
  }
  if (!doc.is_object() || doc.value("schema_version", 0) != kSchemaVersion ||
      !doc.contains("kind") || !doc.at("kind").is_string()) {
    throw Error(ErrorCode::kFormatError, "not a version " + std::to_string(kSchemaVersion) + " report");
  }
  return {doc.at("kind").get<std::string>(), doc.value("payload", Json()),
          doc.value("metadata", Json())};
}

Json to_json(const UpEstimate& up) {
  return {{"up", up.up},
          {"error", up.error},
          {"alpha", up.alpha},
          {"samples", up.samples},
          {"unfair", up.unfair}};
}

Json to_json(const AuditResult& audit, const Dataset& data) {
  return {{"stability", audit.stability},
          {"error", audit.error},
          {"alpha", audit.alpha},
          {"samples", audit.samples},
          {"hits", audit.hits},
          {"scope", audit.scope.name()},
          {"reference_ranking", ids_json(audit.reference_ranking, data)}};
}

Json to_json(const StabilityReport& report, const Dataset& data) {
  const double total = static_cast<double>(report.total_samples);
  Json histogram = Json::array();
  for (const auto& [fp, count] : report.histogram) {
    histogram.push_back({{"fingerprint", fp.hex()},
                         {"count", count},
                         {"stability", static_cast<double>(count) / total}});
  }
  Json top = Json::array();
  for (std::size_t p = 0; p < report.top_rankings.size(); ++p) {
    const RankingStability& item = report.top_rankings[p];
    top.push_back({{"position", p + 1},
                   {"fingerprint", item.fingerprint.hex()},
                   {"count", item.count},
                   {"stability", item.stability},
                   {"error", item.error},
                   {"exemplar", item.exemplar},
                   {"ranking", ids_json(item.ranking, data)}});
  }
  Json reference = {{"fingerprint", report.reference_fingerprint.hex()},
                    {"stability", report.reference_stability},
                    {"error", report.reference_error},
                    {"position", nullptr},
                    {"in_top", false}};
  if (report.reference_position) {
    reference["position"] = *report.reference_position + 1;
    reference["in_top"] = *report.reference_position < report.top_rankings.size();
  }
  return {{"scope", report.scope.name()},
          {"total_samples", report.total_samples},
          {"alpha", report.alpha},
          {"distinct_rankings", report.histogram.size()},
          {"histogram", std::move(histogram)},
          {"top_rankings", std::move(top)},
          {"reference", std::move(reference)}};
}

Json to_json(const Suggestion& suggestion, const Dataset& data) {
  Json out = {{"found", suggestion.found},
              {"samples_used", suggestion.samples_used},
              {"function", nullptr},
              {"angular_gap", nullptr},
              {"ranking", nullptr}};
  if (suggestion.found) {
    out["function"] = *suggestion.function;
    out["angular_gap"] = suggestion.angular_gap;
    out["ranking"] = ids_json(*suggestion.ranking, data);
  }
  return out;
}

Json to_json(const ApproxArrangement& arrangement) {
  Json planes = Json::array();
  for (const Hyperplane& h : arrangement.hyperplanes()) {
    Json p = {{"coeffs", h.coeffs}, {"label", nullptr}};
    if (h.label) p["label"] = {h.label->first, h.label->second};
    planes.push_back(std::move(p));
  }
  Json regions = Json::array();
  for (const RegionVolume& rv : arrangement.regions()) {
    std::string signature;
    for (bool b : rv.region.signature) signature += b ? '+' : '-';
    regions.push_back({{"first", rv.region.first},
                       {"last", rv.region.last},
                       {"volume", rv.volume},
                       {"signature", signature}});
  }
  return {{"samples", arrangement.sample_count()},
          {"dimension", arrangement.dimension()},
          {"region_count", arrangement.region_count()},
          {"hyperplanes", std::move(planes)},
          {"regions", std::move(regions)}};
}

Json ranking_json(const Ranking& ranking, const Dataset& data) {
  Json entries = Json::array();
  for (std::size_t p = 0; p < ranking.order.size(); ++p) {
    const Tuple& t = data.tuple(ranking.order[p]);
    entries.push_back({{"position", p + 1},
                       {"id", t.id},
                       {"score", ranking.scores[p]},
                       {"group", t.group ? Json(*t.group) : Json()}});
  }
  return {{"order", ids_json(ranking, data)}, {"entries", std::move(entries)}};
}

Json region_json(const RegionOfInterest& roi) {
  return {{"rho", roi.rho},
          {"theta", roi.theta},
          {"cos_similarity", std::cos(roi.theta)},
          {"center", roi.center()}};
}

Json dataset_json(const Dataset& data) {
  Json out = {{"n", data.size()},
              {"d", data.dimension()},
              {"columns", data.attribute_names()},
              {"groups", data.groups()},
              {"sensitive", data.sensitive_attribute() ? Json(*data.sensitive_attribute()) : Json()},
              {"digest", dataset_digest(data)}};
  if (const auto& info = data.normalization()) {
    out["normalization"] = {{"method", "minmax"},
                            {"minimums", info->minimums},
                            {"maximums", info->maximums},
                            {"constant_columns", info->constant_columns}};
  }
  return out;
}

}  // namespace fairscore
