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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "fairscore/error.hpp"
#include "fixtures.hpp"
#include "test_util.hpp"

namespace fairscore {
namespace {

using testutil::expect_code;

constexpr const char* kExample =
    "id,x1,x2,location\n"
    "t1,0.63,0.71,Detroit\n"
    "t2,0.72,0.65,Chicago\n"
    "t3,0.58,0.78,Detroit\n"
    "t4,0.70,0.68,Chicago\n"
    "t5,0.53,0.82,Detroit\n"
    "t6,0.61,0.79,Chicago\n";

IngestConfig example_config() {
  IngestConfig c;
  c.scoring_columns = {"x1", "x2"};
  c.id_column = "id";
  c.sensitive_column = "location";
  return c;
}

TEST(ParseCsv, ExampleTable) {
  const Dataset d = parse_csv(kExample, example_config());
  EXPECT_EQ(d.size(), 6u);
  EXPECT_EQ(d.dimension(), 2u);
  EXPECT_EQ(d.groups(), (std::vector<std::string>{"Chicago", "Detroit"}));
  EXPECT_EQ(d.tuple(3).id, "t4");
  EXPECT_DOUBLE_EQ(d.tuple(3).scoring[0], 0.70);
  EXPECT_EQ(d.tuple(3).group, "Chicago");
  EXPECT_EQ(rank(d, Vector{1, 1}).ids(d),
            (std::vector<std::string>{"t6", "t4", "t2", "t3", "t5", "t1"}));
  // Same content as the hand-built fixture.
  EXPECT_EQ(dataset_digest(d), dataset_digest(fixtures::example1()));
}

TEST(ParseCsv, SynthesizedIdsAndExtraColumns) {
  IngestConfig c;
  c.scoring_columns = {"b"};
  const Dataset d = parse_csv("a,b,c\nx,1,y\nz,2,w\n", c);
  EXPECT_EQ(d.tuple(0).id, "t1");
  EXPECT_EQ(d.tuple(1).id, "t2");
  EXPECT_EQ(d.tuple(1).attributes.at("a"), "z");
  EXPECT_EQ(d.tuple(1).attributes.at("c"), "w");
  EXPECT_FALSE(d.tuple(0).group.has_value());
}

TEST(ParseCsv, QuotesCrlfBomAndBlankLines) {
  IngestConfig c;
  c.scoring_columns = {"x"};
  c.sensitive_column = "g";
  const Dataset d =
      parse_csv("\xEF\xBB\xBFg,x\r\n\"New York, NY\", 1.5 \r\n\r\n\"say \"\"hi\"\"\",2\r\n", c);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.tuple(0).group, "New York, NY");
  EXPECT_DOUBLE_EQ(d.tuple(0).scoring[0], 1.5);
  EXPECT_EQ(d.tuple(1).group, "say \"hi\"");
}

TEST(ParseCsv, Errors) {
  IngestConfig c = example_config();
  expect_code(ErrorCode::kEmptyDataset, [&] { parse_csv("", c); });
  expect_code(ErrorCode::kEmptyDataset, [&] { parse_csv("id,x1,x2,location\n", c); });
  expect_code(ErrorCode::kSchemaError, [&] { parse_csv("id,x1,location\nt1,1,A\n", c); });
  expect_code(ErrorCode::kParseError, [&] { parse_csv("id,x1,x2,location\nt1,1,A\n", c); });
  expect_code(ErrorCode::kParseError, [&] { parse_csv("id,x1,x2,location\nt1,1,\"2,A\n", c); });
  try {
    parse_csv("id,x1,x2,location\nt1,1,2,A\nt2,1,abc,B\n", c);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.column(), "x2");
    EXPECT_EQ(e.row(), 2u);
  }
  expect_code(ErrorCode::kParseError, [&] { parse_csv("id,x1,x2,location\nt1,1,inf,A\n", c); });
  c.scoring_columns = {"x1", "x1"};
  expect_code(ErrorCode::kSchemaError, [&] { parse_csv(kExample, c); });
  c.scoring_columns = {};
  expect_code(ErrorCode::kSchemaError, [&] { parse_csv(kExample, c); });
}

TEST(ParseCsv, DeclaredGroupsReachConstraints) {
  IngestConfig c = example_config();
  c.declared_groups = {"Boston"};
  const Dataset d = parse_csv(kExample, c);
  EXPECT_TRUE(d.group_index("Boston").has_value());
  const std::vector<FairnessConstraint> rules = {parse_constraint("Boston:2:0")};
  EXPECT_TRUE(check_fairness(rank(d, Vector{1, 1}), d, rules));
}

TEST(LoadCsv, FileAndMissingFile) {
  const auto path = std::filesystem::temp_directory_path() / "fairscore_io_test.csv";
  {
    std::ofstream out(path);
    out << kExample;
  }
  EXPECT_EQ(load_csv(path, example_config()).size(), 6u);
  std::filesystem::remove(path);
  expect_code(ErrorCode::kIoError, [&] { load_csv(path, example_config()); });
  EXPECT_TRUE(is_data_error(ErrorCode::kIoError));
}

TEST(Normalize, MinMaxColumns) {
  IngestConfig c;
  c.scoring_columns = {"a", "b"};
  const Dataset raw = parse_csv("a,b\n2,7\n4,7\n6,7\n", c);
  const Dataset d = normalize(raw);
  EXPECT_DOUBLE_EQ(d.tuple(0).scoring[0], 0.0);
  EXPECT_DOUBLE_EQ(d.tuple(1).scoring[0], 0.5);
  EXPECT_DOUBLE_EQ(d.tuple(2).scoring[0], 1.0);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(d.tuple(i).scoring[1], 0.0);
  ASSERT_TRUE(d.normalization().has_value());
  EXPECT_EQ(d.normalization()->constant_columns, (std::vector<std::string>{"b"}));
  EXPECT_EQ(d.normalization()->minimums, (std::vector<double>{2, 7}));
  EXPECT_EQ(d.normalization()->maximums, (std::vector<double>{6, 7}));

  const Dataset twice = normalize(d);
  EXPECT_EQ(dataset_digest(twice), dataset_digest(d));
  EXPECT_EQ(twice.normalization()->minimums, d.normalization()->minimums);
  EXPECT_EQ(twice.normalization()->maximums, d.normalization()->maximums);

  c.normalization = parse_normalization("minmax");
  EXPECT_EQ(dataset_digest(parse_csv("a,b\n2,7\n4,7\n6,7\n", c)), dataset_digest(d));
  expect_code(ErrorCode::kInvalidArgument, [] { parse_normalization("zscore"); });
}

TEST(Digest, SensitiveToValues) {
  IngestConfig c;
  c.scoring_columns = {"a"};
  const std::string a = dataset_digest(parse_csv("a\n1\n2\n", c));
  EXPECT_EQ(a.size(), 16u);
  EXPECT_NE(a, dataset_digest(parse_csv("a\n1\n2.0000001\n", c)));
  EXPECT_EQ(a, dataset_digest(parse_csv("a\n1.0\n2\n", c)));
}

TEST(Report, JsonRoundTrip) {
  UpEstimate up;
  up.up = 0.25;
  up.error = 0.01;
  up.samples = 400;
  up.unfair = 100;
  up.alpha = 0.05;
  const Report r{"up", to_json(up), Json{{"seed", 3}, {"command", "up"}}};
  const std::string text = export_report(r, ReportFormat::kJson);
  EXPECT_EQ(parse_report(text), r);
  EXPECT_EQ(Json::parse(text).at("schema_version"), kSchemaVersion);
  EXPECT_EQ(export_report(parse_report(text), ReportFormat::kJson), text);
}

TEST(Report, FormatErrors) {
  expect_code(ErrorCode::kFormatError, [] { parse_format("xml"); });
  expect_code(ErrorCode::kFormatError, [] { parse_report("{not json"); });
  expect_code(ErrorCode::kFormatError,
              [] { parse_report(R"({"schema_version": 99, "kind": "up", "payload": {}})"); });
  expect_code(ErrorCode::kFormatError,
              [] { export_report({"mystery", Json::object(), Json::object()}, ReportFormat::kCsv); });
}

TEST(Report, CsvTables) {
  const Dataset d = fixtures::example1();
  const Report r{"ranking", ranking_json(rank(d, Vector{1, 1}), d), Json::object()};
  const std::string csv = export_report(r, ReportFormat::kCsv);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "position,id,score,group");
  EXPECT_NE(csv.find("1,t6,1.4,Chicago\n"), std::string::npos);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
}

TEST(Report, ArrangementPayload) {
  RngStream rng(5);
  ApproxArrangement arr = new_arrangement(RegionOfInterest::around(Vector{1, 1}, 0.3), 200, rng);
  arr.insert_hyperplane(Hyperplane{{1, -1}, 0.0, std::nullopt});
  const Json j = to_json(arr);
  EXPECT_EQ(j.at("samples"), 200);
  EXPECT_EQ(j.at("region_count"), arr.region_count());
  std::size_t total = 0;
  for (const Json& region : j.at("regions")) {
    total += region.at("last").get<std::size_t>() - region.at("first").get<std::size_t>() + 1;
  }
  EXPECT_EQ(total, 200u);
}

}  // namespace
}  // namespace fairscore
