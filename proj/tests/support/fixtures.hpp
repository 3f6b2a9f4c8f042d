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

#include <string>
#include <vector>

#include "arc_oracle.hpp"
#include "fairscore/scoring.hpp"

namespace fixtures {

inline fairscore::Dataset from_rows(const std::vector<oracle::Row>& rows,
                                    std::vector<std::string> declared_groups = {}) {
  std::vector<fairscore::Tuple> tuples;
  for (const oracle::Row& r : rows) {
    fairscore::Tuple t;
    t.id = r.id;
    t.scoring = {r.x1, r.x2};
    t.attributes["location"] = r.group;
    tuples.push_back(std::move(t));
  }
  return fairscore::Dataset(std::move(tuples), {"x1", "x2"}, "location",
                            std::move(declared_groups));
}

inline fairscore::Dataset example1(std::vector<std::string> declared_groups = {}) {
  return from_rows(oracle::example1(), std::move(declared_groups));
}

inline std::vector<std::string> ids(const fairscore::Ranking& r, const fairscore::Dataset& d) {
  return r.ids(d);
}

}  // namespace fixtures
