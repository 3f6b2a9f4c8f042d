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

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fairscore/geometry.hpp"

namespace fairscore {

struct Tuple {
  std::string id;
  Vector scoring;
  std::map<std::string, std::string> attributes;
  std::optional<std::string> group;
};

// Min-max provenance recorded by normalize().
struct NormalizationInfo {
  std::vector<double> minimums;
  std::vector<double> maximums;
  std::vector<std::string> constant_columns;
};

// Immutable collection of tuples sharing one scoring dimension.
class Dataset {
 public:
  static constexpr int kNoGroup = -1;

  // `declared_groups` extends the sensitive-attribute domain with values that
  // may have no rows (a group that exists but is absent from the data).
  Dataset(std::vector<Tuple> tuples, std::vector<std::string> attribute_names,
          std::optional<std::string> sensitive_attribute = std::nullopt,
          std::vector<std::string> declared_groups = {});

  std::size_t size() const noexcept { return tuples_.size(); }
  std::size_t dimension() const noexcept { return dimension_; }
  const std::vector<Tuple>& tuples() const noexcept { return tuples_; }
  const Tuple& tuple(std::size_t i) const { return tuples_.at(i); }
  std::span<const double> row(std::size_t i) const {
    return {flat_.data() + i * dimension_, dimension_};
  }
  const std::vector<std::string>& attribute_names() const noexcept { return attribute_names_; }
  const std::optional<std::string>& sensitive_attribute() const noexcept { return sensitive_; }

  // Sorted sensitive-attribute domain.
  const std::vector<std::string>& groups() const noexcept { return groups_; }
  std::optional<std::size_t> group_index(std::string_view group) const;
  // Group of tuple i as an index into groups(), or kNoGroup.
  int tuple_group(std::size_t i) const noexcept { return tuple_group_[i]; }

  // Position of tuple i in ascending-id order; the ranking tie-breaker.
  std::uint32_t id_rank(std::size_t i) const noexcept { return id_rank_[i]; }
  std::optional<std::size_t> index_of(std::string_view id) const;

  const std::optional<NormalizationInfo>& normalization() const noexcept { return normalization_; }
  Dataset with_normalization(NormalizationInfo info) const;

 private:
  std::vector<Tuple> tuples_;
  std::vector<std::string> attribute_names_;
  std::optional<std::string> sensitive_;
  std::size_t dimension_ = 0;
  std::vector<double> flat_;
  std::vector<std::string> groups_;
  std::vector<int> tuple_group_;
  std::vector<std::uint32_t> id_rank_;
  std::vector<std::size_t> by_id_;  // tuple indices sorted by id
  std::optional<NormalizationInfo> normalization_;
};

// Tuple indices in descending score order (ties: ascending id). A top-k
// ranking carries only its first k positions.
struct Ranking {
  std::vector<std::size_t> order;
  std::vector<double> scores;

  std::vector<std::string> ids(const Dataset& data) const;
  bool operator==(const Ranking& other) const { return order == other.order; }
};

struct FairnessConstraint {
  std::string group;
  std::size_t k = 0;
  std::size_t min_count = 0;
  std::size_t max_count = 0;

  void validate() const;
};

// "GROUP:K:MIN[:MAX]"; MAX defaults to K.
FairnessConstraint parse_constraint(std::string_view text);

double score(std::span<const double> w, const Tuple& t);
Ranking rank(const Dataset& data, std::span<const double> w);
// Only the first min(k, n) positions, via partial selection.
Ranking rank_top(const Dataset& data, std::span<const double> w, std::size_t k);

bool check_fairness(const Ranking& r, const Dataset& data,
                    std::span<const FairnessConstraint> constraints);

// Count of each group among the first k ranked tuples.
std::map<std::string, std::size_t> group_counts(const Ranking& r, const Dataset& data,
                                                std::size_t k);

// Hyperplane sum_k (t_i[k] - t_j[k]) x_k = 0; positive side ranks t_i higher.
Hyperplane ordering_exchange(const Tuple& ti, const Tuple& tj);

// Constraints resolved against one dataset for repeated evaluation.
class FairnessChecker {
 public:
  FairnessChecker(const Dataset& data, std::span<const FairnessConstraint> constraints);

  // Prefix length a ranking needs for satisfied() (largest k, capped at n).
  std::size_t depth() const noexcept { return depth_; }
  bool empty() const noexcept { return rules_.empty(); }
  bool satisfied(std::span<const std::size_t> order) const;

 private:
  struct Rule {
    int group;
    std::size_t k;
    std::size_t min_count;
    std::size_t max_count;
  };
  const Dataset* data_;
  std::vector<Rule> rules_;
  std::size_t depth_ = 0;
};

// Reusable buffers for ranking many weight vectors against one dataset.
class Ranker {
 public:
  explicit Ranker(const Dataset& data);

  // Ranks by w; keeps the first `depth` positions sorted (all when depth >= n).
  std::span<const std::size_t> rank(std::span<const double> w, std::size_t depth);
  std::span<const double> scores() const noexcept { return scores_; }

 private:
  const Dataset* data_;
  std::vector<double> scores_;
  std::vector<std::size_t> order_;
};

}  // namespace fairscore
