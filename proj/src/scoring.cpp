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

#include "fairscore/scoring.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>

#include "fairscore/error.hpp"

namespace fairscore {

Dataset::Dataset(std::vector<Tuple> tuples, std::vector<std::string> attribute_names,
                 std::optional<std::string> sensitive_attribute,
                 std::vector<std::string> declared_groups)
    : tuples_(std::move(tuples)),
      attribute_names_(std::move(attribute_names)),
      sensitive_(std::move(sensitive_attribute)) {
  if (tuples_.empty()) throw Error(ErrorCode::kEmptyDataset, "dataset has no tuples");
  dimension_ = tuples_.front().scoring.size();
  if (dimension_ == 0) throw Error(ErrorCode::kInvalidDimension, "tuples have no scoring attributes");
  if (!attribute_names_.empty() && attribute_names_.size() != dimension_) {
    throw Error(ErrorCode::kDimensionMismatch, "attribute names do not match dimension");
  }

  const std::size_t n = tuples_.size();
  flat_.reserve(n * dimension_);
  std::set<std::string> domain(declared_groups.begin(), declared_groups.end());
  for (Tuple& t : tuples_) {
    if (t.scoring.size() != dimension_) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "tuple '" + t.id + "' has " + std::to_string(t.scoring.size()) +
                      " scoring attributes, expected " + std::to_string(dimension_));
    }
    for (double x : t.scoring) {
      if (!std::isfinite(x)) {
        throw Error(ErrorCode::kInvalidArgument, "tuple '" + t.id + "' has a non-finite value");
      }
      flat_.push_back(x);
    }
    if (!t.group && sensitive_) {
      if (auto it = t.attributes.find(*sensitive_); it != t.attributes.end()) t.group = it->second;
    }
    if (t.group) domain.insert(*t.group);
  }
  groups_.assign(domain.begin(), domain.end());

  tuple_group_.resize(n, kNoGroup);
  for (std::size_t i = 0; i < n; ++i) {
    if (tuples_[i].group) tuple_group_[i] = static_cast<int>(*group_index(*tuples_[i].group));
  }

  by_id_.resize(n);
  std::iota(by_id_.begin(), by_id_.end(), std::size_t{0});
  std::sort(by_id_.begin(), by_id_.end(),
            [this](std::size_t a, std::size_t b) { return tuples_[a].id < tuples_[b].id; });
  id_rank_.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    if (r > 0 && tuples_[by_id_[r]].id == tuples_[by_id_[r - 1]].id) {
      throw Error(ErrorCode::kSchemaError, "duplicate tuple id '" + tuples_[by_id_[r]].id + "'");
    }
    id_rank_[by_id_[r]] = static_cast<std::uint32_t>(r);
  }
}

std::optional<std::size_t> Dataset::group_index(std::string_view group) const {
  const auto it = std::lower_bound(groups_.begin(), groups_.end(), group);
  if (it == groups_.end() || *it != group) return std::nullopt;
  return static_cast<std::size_t>(it - groups_.begin());
}

std::optional<std::size_t> Dataset::index_of(std::string_view id) const {
  const auto it = std::lower_bound(by_id_.begin(), by_id_.end(), id,
                                   [this](std::size_t i, std::string_view v) {
                                     return tuples_[i].id < v;
                                   });
  if (it == by_id_.end() || tuples_[*it].id != id) return std::nullopt;
  return *it;
}

Dataset Dataset::with_normalization(NormalizationInfo info) const {
  Dataset copy = *this;
  copy.normalization_ = std::move(info);
  return copy;
}

std::vector<std::string> Ranking::ids(const Dataset& data) const {
  std::vector<std::string> out;
  out.reserve(order.size());
  for (std::size_t i : order) out.push_back(data.tuple(i).id);
  return out;
}

void FairnessConstraint::validate() const {
  if (group.empty()) throw Error(ErrorCode::kInvalidConstraint, "constraint group is empty");
  if (k < 1) throw Error(ErrorCode::kInvalidConstraint, "k must be at least 1");
  if (min_count > max_count || max_count > k) {
    throw Error(ErrorCode::kInvalidConstraint,
                "need min <= max <= k for group '" + group + "'");
  }
}

FairnessConstraint parse_constraint(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(':', start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  if (parts.size() < 3 || parts.size() > 4) {
    throw Error(ErrorCode::kInvalidConstraint,
                "expected GROUP:K:MIN[:MAX], got '" + std::string(text) + "'");
  }
  auto number = [&](std::string_view field) {
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
      throw Error(ErrorCode::kInvalidConstraint,
                  "'" + std::string(field) + "' is not a non-negative integer");
    }
    return value;
  };
  FairnessConstraint c;
  c.group = std::string(parts[0]);
  c.k = number(parts[1]);
  c.min_count = number(parts[2]);
  c.max_count = parts.size() == 4 ? number(parts[3]) : c.k;
  c.validate();
  return c;
}

double score(std::span<const double> w, const Tuple& t) {
  if (w.size() != t.scoring.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "weights have " + std::to_string(w.size()) + " entries, tuple '" + t.id +
                    "' has " + std::to_string(t.scoring.size()));
  }
  return dot(w, t.scoring);
}

Ranker::Ranker(const Dataset& data)
    : data_(&data), scores_(data.size()), order_(data.size()) {}

std::span<const std::size_t> Ranker::rank(std::span<const double> w, std::size_t depth) {
  const Dataset& data = *data_;
  const std::size_t d = data.dimension();
  if (w.size() != d) {
    throw Error(ErrorCode::kDimensionMismatch,
                "weights have " + std::to_string(w.size()) + " entries, dataset has d=" +
                    std::to_string(d));
  }
  const std::size_t n = data.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = data.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < d; ++j) acc += w[j] * row[j];
    scores_[i] = acc;
  }
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  // Exact comparison: equal scores fall through to the id order.
  auto before = [this, &data](std::size_t a, std::size_t b) {
    if (scores_[a] != scores_[b]) return scores_[a] > scores_[b];
    return data.id_rank(a) < data.id_rank(b);
  };
  if (depth >= n) {
    std::sort(order_.begin(), order_.end(), before);
    return order_;
  }
  if (depth == 0) return {};
  std::nth_element(order_.begin(), order_.begin() + static_cast<std::ptrdiff_t>(depth - 1),
                   order_.end(), before);
  std::sort(order_.begin(), order_.begin() + static_cast<std::ptrdiff_t>(depth), before);
  return {order_.data(), depth};
}

namespace {

Ranking to_ranking(Ranker& ranker, std::span<const std::size_t> order) {
  Ranking r;
  r.order.assign(order.begin(), order.end());
  r.scores.reserve(order.size());
  for (std::size_t i : order) r.scores.push_back(ranker.scores()[i]);
  return r;
}

}  // namespace

Ranking rank(const Dataset& data, std::span<const double> w) {
  Ranker ranker(data);
  const auto order = ranker.rank(w, data.size());
  return to_ranking(ranker, order);
}

Ranking rank_top(const Dataset& data, std::span<const double> w, std::size_t k) {
  Ranker ranker(data);
  const auto order = ranker.rank(w, std::min(k, data.size()));
  return to_ranking(ranker, order);
}

FairnessChecker::FairnessChecker(const Dataset& data,
                                 std::span<const FairnessConstraint> constraints)
    : data_(&data) {
  for (const FairnessConstraint& c : constraints) {
    c.validate();
    const auto g = data.group_index(c.group);
    if (!g) {
      throw Error(ErrorCode::kUnknownGroup,
                  "group '" + c.group + "' is not in the sensitive attribute domain");
    }
    rules_.push_back({static_cast<int>(*g), c.k, c.min_count, c.max_count});
    depth_ = std::max(depth_, std::min(c.k, data.size()));
  }
}

bool FairnessChecker::satisfied(std::span<const std::size_t> order) const {
  if (order.size() < depth_) {
    throw Error(ErrorCode::kInvalidArgument,
                "ranking has " + std::to_string(order.size()) + " positions, constraints need " +
                    std::to_string(depth_));
  }
  for (const Rule& rule : rules_) {
    const std::size_t top = std::min(rule.k, order.size());
    std::size_t count = 0;
    for (std::size_t p = 0; p < top; ++p) {
      if (data_->tuple_group(order[p]) == rule.group) ++count;
    }
    if (count < rule.min_count || count > rule.max_count) return false;
  }
  return true;
}

bool check_fairness(const Ranking& r, const Dataset& data,
                    std::span<const FairnessConstraint> constraints) {
  return FairnessChecker(data, constraints).satisfied(r.order);
}

std::map<std::string, std::size_t> group_counts(const Ranking& r, const Dataset& data,
                                                std::size_t k) {
  std::map<std::string, std::size_t> counts;
  for (const std::string& g : data.groups()) counts[g] = 0;
  const std::size_t top = std::min(k, r.order.size());
  for (std::size_t p = 0; p < top; ++p) {
    const Tuple& t = data.tuple(r.order[p]);
    if (t.group) ++counts[*t.group];
  }
  return counts;
}

Hyperplane ordering_exchange(const Tuple& ti, const Tuple& tj) {
  if (ti.scoring.size() != tj.scoring.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "tuples differ in dimension");
  }
  Hyperplane h;
  h.coeffs.resize(ti.scoring.size());
  bool all_zero = true;
  for (std::size_t k = 0; k < h.coeffs.size(); ++k) {
    h.coeffs[k] = ti.scoring[k] - tj.scoring[k];
    all_zero = all_zero && h.coeffs[k] == 0.0;
  }
  if (all_zero) {
    throw Error(ErrorCode::kDegenerateExchange,
                "tuples '" + ti.id + "' and '" + tj.id + "' have identical scoring vectors");
  }
  h.offset = 0.0;
  h.label = std::make_pair(ti.id, tj.id);
  return h;
}

}  // namespace fairscore
