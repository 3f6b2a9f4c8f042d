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

#include "fairscore/estimators.hpp"

#include <algorithm>
#include <bit>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>

#include "chunked_sampling.hpp"
#include "fairscore/error.hpp"

namespace fairscore {

namespace {

constexpr std::size_t kMinMonteCarloSamples = 30;
// Slack for reference-inside-region checks on vectors that sit exactly on the
// cap boundary.
constexpr double kBoundaryTolerance = 1e-12;

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

class FingerprintHasher {
 public:
  explicit FingerprintHasher(const Dataset& data) : data_(&data), id_hash_(data.size()) {
    for (std::size_t i = 0; i < data.size(); ++i) id_hash_[i] = fnv1a(data.tuple(i).id);
  }

  Fingerprint operator()(std::span<const std::size_t> order, const RankingScope& scope) {
    const std::size_t depth = std::min(scope.depth(data_->size()), order.size());
    std::span<const std::size_t> prefix = order.first(depth);
    if (scope.kind == RankingScope::Kind::kTopK && scope.as_set) {
      scratch_.assign(prefix.begin(), prefix.end());
      std::sort(scratch_.begin(), scratch_.end(), [this](std::size_t a, std::size_t b) {
        return data_->id_rank(a) < data_->id_rank(b);
      });
      prefix = scratch_;
    }
    Fingerprint fp{0x13198a2e03707344ULL, 0x243f6a8885a308d3ULL};
    for (std::size_t i : prefix) {
      const std::uint64_t h = id_hash_[i];
      fp.lo = mix64(fp.lo ^ h);
      fp.hi = mix64(fp.hi + std::rotl(h, 29) + 0x9e3779b97f4a7c15ULL);
    }
    fp.lo = mix64(fp.lo ^ prefix.size());
    fp.hi = mix64(fp.hi ^ (prefix.size() << 1));
    return fp;
  }

 private:
  const Dataset* data_;
  std::vector<std::uint64_t> id_hash_;
  std::vector<std::size_t> scratch_;
};

void require_samples(std::size_t s) {
  if (s < kMinMonteCarloSamples) {
    throw Error(ErrorCode::kInvalidArgument,
                "need at least " + std::to_string(kMinMonteCarloSamples) +
                    " samples for the normal approximation, got " + std::to_string(s));
  }
}

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::kInvalidConfidence, "alpha must lie in (0, 1)");
  }
}

void require_region_dimension(const Dataset& data, const RegionOfInterest& roi) {
  roi.validate();
  if (roi.dimension() != data.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "region has d=" + std::to_string(roi.dimension()) + ", dataset has d=" +
                    std::to_string(data.dimension()));
  }
}

// Same-scope comparison of a sampled order with the reference prefix.
bool same_ranking(std::span<const std::size_t> order, std::span<const std::size_t> reference,
                  const RankingScope& scope, const Dataset& data,
                  std::vector<std::size_t>& scratch) {
  if (scope.kind == RankingScope::Kind::kTopK && scope.as_set) {
    scratch.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(reference.size()));
    std::sort(scratch.begin(), scratch.end(),
              [&data](std::size_t a, std::size_t b) { return data.id_rank(a) < data.id_rank(b); });
    return std::equal(scratch.begin(), scratch.end(), reference.begin());
  }
  return std::equal(reference.begin(), reference.end(), order.begin());
}

Ranking scoped_ranking(const Dataset& data, std::span<const double> w, const RankingScope& scope) {
  return scope.kind == RankingScope::Kind::kFull ? rank(data, w)
                                                 : rank_top(data, w, scope.depth(data.size()));
}

}  // namespace

std::string RankingScope::name() const {
  if (kind == Kind::kFull) return "full";
  return (as_set ? "topk-set:" : "topk-order:") + std::to_string(k);
}

std::string Fingerprint::hex() const {
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(hi),
                static_cast<unsigned long long>(lo));
  return buf;
}

Fingerprint fingerprint(const Dataset& data, std::span<const std::size_t> order,
                        const RankingScope& scope) {
  FingerprintHasher hasher(data);
  return hasher(order, scope);
}

double confidence_error(double mean, std::size_t s, double alpha) {
  require_alpha(alpha);
  if (!(mean >= 0.0 && mean <= 1.0)) {
    throw Error(ErrorCode::kInvalidProbability, "mean must lie in [0, 1]");
  }
  if (s < 1) throw Error(ErrorCode::kInvalidArgument, "sample count must be positive");
  const boost::math::normal standard;
  const double z = boost::math::quantile(standard, 1.0 - alpha / 2.0);
  return z * std::sqrt(mean * (1.0 - mean) / static_cast<double>(s));
}

UpEstimate estimate_up(const Dataset& data, std::span<const FairnessConstraint> constraints,
                       const RegionOfInterest& roi, std::size_t s, double alpha, RngStream& rng,
                       const RunOptions& options) {
  require_samples(s);
  require_alpha(alpha);
  require_region_dimension(data, roi);
  const FairnessChecker checker(data, constraints);
  const CapSampler sampler(roi, options.gamma);

  const auto counts = detail::sample_in_chunks<Ranker, std::size_t>(
      sampler, rng, s, options, [&data] { return Ranker(data); },
      [&checker](Ranker& ranker, std::size_t& unfair, std::size_t, std::span<const double> w) {
        const auto order = ranker.rank(w, checker.depth());
        if (!checker.satisfied(order)) ++unfair;
      });

  UpEstimate out;
  out.alpha = alpha;
  out.samples = s;
  for (std::size_t c : counts) out.unfair += c;
  out.up = static_cast<double>(out.unfair) / static_cast<double>(s);
  out.error = confidence_error(out.up, s, alpha);
  return out;
}

Suggestion suggest_fair(const Dataset& data, std::span<const FairnessConstraint> constraints,
                        const RegionOfInterest& roi, std::size_t budget, RngStream& rng,
                        SuggestMode mode, const RunOptions& options) {
  if (budget < 1) throw Error(ErrorCode::kInvalidArgument, "budget must be at least 1");
  require_region_dimension(data, roi);
  const FairnessChecker checker(data, constraints);
  const CapSampler sampler(roi, options.gamma);
  const Vector center = roi.center();

  struct Best {
    std::size_t index = std::numeric_limits<std::size_t>::max();
    double gap = std::numeric_limits<double>::infinity();
    Vector w;
  };
  auto better = [](const Best& a, const Best& b) {
    return a.gap < b.gap || (a.gap == b.gap && a.index < b.index);
  };

  Best best;
  if (mode == SuggestMode::kFirstHit) {
    // Same sample sequence as the chunked path, walked in index order.
    const RngStream base(rng.next_u64());
    Ranker ranker(data);
    Vector w(sampler.dimension());
    std::optional<RngStream> stream;
    for (std::size_t i = 0; i < budget && best.w.empty(); ++i) {
      if (i % kSampleChunk == 0) stream = base.split(i / kSampleChunk);
      sampler.sample_into(*stream, w);
      if (checker.satisfied(ranker.rank(w, checker.depth()))) {
        best = {i, angular_distance(w, center), w};
      }
      if (options.progress && (i + 1) % kSampleChunk == 0) options.progress(i + 1, budget);
    }
  } else {
    const auto chunk_best = detail::sample_in_chunks<Ranker, Best>(
        sampler, rng, budget, options, [&data] { return Ranker(data); },
        [&](Ranker& ranker, Best& local, std::size_t i, std::span<const double> w) {
          if (!checker.satisfied(ranker.rank(w, checker.depth()))) return;
          Best candidate{i, angular_distance(w, center), {}};
          if (better(candidate, local)) {
            candidate.w.assign(w.begin(), w.end());
            local = std::move(candidate);
          }
        });
    for (const Best& b : chunk_best) {
      if (!b.w.empty() && better(b, best)) best = b;
    }
  }

  Suggestion out;
  if (best.w.empty()) {
    out.samples_used = budget;
    return out;
  }
  Ranking ranking = rank(data, best.w);
  if (!check_fairness(ranking, data, constraints)) {
    // Sampled rankings and the full re-rank use identical comparisons.
    throw Error(ErrorCode::kInvalidArgument, "internal: suggested function failed re-verification");
  }
  out.found = true;
  out.function = best.w;
  out.samples_used = mode == SuggestMode::kFirstHit ? best.index + 1 : budget;
  out.angular_gap = best.gap;
  out.ranking = std::move(ranking);
  return out;
}

AuditResult audit_reference(const Dataset& data, std::span<const double> reference,
                            const RegionOfInterest& roi, std::size_t s, double alpha,
                            RngStream& rng, const RankingScope& scope,
                            const RunOptions& options) {
  require_samples(s);
  require_alpha(alpha);
  require_region_dimension(data, roi);
  if (reference.size() != data.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch, "reference weights and dataset differ in dimension");
  }
  const double gap = angular_distance(reference, roi.center());
  if (gap > roi.theta + kBoundaryTolerance) {
    throw Error(ErrorCode::kReferenceOutsideRegion,
                "reference is " + std::to_string(gap) + " rad from the ray, theta is " +
                    std::to_string(roi.theta));
  }

  AuditResult out;
  out.alpha = alpha;
  out.samples = s;
  out.scope = scope;
  out.reference_ranking = scoped_ranking(data, reference, scope);
  std::vector<std::size_t> expected = out.reference_ranking.order;
  if (scope.kind == RankingScope::Kind::kTopK && scope.as_set) {
    std::sort(expected.begin(), expected.end(),
              [&data](std::size_t a, std::size_t b) { return data.id_rank(a) < data.id_rank(b); });
  }
  const std::size_t depth = expected.size();
  const CapSampler sampler(roi, options.gamma);

  struct Context {
    Ranker ranker;
    std::vector<std::size_t> scratch;
  };
  const auto hits = detail::sample_in_chunks<Context, std::size_t>(
      sampler, rng, s, options, [&data] { return Context{Ranker(data), {}}; },
      [&](Context& ctx, std::size_t& count, std::size_t, std::span<const double> w) {
        const auto order = ctx.ranker.rank(w, depth);
        if (same_ranking(order, expected, scope, data, ctx.scratch)) ++count;
      });
  for (std::size_t h : hits) out.hits += h;
  out.stability = static_cast<double>(out.hits) / static_cast<double>(s);
  out.error = confidence_error(out.stability, s, alpha);
  return out;
}

StabilityReport stable_rankings(const Dataset& data, const RegionOfInterest& roi, std::size_t s,
                                std::size_t top_m, const RankingScope& scope, RngStream& rng,
                                double alpha, const RunOptions& options) {
  require_samples(s);
  require_alpha(alpha);
  require_region_dimension(data, roi);
  if (scope.kind == RankingScope::Kind::kTopK && scope.k < 1) {
    throw Error(ErrorCode::kInvalidArgument, "top-k scope needs k >= 1");
  }
  const std::size_t depth = scope.depth(data.size());
  const CapSampler sampler(roi, options.gamma);

  struct Entry {
    std::size_t count = 0;
    std::size_t first_index = std::numeric_limits<std::size_t>::max();
    Vector exemplar;
  };
  using Histogram = std::map<Fingerprint, Entry>;
  struct Context {
    Ranker ranker;
    FingerprintHasher hasher;
  };

  const auto partial = detail::sample_in_chunks<Context, Histogram>(
      sampler, rng, s, options, [&data] { return Context{Ranker(data), FingerprintHasher(data)}; },
      [&](Context& ctx, Histogram& hist, std::size_t i, std::span<const double> w) {
        const auto order = ctx.ranker.rank(w, depth);
        Entry& e = hist[ctx.hasher(order, scope)];
        if (e.count++ == 0) {
          e.first_index = i;
          e.exemplar.assign(w.begin(), w.end());
        }
      });

  Histogram merged;
  for (const Histogram& hist : partial) {
    for (const auto& [fp, e] : hist) {
      Entry& m = merged[fp];
      m.count += e.count;
      if (e.first_index < m.first_index) {
        m.first_index = e.first_index;
        m.exemplar = e.exemplar;
      }
    }
  }

  StabilityReport report;
  report.scope = scope;
  report.total_samples = s;
  report.alpha = alpha;
  report.histogram.reserve(merged.size());
  for (const auto& [fp, e] : merged) report.histogram.emplace_back(fp, e.count);
  std::stable_sort(report.histogram.begin(), report.histogram.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  const double total = static_cast<double>(s);
  const std::size_t shown = std::min(top_m, report.histogram.size());
  for (std::size_t p = 0; p < shown; ++p) {
    const auto& [fp, count] = report.histogram[p];
    const Entry& e = merged.at(fp);
    RankingStability item;
    item.fingerprint = fp;
    item.count = count;
    item.stability = static_cast<double>(count) / total;
    item.error = confidence_error(item.stability, s, alpha);
    item.exemplar = e.exemplar;
    item.ranking = scoped_ranking(data, e.exemplar, scope);
    report.top_rankings.push_back(std::move(item));
  }

  const Vector center = roi.center();
  report.reference_fingerprint = fingerprint(data, scoped_ranking(data, center, scope).order, scope);
  for (std::size_t p = 0; p < report.histogram.size(); ++p) {
    if (report.histogram[p].first == report.reference_fingerprint) {
      report.reference_position = p;
      report.reference_stability = static_cast<double>(report.histogram[p].second) / total;
      break;
    }
  }
  report.reference_error = confidence_error(report.reference_stability, s, alpha);
  return report;
}

}  // namespace fairscore
