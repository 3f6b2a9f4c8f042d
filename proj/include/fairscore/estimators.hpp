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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairscore/geometry.hpp"
#include "fairscore/rng.hpp"
#include "fairscore/sampler.hpp"
#include "fairscore/scoring.hpp"

namespace fairscore {

// Samples are drawn in fixed-size chunks, chunk c from sub-stream c of a base
// stream taken from the caller's RngStream. Results therefore depend on the
// seed only, not on the number of worker threads.
inline constexpr std::size_t kSampleChunk = 1024;

struct RunOptions {
  std::size_t threads = 1;
  std::size_t gamma = kDefaultGamma;
  // Called with (samples done, total) after each chunk; may run on any worker.
  std::function<void(std::size_t, std::size_t)> progress;
};

struct UpEstimate {
  double up = 0.0;     // unfair fraction of sampled functions
  double error = 0.0;  // half-width of the (1 - alpha) confidence interval
  double alpha = 0.05;
  std::size_t samples = 0;
  std::size_t unfair = 0;
};

// Which part of a ranking identifies it: the full order, the top-k order, or
// the top-k set (ids sorted).
struct RankingScope {
  enum class Kind { kFull, kTopK };
  Kind kind = Kind::kFull;
  std::size_t k = 0;
  bool as_set = true;  // top-k only

  static RankingScope full() { return {}; }
  static RankingScope top_k(std::size_t k, bool as_set = true) {
    return {Kind::kTopK, k, as_set};
  }
  std::size_t depth(std::size_t n) const { return kind == Kind::kFull ? n : std::min(k, n); }
  std::string name() const;
};

// 128-bit order-sensitive hash of a ranking's tuple ids under a scope.
struct Fingerprint {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;

  std::string hex() const;
  auto operator<=>(const Fingerprint&) const = default;
};

Fingerprint fingerprint(const Dataset& data, std::span<const std::size_t> order,
                        const RankingScope& scope);

struct AuditResult {
  double stability = 0.0;
  double error = 0.0;
  double alpha = 0.05;
  std::size_t samples = 0;
  std::size_t hits = 0;
  RankingScope scope;
  Ranking reference_ranking;
};

struct RankingStability {
  Fingerprint fingerprint;
  std::size_t count = 0;
  double stability = 0.0;
  double error = 0.0;
  Vector exemplar;  // the lowest-index sample that produced this ranking
  Ranking ranking;  // under the scope (top-k positions only for top-k scope)
};

struct StabilityReport {
  RankingScope scope;
  std::size_t total_samples = 0;
  double alpha = 0.05;
  // Every distinct ranking, by count descending then fingerprint ascending.
  std::vector<std::pair<Fingerprint, std::size_t>> histogram;
  std::vector<RankingStability> top_rankings;
  // The ranking of the region's centre function.
  Fingerprint reference_fingerprint;
  double reference_stability = 0.0;
  double reference_error = 0.0;
  std::optional<std::size_t> reference_position;  // index into histogram
};

enum class SuggestMode { kClosest, kFirstHit };

struct Suggestion {
  bool found = false;
  std::optional<Vector> function;
  std::size_t samples_used = 0;
  double angular_gap = 0.0;
  std::optional<Ranking> ranking;
};

// Z(1 - alpha/2) * sqrt(mean (1 - mean) / s).
double confidence_error(double mean, std::size_t s, double alpha);

UpEstimate estimate_up(const Dataset& data, std::span<const FairnessConstraint> constraints,
                       const RegionOfInterest& roi, std::size_t s, double alpha, RngStream& rng,
                       const RunOptions& options = {});

Suggestion suggest_fair(const Dataset& data, std::span<const FairnessConstraint> constraints,
                        const RegionOfInterest& roi, std::size_t budget, RngStream& rng,
                        SuggestMode mode = SuggestMode::kClosest,
                        const RunOptions& options = {});

AuditResult audit_reference(const Dataset& data, std::span<const double> reference,
                            const RegionOfInterest& roi, std::size_t s, double alpha,
                            RngStream& rng, const RankingScope& scope = RankingScope::full(),
                            const RunOptions& options = {});

StabilityReport stable_rankings(const Dataset& data, const RegionOfInterest& roi, std::size_t s,
                                std::size_t top_m, const RankingScope& scope, RngStream& rng,
                                double alpha = 0.05, const RunOptions& options = {});

}  // namespace fairscore
