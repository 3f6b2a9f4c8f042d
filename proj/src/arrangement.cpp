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

#include "fairscore/arrangement.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "fairscore/error.hpp"

namespace fairscore {

namespace {

inline double row_dot(const double* p, const double* h, std::size_t d) {
  double acc = 0.0;
  for (std::size_t k = 0; k < d; ++k) acc += p[k] * h[k];
  return acc;
}

}  // namespace

std::ptrdiff_t partition_samples(std::span<double> points, std::size_t d,
                                 std::span<const double> h, std::size_t first, std::size_t last,
                                 std::span<std::uint32_t> tags) {
  if (h.size() != d || d == 0) {
    throw Error(ErrorCode::kDimensionMismatch, "hyperplane dimension does not match samples");
  }
  const std::size_t rows = points.size() / d;
  if (first > last || last >= rows || (!tags.empty() && tags.size() != rows)) {
    throw Error(ErrorCode::kInvalidArgument, "partition range out of bounds");
  }
  double* base = points.data();
  const double* hp = h.data();
  auto negative = [&](std::ptrdiff_t row) { return row_dot(base + row * d, hp, d) < 0.0; };

  // Two-pointer scan over contiguous rows: every sample's side is evaluated
  // exactly once and memory is walked from both ends sequentially.
  std::ptrdiff_t i = static_cast<std::ptrdiff_t>(first);
  std::ptrdiff_t j = static_cast<std::ptrdiff_t>(last);
  while (true) {
    while (i <= j && negative(i)) ++i;
    while (i < j && !negative(j)) --j;
    if (i >= j) break;
    std::swap_ranges(base + i * d, base + (i + 1) * d, base + j * d);
    if (!tags.empty()) std::swap(tags[i], tags[j]);
    ++i;
    --j;
  }
  return i - 1;
}

ApproxArrangement::ApproxArrangement(RegionOfInterest roi, std::vector<Vector> samples)
    : ApproxArrangement(roi, [&] {
        const std::size_t d = roi.dimension();
        std::vector<double> flat;
        flat.reserve(samples.size() * d);
        for (const Vector& p : samples) {
          if (p.size() != d) {
            throw Error(ErrorCode::kDimensionMismatch,
                        "sample has dimension " + std::to_string(p.size()) + ", expected " +
                            std::to_string(d));
          }
          flat.insert(flat.end(), p.begin(), p.end());
        }
        return flat;
      }()) {}

ApproxArrangement::ApproxArrangement(RegionOfInterest roi, std::vector<double> flat_samples)
    : roi_(std::move(roi)), dimension_(roi_.dimension()), points_(std::move(flat_samples)) {
  if (points_.empty() || points_.size() % dimension_ != 0) {
    throw Error(ErrorCode::kInvalidArgument, "need at least one sample of dimension " +
                                                 std::to_string(dimension_));
  }
  const std::size_t s = points_.size() / dimension_;
  if (s > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::kInvalidArgument, "too many samples");
  }
  draw_.resize(s);
  std::iota(draw_.begin(), draw_.end(), std::uint32_t{0});
  regions_.push_back({0, s - 1, {}});
  nodes_.push_back({});
  leaf_of_region_.push_back(0);
}

std::span<const double> ApproxArrangement::sample(std::size_t position) const {
  if (position >= draw_.size()) throw Error(ErrorCode::kInvalidArgument, "sample position out of range");
  return {points_.data() + position * dimension_, dimension_};
}

std::size_t ApproxArrangement::insert_hyperplane(const Hyperplane& h) {
  if (h.dimension() != dimension_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "hyperplane has dimension " + std::to_string(h.dimension()) + ", expected " +
                    std::to_string(dimension_));
  }
  if (h.offset != 0.0) {
    throw Error(ErrorCode::kInvalidHyperplane, "only origin-through hyperplanes are supported");
  }
  const std::size_t plane = hyperplanes_.size();
  hyperplanes_.push_back(h);

  std::size_t splits = 0;
  const std::size_t existing = regions_.size();
  for (std::size_t r = 0; r < existing; ++r) {
    const std::size_t f = regions_[r].first;
    const std::size_t l = regions_[r].last;
    const std::ptrdiff_t i = partition_samples(points_, dimension_, h.coeffs, f, l, draw_);
    if (i == static_cast<std::ptrdiff_t>(f) - 1 || i == static_cast<std::ptrdiff_t>(l)) {
      // h misses the region: record the side shared by all its samples.
      regions_[r].signature.push_back(i != static_cast<std::ptrdiff_t>(l));
      continue;
    }
    const std::size_t split = static_cast<std::size_t>(i);
    Region right{split + 1, l, regions_[r].signature};
    right.signature.push_back(true);
    regions_[r].last = split;
    regions_[r].signature.push_back(false);
    regions_.push_back(std::move(right));

    const std::size_t node = leaf_of_region_[r];
    const std::size_t neg_leaf = nodes_.size();
    nodes_.push_back({0, 0, 0, r, true});
    const std::size_t pos_leaf = nodes_.size();
    nodes_.push_back({0, 0, 0, regions_.size() - 1, true});
    nodes_[node] = {plane, neg_leaf, pos_leaf, 0, false};
    leaf_of_region_[r] = neg_leaf;
    leaf_of_region_.push_back(pos_leaf);
    ++splits;
  }
  return splits;
}

std::vector<RegionVolume> ApproxArrangement::regions() const {
  const double s = static_cast<double>(draw_.size());
  std::vector<RegionVolume> out;
  out.reserve(regions_.size());
  for (const Region& r : regions_) out.push_back({r, static_cast<double>(r.size()) / s});
  std::sort(out.begin(), out.end(), [](const RegionVolume& a, const RegionVolume& b) {
    return a.region.first < b.region.first;
  });
  return out;
}

const Region& ApproxArrangement::region_of(std::span<const double> w) const {
  if (w.size() != dimension_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "vector has dimension " + std::to_string(w.size()) + ", expected " +
                    std::to_string(dimension_));
  }
  std::size_t node = 0;
  while (!nodes_[node].leaf) {
    const Node& n = nodes_[node];
    node = dot(hyperplanes_[n.plane].coeffs, w) < 0.0 ? n.negative : n.non_negative;
  }
  const Region& region = regions_[nodes_[node].region];
  for (std::size_t p = 0; p < hyperplanes_.size(); ++p) {
    if ((dot(hyperplanes_[p].coeffs, w) >= 0.0) != region.signature[p]) {
      throw Error(ErrorCode::kRegionNotMaterialized,
                  "no sample fell in the cell containing this vector");
    }
  }
  return region;
}

ApproxArrangement new_arrangement(const RegionOfInterest& roi, std::size_t s, RngStream& rng,
                                  std::size_t gamma) {
  if (s < 1) throw Error(ErrorCode::kInvalidArgument, "need at least one sample");
  roi.validate();
  const CapSampler sampler(roi, gamma);
  const std::size_t d = roi.dimension();
  std::vector<double> flat(s * d);
  for (std::size_t i = 0; i < s; ++i) {
    sampler.sample_into(rng, std::span<double>(flat.data() + i * d, d));
  }
  return ApproxArrangement(roi, std::move(flat));
}

}  // namespace fairscore
