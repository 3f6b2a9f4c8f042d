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
#include <span>
#include <vector>

#include "fairscore/geometry.hpp"
#include "fairscore/rng.hpp"
#include "fairscore/sampler.hpp"

namespace fairscore {

// A cell of the approximate arrangement: the contiguous run [first, last] of
// the sample array, plus its side of every inserted hyperplane (true for the
// non-negative side).
struct Region {
  std::size_t first = 0;
  std::size_t last = 0;
  std::vector<bool> signature;

  std::size_t size() const noexcept { return last - first + 1; }
};

struct RegionVolume {
  Region region;
  double volume = 0.0;  // sample share, (last - first + 1) / s
};

// Reorders rows [first, last] of the row-major d-column array `points` in
// place so rows with h . p < 0 come first; `tags`, when given, is permuted
// alongside (one entry per row). Returns the position of the last negative
// row, i.e. first - 1 when there is none and last when all are negative.
std::ptrdiff_t partition_samples(std::span<double> points, std::size_t d,
                                 std::span<const double> h, std::size_t first, std::size_t last,
                                 std::span<std::uint32_t> tags = {});

// Sample-based approximation of the arrangement of origin-through hyperplanes
// within a region of interest. Samples live in a 1D array; every region owns a
// contiguous range of it, so inserting a hyperplane is one partition pass over
// the array regardless of the dimension.
class ApproxArrangement {
 public:
  ApproxArrangement(RegionOfInterest roi, std::vector<Vector> samples);
  // Same, from row-major unit vectors of the roi's dimension.
  ApproxArrangement(RegionOfInterest roi, std::vector<double> flat_samples);

  std::size_t sample_count() const noexcept { return draw_.size(); }
  std::size_t dimension() const noexcept { return dimension_; }
  const RegionOfInterest& region_of_interest() const noexcept { return roi_; }
  // Sample currently stored at array position `position`.
  std::span<const double> sample(std::size_t position) const;
  // Draw order of the sample now at `position` (0 for the first one sampled).
  std::size_t draw_index(std::size_t position) const { return draw_.at(position); }
  const std::vector<Hyperplane>& hyperplanes() const noexcept { return hyperplanes_; }
  std::size_t region_count() const noexcept { return regions_.size(); }

  // Splits every region the hyperplane crosses; returns the number of splits.
  std::size_t insert_hyperplane(const Hyperplane& h);

  // Regions in array order with their volume estimates.
  std::vector<RegionVolume> regions() const;

  // Region containing w; throws kRegionNotMaterialized when w lies in a cell
  // that captured no sample.
  const Region& region_of(std::span<const double> w) const;

 private:
  struct Node {
    // Internal nodes split on hyperplanes_[plane]; leaves point at a region.
    std::size_t plane = 0;
    std::size_t negative = 0;
    std::size_t non_negative = 0;
    std::size_t region = 0;
    bool leaf = true;
  };

  RegionOfInterest roi_;
  std::size_t dimension_;
  std::vector<double> points_;       // the sample array, row-major, partitioned in place
  std::vector<std::uint32_t> draw_;  // draw index of the row at each position
  std::vector<Region> regions_;
  std::vector<std::size_t> leaf_of_region_;
  std::vector<Node> nodes_;
  std::vector<Hyperplane> hyperplanes_;
};

ApproxArrangement new_arrangement(const RegionOfInterest& roi, std::size_t s, RngStream& rng,
                                  std::size_t gamma = kDefaultGamma);

}  // namespace fairscore
