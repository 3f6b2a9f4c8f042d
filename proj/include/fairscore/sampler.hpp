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
#include <span>
#include <vector>

#include "fairscore/geometry.hpp"
#include "fairscore/rng.hpp"

namespace fairscore {

inline constexpr std::size_t kDefaultGamma = 10'000;
inline constexpr std::size_t kMinGamma = 100;

// Functions within angular distance theta of the reference ray rho: the
// spherical cap of half-angle theta centred on rho.
struct RegionOfInterest {
  PolarAngles rho;
  double theta = 0.0;

  static RegionOfInterest around(std::span<const double> reference, double theta);
  // cos_similarity in (0, 1): theta = acos(cos_similarity)
  static RegionOfInterest from_cosine_similarity(std::span<const double> reference,
                                                 double cos_similarity);

  std::size_t dimension() const noexcept { return rho.size() + 1; }
  Vector center() const;
  // Throws kInvalidRegion unless 0 < theta <= pi/2 and rho is finite.
  void validate() const;
};

// Normalized Riemann sums of sin^{d-2} over a regular partition of [0, theta].
// values has gamma + 1 entries: values[0] = 0, values[i] ~ F(i * epsilon),
// values[gamma] = 1.
struct CdfTable {
  std::vector<double> values;
  double theta = 0.0;
  std::size_t gamma = 0;
  double epsilon = 0.0;
  std::size_t dimension = 0;

  // Partition index i in [0, gamma) with values[i] <= y < values[i + 1].
  std::size_t locate(double y) const;
};

CdfTable build_cdf_table(double theta, std::size_t gamma, std::size_t d);

// Closed-form inverse of the d = 3 cap CDF: arccos(1 - (1 - cos theta) y).
double inverse_cdf_3d(double y, double theta);

// Uniform direction on the unit sphere (normalized standard normals).
Vector sample_sphere(std::size_t d, RngStream& rng);
// Uniform on the non-negative orthant of the sphere (|x| of sample_sphere).
Vector sample_sphere_nonnegative(std::size_t d, RngStream& rng);
// Draws each polar angle uniformly over its range. Not uniform on the sphere
// for d >= 3; kept as a reference for uniformity tests.
Vector sample_uniform_angles(std::size_t d, RngStream& rng);

// Inverse-CDF sample from the cap: partition by binary search on the table,
// uniform jitter inside the partition, a uniform direction on the (d-1)-sphere,
// then the rotation that moves the d-th axis onto rho.
Vector sample_cap(const RegionOfInterest& roi, const CdfTable& table, RngStream& rng);

// Acceptance-rejection sampling from the cap via sample_sphere. Throws
// kRegionTooSmall after max_tries rejections.
Vector sample_cap_rejection(const RegionOfInterest& roi, RngStream& rng,
                            std::size_t max_tries, std::size_t* tries_used = nullptr);

// Reusable cap sampler with the table and rotation precomputed.
class CapSampler {
 public:
  explicit CapSampler(RegionOfInterest roi, std::size_t gamma = kDefaultGamma);
  CapSampler(RegionOfInterest roi, CdfTable table);

  const RegionOfInterest& region() const noexcept { return roi_; }
  const CdfTable& table() const noexcept { return table_; }
  std::size_t dimension() const noexcept { return roi_.dimension(); }

  Vector operator()(RngStream& rng) const;
  void sample_into(RngStream& rng, std::span<double> out) const;

 private:
  RegionOfInterest roi_;
  CdfTable table_;
  RotationPlan plan_;
};

}  // namespace fairscore
