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

#include "fairscore/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fairscore/error.hpp"

namespace fairscore {

namespace {

void require_dimension(std::size_t d) {
  if (d < 2) throw Error(ErrorCode::kInvalidDimension, "dimension must be at least 2");
}

void fill_unit_normal(RngStream& rng, std::span<double> out) {
  double sq = 0.0;
  do {
    sq = 0.0;
    for (double& x : out) {
      x = rng.normal();
      sq += x * x;
    }
  } while (sq == 0.0);
  const double n = std::sqrt(sq);
  for (double& x : out) x /= n;
}

}  // namespace

RegionOfInterest RegionOfInterest::around(std::span<const double> reference, double theta) {
  RegionOfInterest roi{to_polar(reference).angles, theta};
  roi.validate();
  return roi;
}

RegionOfInterest RegionOfInterest::from_cosine_similarity(std::span<const double> reference,
                                                          double cos_similarity) {
  if (!(cos_similarity > 0.0 && cos_similarity < 1.0)) {
    throw Error(ErrorCode::kInvalidRegion, "cosine similarity must lie in (0, 1)");
  }
  return around(reference, std::acos(cos_similarity));
}

Vector RegionOfInterest::center() const { return to_cartesian(1.0, rho); }

void RegionOfInterest::validate() const {
  if (rho.empty()) throw Error(ErrorCode::kInvalidRegion, "reference ray has no angles");
  for (double a : rho) {
    if (!std::isfinite(a)) throw Error(ErrorCode::kInvalidRegion, "non-finite ray angle");
  }
  if (!(theta > 0.0 && theta <= std::numbers::pi / 2)) {
    throw Error(ErrorCode::kInvalidRegion,
                "theta must lie in (0, pi/2], got " + std::to_string(theta));
  }
}

std::size_t CdfTable::locate(double y) const {
  const auto it = std::upper_bound(values.begin(), values.end(), y);
  const auto idx = static_cast<std::size_t>(std::distance(values.begin(), it));
  // values[0] = 0 <= y, so idx >= 1; y = 1 lands past the end.
  return std::min(idx == 0 ? 0 : idx - 1, gamma - 1);
}

CdfTable build_cdf_table(double theta, std::size_t gamma, std::size_t d) {
  require_dimension(d);
  if (gamma < kMinGamma) {
    throw Error(ErrorCode::kTooCoarse,
                "gamma " + std::to_string(gamma) + " below " + std::to_string(kMinGamma));
  }
  if (!(theta > 0.0 && theta <= std::numbers::pi / 2)) {
    throw Error(ErrorCode::kInvalidRegion, "theta must lie in (0, pi/2]");
  }
  CdfTable table;
  table.theta = theta;
  table.gamma = gamma;
  table.epsilon = theta / static_cast<double>(gamma);
  table.dimension = d;
  table.values.reserve(gamma + 1);
  table.values.push_back(0.0);

  const double power = static_cast<double>(d - 2);
  double area = 0.0;
  for (std::size_t i = 1; i <= gamma; ++i) {
    area += std::pow(std::sin(static_cast<double>(i) * table.epsilon), power);
    table.values.push_back(area);
  }
  for (std::size_t i = 1; i <= gamma; ++i) table.values[i] /= area;
  table.values[gamma] = 1.0;
  return table;
}

double inverse_cdf_3d(double y, double theta) {
  if (!(y >= 0.0 && y <= 1.0)) {
    throw Error(ErrorCode::kInvalidProbability, "y must lie in [0, 1]");
  }
  return std::acos(1.0 - (1.0 - std::cos(theta)) * y);
}

Vector sample_sphere(std::size_t d, RngStream& rng) {
  require_dimension(d);
  Vector w(d);
  fill_unit_normal(rng, w);
  return w;
}

Vector sample_sphere_nonnegative(std::size_t d, RngStream& rng) {
  Vector w = sample_sphere(d, rng);
  for (double& x : w) x = std::abs(x);
  return w;
}

Vector sample_uniform_angles(std::size_t d, RngStream& rng) {
  require_dimension(d);
  PolarAngles angles(d - 1);
  angles[0] = rng.uniform(-std::numbers::pi, std::numbers::pi);
  for (std::size_t j = 1; j < d - 1; ++j) angles[j] = rng.uniform(0.0, std::numbers::pi);
  return to_cartesian(1.0, angles);
}

Vector sample_cap(const RegionOfInterest& roi, const CdfTable& table, RngStream& rng) {
  roi.validate();
  if (table.dimension != roi.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "table built for d=" + std::to_string(table.dimension) + ", region has d=" +
                    std::to_string(roi.dimension()));
  }
  return CapSampler(roi, table)(rng);
}

Vector sample_cap_rejection(const RegionOfInterest& roi, RngStream& rng,
                            std::size_t max_tries, std::size_t* tries_used) {
  roi.validate();
  if (max_tries < 1) throw Error(ErrorCode::kInvalidArgument, "max_tries must be >= 1");
  const Vector center = roi.center();
  const double min_cos = std::cos(roi.theta);
  for (std::size_t tries = 1; tries <= max_tries; ++tries) {
    Vector w = sample_sphere(roi.dimension(), rng);
    if (dot(w, center) >= min_cos) {
      if (tries_used != nullptr) *tries_used = tries;
      return w;
    }
  }
  if (tries_used != nullptr) *tries_used = max_tries;
  throw Error(ErrorCode::kRegionTooSmall,
              "no sample accepted in " + std::to_string(max_tries) +
                  " tries; use the inverse-CDF sampler");
}

CapSampler::CapSampler(RegionOfInterest roi, std::size_t gamma)
    : CapSampler(roi, build_cdf_table(roi.theta, gamma, roi.dimension())) {}

CapSampler::CapSampler(RegionOfInterest roi, CdfTable table)
    : roi_(std::move(roi)), table_(std::move(table)) {
  roi_.validate();
  if (table_.dimension != roi_.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch, "table and region dimensions differ");
  }
  plan_ = RotationPlan::to_ray(roi_.rho);
}

Vector CapSampler::operator()(RngStream& rng) const {
  Vector w(dimension());
  sample_into(rng, w);
  return w;
}

void CapSampler::sample_into(RngStream& rng, std::span<double> out) const {
  const std::size_t d = dimension();
  if (out.size() != d) throw Error(ErrorCode::kDimensionMismatch, "output buffer size");

  if (d == 2) {
    // The cap is an arc: uniform angle in [-theta, theta] around the axis.
    const double x = rng.uniform(-roi_.theta, roi_.theta);
    out[0] = std::sin(x);
    out[1] = std::cos(x);
  } else {
    const double y = rng.uniform();
    const std::size_t i = table_.locate(y);
    const double x = (static_cast<double>(i) + rng.uniform()) * table_.epsilon;

    Vector direction(d - 1);
    fill_unit_normal(rng, direction);
    PolarAngles angles = to_polar(direction).angles;
    angles.push_back(x);
    const Vector w = to_cartesian(1.0, angles);
    std::copy(w.begin(), w.end(), out.begin());
  }
  plan_.apply_in_place(out);
}

}  // namespace fairscore
