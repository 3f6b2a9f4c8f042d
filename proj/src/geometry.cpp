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

#include "fairscore/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "fairscore/error.hpp"

namespace fairscore {

namespace {

void require_same_dimension(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "dimensions " + std::to_string(a.size()) + " and " +
                    std::to_string(b.size()) + " differ");
  }
}

void rotate_plane(std::span<double> w, std::size_t plane, double c, double s) {
  const double x1 = w[0];
  const double xi = w[plane];
  w[0] = c * x1 - s * xi;
  w[plane] = s * x1 + c * xi;
}

}  // namespace

double Hyperplane::evaluate(std::span<const double> w) const {
  return dot(coeffs, w) - offset;
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
  if (cols_ != rhs.rows_) {
    throw Error(ErrorCode::kDimensionMismatch, "matrix product shape mismatch");
  }
  Matrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const double a = (*this)(i, k);
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
    }
  }
  return out;
}

Vector Matrix::operator*(std::span<const double> v) const {
  if (cols_ != v.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "matrix-vector shape mismatch");
  }
  Vector out(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) acc += (*this)(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

Matrix Matrix::transposed() const {
  Matrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_dimension(a, b);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

Vector normalized(std::span<const double> v) {
  const double n = norm(v);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorCode::kDegenerateVector, "cannot normalize a zero or non-finite vector");
  }
  Vector out(v.begin(), v.end());
  for (double& x : out) x /= n;
  return out;
}

Polar to_polar(std::span<const double> w) {
  const std::size_t d = w.size();
  if (d < 2) throw Error(ErrorCode::kInvalidDimension, "polar form needs d >= 2");
  for (double x : w) {
    if (!std::isfinite(x)) throw Error(ErrorCode::kDegenerateVector, "non-finite coordinate");
  }

  // prefix[k] = |(x_1 .. x_k)|^2
  std::vector<double> prefix(d + 1, 0.0);
  for (std::size_t k = 0; k < d; ++k) prefix[k + 1] = prefix[k] + w[k] * w[k];

  Polar out;
  out.radius = std::sqrt(prefix[d]);
  if (out.radius == 0.0) {
    throw Error(ErrorCode::kDegenerateVector, "zero vector has no direction");
  }
  out.angles.assign(d - 1, 0.0);
  if (d == 2) {
    out.angles[0] = std::atan2(w[0], w[1]);
    return out;
  }
  out.angles[d - 2] = std::atan2(std::sqrt(prefix[d - 1]), w[d - 1]);
  for (std::size_t j = d - 2; j-- > 0;) {
    // angle j is taken within the sub-vector (x_1 .. x_{j+2})
    if (prefix[j + 2] == 0.0) {
      // Direction of an empty tail is undefined; pi/2 everywhere makes the
      // implied direction e_1 and keeps RotationPlan::to_ray(e_d) the identity.
      for (std::size_t k = 0; k <= j; ++k) out.angles[k] = std::numbers::pi / 2;
      break;
    }
    out.angles[j] = j == 0 ? std::atan2(w[0], w[1])
                           : std::atan2(std::sqrt(prefix[j + 1]), w[j + 1]);
  }
  return out;
}

Vector to_cartesian(double radius, std::span<const double> angles) {
  if (radius < 0.0 || !std::isfinite(radius)) {
    throw Error(ErrorCode::kInvalidRadius, "radius must be finite and non-negative");
  }
  if (angles.empty()) throw Error(ErrorCode::kInvalidDimension, "need at least one angle");
  const std::size_t d = angles.size() + 1;
  Vector x(d, 0.0);
  x[d - 1] = radius * std::cos(angles[d - 2]);
  double s = radius * std::sin(angles[d - 2]);
  for (std::size_t j = d - 2; j-- > 0;) {
    x[j + 1] = s * std::cos(angles[j]);
    s *= std::sin(angles[j]);
  }
  x[0] = s;
  return x;
}

Hyperplane dual_hyperplane(std::span<const double> scoring) {
  Hyperplane h;
  h.coeffs.assign(scoring.begin(), scoring.end());
  h.offset = 1.0;
  return h;
}

double ray_intersection_scale(const Hyperplane& h, std::span<const double> w) {
  const double proj = dot(h.coeffs, w);
  if (proj == 0.0) return std::numeric_limits<double>::infinity();
  return h.offset / proj;
}

Matrix rotation_matrix(std::size_t plane, double angle, std::size_t d) {
  if (d < 2 || plane < 1 || plane > d - 1) {
    throw Error(ErrorCode::kInvalidPlane,
                "plane index " + std::to_string(plane) + " outside [1, " +
                    std::to_string(d > 0 ? d - 1 : 0) + "]");
  }
  Matrix m = Matrix::identity(d);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  m(0, 0) = c;
  m(plane, plane) = c;
  m(0, plane) = -s;
  m(plane, 0) = s;
  return m;
}

RotationPlan RotationPlan::to_ray(std::span<const double> rho) {
  if (rho.empty()) throw Error(ErrorCode::kInvalidDimension, "ray needs at least one angle");
  RotationPlan plan;
  plan.dimension_ = rho.size() + 1;
  const std::size_t last = rho.size();  // plane index of the x_1 - x_d plane
  // The x_1 - x_d step tilts e_d away from the d-th axis by the polar angle
  // (clockwise, hence the sign); every earlier step turns the x_1 component
  // towards x_{i+1}, which in this angle convention is pi/2 - rho_i.
  auto push = [&plan](std::size_t plane, double angle) {
    plan.steps_.push_back({plane, angle, std::cos(angle), std::sin(angle)});
  };
  push(last, -rho[last - 1]);
  for (std::size_t i = last - 1; i >= 1; --i) push(i, std::numbers::pi / 2 - rho[i - 1]);
  return plan;
}

void RotationPlan::apply_in_place(std::span<double> w) const {
  if (w.size() != dimension_) {
    throw Error(ErrorCode::kDimensionMismatch, "rotation plan dimension differs from vector");
  }
  for (const Step& step : steps_) rotate_plane(w, step.plane, step.cos_angle, step.sin_angle);
}

Vector RotationPlan::apply(std::span<const double> w) const {
  Vector out(w.begin(), w.end());
  apply_in_place(out);
  return out;
}

Vector RotationPlan::apply_inverse(std::span<const double> w) const {
  if (w.size() != dimension_) {
    throw Error(ErrorCode::kDimensionMismatch, "rotation plan dimension differs from vector");
  }
  Vector out(w.begin(), w.end());
  for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) {
    rotate_plane(out, it->plane, it->cos_angle, -it->sin_angle);
  }
  return out;
}

Matrix RotationPlan::matrix() const {
  Matrix m = Matrix::identity(dimension_);
  for (const Step& step : steps_) m = rotation_matrix(step.plane, step.angle, dimension_) * m;
  return m;
}

Vector rotate(std::span<const double> w, std::span<const double> rho) {
  if (w.size() != rho.size() + 1) {
    throw Error(ErrorCode::kDimensionMismatch, "vector and ray dimensions differ");
  }
  return RotationPlan::to_ray(rho).apply(w);
}

double angular_distance(std::span<const double> a, std::span<const double> b) {
  require_same_dimension(a, b);
  const Vector ua = normalized(a);
  const Vector ub = normalized(b);
  double diff = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < ua.size(); ++i) {
    diff += (ua[i] - ub[i]) * (ua[i] - ub[i]);
    sum += (ua[i] + ub[i]) * (ua[i] + ub[i]);
  }
  // Half-angle form stays accurate near 0 and pi where acos loses digits.
  return 2.0 * std::atan2(std::sqrt(diff), std::sqrt(sum));
}

}  // namespace fairscore
