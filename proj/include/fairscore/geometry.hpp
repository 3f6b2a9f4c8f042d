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
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fairscore {

// A weight vector (or any point) in the d-dimensional function space.
using Vector = std::vector<double>;

// d-1 angles identifying an origin-anchored ray. The last angle is the polar
// angle from the d-th axis:
//   x_d               = r * cos(phi_{d-1})
//   (x_1 .. x_{d-1})  = r * sin(phi_{d-1}) * cartesian(1, phi_1 .. phi_{d-2})
// applied recursively, so in two dimensions x_1 = r sin(phi), x_2 = r cos(phi).
using PolarAngles = std::vector<double>;

struct Polar {
  double radius = 0.0;
  PolarAngles angles;
};

struct Hyperplane {
  Vector coeffs;
  // 0 for origin-through planes (ordering exchanges), 1 for dual planes.
  double offset = 0.0;
  std::optional<std::pair<std::string, std::string>> label;

  std::size_t dimension() const noexcept { return coeffs.size(); }
  // coeffs . w - offset
  double evaluate(std::span<const double> w) const;
};

// Dense row-major matrix, only used for explicit rotation matrices.
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Matrix operator*(const Matrix& rhs) const;
  Vector operator*(std::span<const double> v) const;
  Matrix transposed() const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> v);
// Throws kDegenerateVector for the zero vector.
Vector normalized(std::span<const double> v);

Polar to_polar(std::span<const double> w);
Vector to_cartesian(double radius, std::span<const double> angles);

// Dual of a tuple: t[1] x_1 + ... + t[d] x_d = 1.
Hyperplane dual_hyperplane(std::span<const double> scoring);

// Scale a such that a * w lies on the hyperplane (infinity when the ray is
// parallel to it). For a dual hyperplane and f(t) = t . w this is 1 / f(t).
double ray_intersection_scale(const Hyperplane& h, std::span<const double> w);

// Rotation in the x_1 - x_{plane+1} plane, counterclockwise by `angle`.
// `plane` is 1-based and must lie in [1, d-1].
Matrix rotation_matrix(std::size_t plane, double angle, std::size_t d);

// Composition of plane rotations M_{d-1}, ..., M_1 (applied in that order)
// that carries the d-th axis onto the ray `rho`.
class RotationPlan {
 public:
  struct Step {
    std::size_t plane;  // 1-based, as in rotation_matrix
    double angle;
    double cos_angle;
    double sin_angle;
  };

  static RotationPlan to_ray(std::span<const double> rho);

  std::size_t dimension() const noexcept { return dimension_; }
  const std::vector<Step>& steps() const noexcept { return steps_; }

  Vector apply(std::span<const double> w) const;
  void apply_in_place(std::span<double> w) const;
  Vector apply_inverse(std::span<const double> w) const;
  // Product of the step matrices; matches apply() to rounding.
  Matrix matrix() const;

 private:
  std::size_t dimension_ = 0;
  std::vector<Step> steps_;
};

// Rotates w by the plan that maps e_d to the unit vector of ray rho.
Vector rotate(std::span<const double> w, std::span<const double> rho);

// Angle in [0, pi] between two non-zero vectors.
double angular_distance(std::span<const double> a, std::span<const double> b);

}  // namespace fairscore
