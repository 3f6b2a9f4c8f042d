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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fairscore/error.hpp"
#include "test_util.hpp"

namespace fairscore {
namespace {

using std::numbers::pi;

using testutil::expect_code;

Vector random_vector(std::mt19937_64& gen, std::size_t d) {
  std::normal_distribution<double> n;
  Vector v(d);
  for (double& x : v) x = n(gen);
  return v;
}

TEST(Polar, DiagonalInTwoDimensions) {
  const Polar p = to_polar(Vector{1, 1});
  EXPECT_NEAR(p.radius, std::sqrt(2.0), 1e-12);
  ASSERT_EQ(p.angles.size(), 1u);
  EXPECT_NEAR(p.angles[0], pi / 4, 1e-12);
}

TEST(Polar, AnglesMeasuredFromLastAxis) {
  // x2 is the reference axis in two dimensions.
  EXPECT_NEAR(to_polar(Vector{0, 1}).angles[0], 0.0, 1e-15);
  EXPECT_NEAR(to_polar(Vector{1, 0}).angles[0], pi / 2, 1e-15);
  EXPECT_NEAR(to_polar(Vector{-1, 0}).angles[0], -pi / 2, 1e-15);

  const Polar e3 = to_polar(Vector{0, 0, 1});
  EXPECT_NEAR(e3.radius, 1.0, 1e-15);
  ASSERT_EQ(e3.angles.size(), 2u);
  EXPECT_EQ(e3.angles[1], 0.0);
}

TEST(Polar, ZeroVectorRejected) {
  expect_code(ErrorCode::kDegenerateVector, [] { to_polar(Vector{0, 0, 0}); });
}

TEST(Cartesian, KnownPoints) {
  const Vector v = to_cartesian(1.0, std::vector<double>{pi / 4});
  EXPECT_NEAR(v[0], std::sqrt(2.0) / 2, 1e-15);
  EXPECT_NEAR(v[1], std::sqrt(2.0) / 2, 1e-15);

  const Vector axis = to_cartesian(1.0, std::vector<double>{0.7, 2.1, 0.0});
  EXPECT_NEAR(axis[0], 0.0, 1e-15);
  EXPECT_NEAR(axis[1], 0.0, 1e-15);
  EXPECT_NEAR(axis[2], 0.0, 1e-15);
  EXPECT_NEAR(axis[3], 1.0, 1e-15);
}

TEST(Cartesian, NegativeRadiusRejected) {
  expect_code(ErrorCode::kInvalidRadius, [] { to_cartesian(-1.0, std::vector<double>{0.1}); });
}

TEST(Cartesian, RoundTripsRandomVectors) {
  std::mt19937_64 gen(20);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 2 + trial % 7;
    const Vector w = random_vector(gen, d);
    const Polar p = to_polar(w);
    const Vector back = to_cartesian(p.radius, p.angles);
    for (std::size_t k = 0; k < d; ++k) EXPECT_NEAR(back[k], w[k], 1e-9);
    // Last angle is the angle to the d-th axis.
    EXPECT_NEAR(std::cos(p.angles.back()), w.back() / norm(w), 1e-12);
    for (std::size_t k = 1; k < p.angles.size(); ++k) {
      EXPECT_GE(p.angles[k], 0.0);
      EXPECT_LE(p.angles[k], pi);
    }
    const Polar again = to_polar(back);
    EXPECT_NEAR(again.radius, p.radius, 1e-9);
    for (std::size_t k = 0; k < p.angles.size(); ++k) EXPECT_NEAR(again.angles[k], p.angles[k], 1e-9);
  }
}

TEST(Dual, CoefficientsAreTheTuple) {
  const Hyperplane h = dual_hyperplane(Vector{0.61, 0.79});
  EXPECT_EQ(h.coeffs, (Vector{0.61, 0.79}));
  EXPECT_EQ(h.offset, 1.0);
  const Hyperplane e1 = dual_hyperplane(Vector{1, 0, 0});
  EXPECT_EQ(e1.coeffs, (Vector{1, 0, 0}));
}

TEST(Dual, RayIntersectionIsReciprocalScore) {
  const std::vector<Vector> rows = {{0.63, 0.71}, {0.72, 0.65}, {0.58, 0.78},
                                    {0.70, 0.68}, {0.53, 0.82}, {0.61, 0.79}};
  const Vector w = normalized(Vector{1, 1});
  for (const Vector& t : rows) {
    const double a = ray_intersection_scale(dual_hyperplane(t), w);
    const double f = t[0] * w[0] + t[1] * w[1];
    EXPECT_NEAR(a, 1.0 / f, 1e-12);
    // The intersection point lies on the hyperplane.
    EXPECT_NEAR(t[0] * a * w[0] + t[1] * a * w[1], 1.0, 1e-12);
  }
  EXPECT_TRUE(std::isinf(ray_intersection_scale(dual_hyperplane(Vector{1, 0}), Vector{0, 1})));
}

TEST(RotationMatrix, TwoDimensional) {
  const double t = 0.37;
  const Matrix m = rotation_matrix(1, t, 2);
  EXPECT_DOUBLE_EQ(m(0, 0), std::cos(t));
  EXPECT_DOUBLE_EQ(m(0, 1), -std::sin(t));
  EXPECT_DOUBLE_EQ(m(1, 0), std::sin(t));
  EXPECT_DOUBLE_EQ(m(1, 1), std::cos(t));
}

TEST(RotationMatrix, ZeroAngleIsIdentity) {
  const Matrix m = rotation_matrix(3, 0.0, 5);
  for (std::size_t r = 0; r < 5; ++r) {
    for (std::size_t c = 0; c < 5; ++c) EXPECT_EQ(m(r, c), r == c ? 1.0 : 0.0);
  }
}

TEST(RotationMatrix, OrthogonalForRandomAngles) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> angle(-pi, pi);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = 2 + trial % 6;
    const std::size_t plane = 1 + trial % (d - 1);
    const Matrix m = rotation_matrix(plane, angle(gen), d);
    const Matrix p = m * m.transposed();
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) EXPECT_NEAR(p(r, c), r == c ? 1.0 : 0.0, 1e-12);
    }
    // Non-trivial entries only in rows/columns 1 and plane + 1.
    for (std::size_t r = 0; r < d; ++r) {
      if (r == 0 || r == plane) continue;
      EXPECT_EQ(m(r, r), 1.0);
    }
  }
}

TEST(RotationMatrix, PlaneOutOfRange) {
  expect_code(ErrorCode::kInvalidPlane, [] { rotation_matrix(0, 0.1, 3); });
  expect_code(ErrorCode::kInvalidPlane, [] { rotation_matrix(3, 0.1, 3); });
}

TEST(Rotate, CarriesLastAxisOntoTheRay) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 2 + trial % 9;
    const Vector target = random_vector(gen, d);
    const PolarAngles rho = to_polar(target).angles;
    Vector e(d, 0.0);
    e.back() = 1.0;
    const Vector moved = rotate(e, rho);
    const Vector expected = to_cartesian(1.0, rho);
    for (std::size_t k = 0; k < d; ++k) EXPECT_NEAR(moved[k], expected[k], 1e-6);
  }
}

TEST(Rotate, LastAxisRayIsIdentity) {
  const PolarAngles rho = to_polar(Vector{0, 0, 0, 1}).angles;
  const Vector w{0.3, -1.2, 0.5, 2.0};
  const Vector out = rotate(w, rho);
  for (std::size_t k = 0; k < w.size(); ++k) EXPECT_NEAR(out[k], w[k], 1e-12);
}

TEST(Rotate, PreservesNormsAndAngles) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 3 + trial % 6;
    const PolarAngles rho = to_polar(random_vector(gen, d)).angles;
    const RotationPlan plan = RotationPlan::to_ray(rho);
    const Vector a = random_vector(gen, d);
    const Vector b = random_vector(gen, d);
    const Vector ra = plan.apply(a);
    const Vector rb = plan.apply(b);
    EXPECT_NEAR(norm(ra), norm(a), 1e-9 * norm(a));
    EXPECT_NEAR(dot(ra, rb), dot(a, b), 1e-9 * norm(a) * norm(b));
    const Vector back = plan.apply_inverse(ra);
    for (std::size_t k = 0; k < d; ++k) EXPECT_NEAR(back[k], a[k], 1e-9);
  }
}

TEST(Rotate, MatrixMatchesPlan) {
  std::mt19937_64 gen(8);
  const PolarAngles rho = to_polar(random_vector(gen, 6)).angles;
  const RotationPlan plan = RotationPlan::to_ray(rho);
  const Matrix m = plan.matrix();
  const Vector w = random_vector(gen, 6);
  const Vector via_plan = plan.apply(w);
  const Vector via_matrix = m * std::span<const double>(w);
  for (std::size_t k = 0; k < 6; ++k) EXPECT_NEAR(via_matrix[k], via_plan[k], 1e-9);
}

TEST(AngularDistance, KnownValues) {
  EXPECT_NEAR(angular_distance(Vector{1, 1}, Vector{1, 1}), 0.0, 1e-15);
  EXPECT_NEAR(angular_distance(Vector{1, 0}, Vector{0, 1}), pi / 2, 1e-15);
  EXPECT_NEAR(angular_distance(Vector{1, 0}, Vector{-1, 0}), pi, 1e-15);
  // arccos(2.01 / (sqrt(2) sqrt(2.0421))), evaluated in 30-digit arithmetic.
  EXPECT_NEAR(angular_distance(Vector{1, 1}, Vector{1.11, 0.9}), 0.1040999381095982, 1e-12);
}

TEST(AngularDistance, ZeroVectorRejected) {
  expect_code(ErrorCode::kDegenerateVector, [] { angular_distance(Vector{0, 0}, Vector{1, 0}); });
}

}  // namespace
}  // namespace fairscore
