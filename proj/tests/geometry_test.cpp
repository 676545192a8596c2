// Copyright 2026 The Authors.
//
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


#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nbv/geometry.hpp"

namespace nbv {
namespace {

const FovShape kShape(10.0, 10.0, 35.0 * kPi / 180.0);

// Polar radius at angle phi of the Cartesian segment camera + s*dir, found by
// fine sampling of s and linear interpolation.
double sampled_ray_radius(double phi, double theta, double alpha, double d_cam) {
  Vec2 cam = polar_to_cartesian(theta, d_cam);
  double dir = theta + kPi + alpha;
  double dx = std::cos(dir), dy = std::sin(dir);
  double prev_s = 0.0;
  double prev_d = signed_angle(std::atan2(cam.y, cam.x) - phi);
  for (int k = 1; k <= 200000; ++k) {
    double s = 20.0 * k / 200000;
    double x = cam.x + s * dx, y = cam.y + s * dy;
    double d = signed_angle(std::atan2(y, x) - phi);
    if ((d <= 0.0) != (prev_d <= 0.0) && std::abs(d - prev_d) < 1.0) {
      double f = prev_d / (prev_d - d);
      double ss = prev_s + f * (s - prev_s);
      return std::hypot(cam.x + ss * dx, cam.y + ss * dy);
    }
    prev_s = s;
    prev_d = d;
  }
  return -1.0;
}

TEST(Angles, WrapIntoCanonicalRanges) {
  EXPECT_DOUBLE_EQ(wrap_angle(0.0), 0.0);
  EXPECT_NEAR(wrap_angle(-0.5), kTwoPi - 0.5, 1e-15);
  EXPECT_NEAR(wrap_angle(7.0), 7.0 - kTwoPi, 1e-15);
  EXPECT_DOUBLE_EQ(wrap_angle(kTwoPi), 0.0);
  EXPECT_NEAR(signed_angle(kPi), kPi, 1e-15);
  EXPECT_NEAR(signed_angle(-kPi), kPi, 1e-15);
  EXPECT_NEAR(signed_angle(3.5 * kPi), -0.5 * kPi, 1e-12);
}

TEST(Angles, IntervalMembershipIsPeriodic) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-20.0, 20.0), w(0.0, kTwoPi);
  for (int i = 0; i < 2000; ++i) {
    AngleInterval iv(u(rng), w(rng));
    double x = u(rng);
    for (int k = -3; k <= 3; ++k) {
      EXPECT_EQ(iv.contains(x), iv.contains(x + kTwoPi * k, 1e-9) || iv.contains(x))
          << x << " " << k;
    }
  }
}

TEST(Angles, IntervalWrapsAroundZero) {
  AngleInterval iv = AngleInterval::centered(0.0, 0.3);
  EXPECT_TRUE(iv.contains(0.2));
  EXPECT_TRUE(iv.contains(kTwoPi - 0.2));
  EXPECT_FALSE(iv.contains(0.4));
  EXPECT_FALSE(iv.contains(kPi));
}

TEST(FovShape, EndpointHalfWidthForDefaultCamera) {
  // far corner of the FOV in Cartesian coordinates, camera on the x axis
  double a = 17.5 * kPi / 180.0;
  double cx = 10.0 - 10.0 * std::cos(a), cy = 10.0 * std::sin(a);
  EXPECT_NEAR(cx, 0.4629, 1e-4);
  EXPECT_NEAR(cy, 3.0070, 1e-4);
  EXPECT_NEAR(kShape.half_width(), std::atan2(cy, cx), 1e-12);
  EXPECT_NEAR(kShape.half_width(), 1.41808, 1e-5);
  EXPECT_NEAR(kShape.width(), 2.83616, 1e-5);
  EXPECT_NEAR(kShape.endpoint_distance(), 3.0424, 1e-4);
}

TEST(FovShape, IntervalWidthDoesNotDependOnPose) {
  EXPECT_DOUBLE_EQ(fov_interval(0.0, kShape).width(), fov_interval(3.7, kShape).width());
}

TEST(FovShape, RejectsInvalidShapes) {
  EXPECT_THROW(FovShape(10.0, 0.0, 0.5), ConfigError);
  EXPECT_THROW(FovShape(10.0, 10.0, 0.0), ConfigError);
  EXPECT_THROW(FovShape(10.0, 10.0, kPi), ConfigError);
  EXPECT_THROW(FovShape(5.0, 10.0, 0.5), ConfigError);
}

TEST(CameraFrame, MatchesRotationIntoCameraAxes) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> a(0.0, kTwoPi), r(0.5, 9.0);
  for (int i = 0; i < 500; ++i) {
    double phi = a(rng), rad = r(rng), theta = a(rng);
    Vec2 p = polar_to_cartesian(phi, rad), cam = polar_to_cartesian(theta, 10.0);
    // camera x axis points from the camera to the origin
    double ux = -std::cos(theta), uy = -std::sin(theta);
    double vx = -uy, vy = ux;
    double dx = p.x - cam.x, dy = p.y - cam.y;
    double along = dx * ux + dy * uy, across = dx * vx + dy * vy;
    CameraFramePoint c = to_camera_frame(phi, rad, theta, 10.0);
    EXPECT_NEAR(c.x, along, 1e-12);
    EXPECT_NEAR(std::abs(c.y), std::abs(across), 1e-12);
    EXPECT_NEAR(c.distance, std::hypot(dx, dy), 1e-12);
  }
}

TEST(CameraFrame, FovMembershipOnBoundaries) {
  double a = 17.5 * kPi / 180.0;
  // a point exactly at the far corner is inside
  double cx = 10.0 - 10.0 * std::cos(a), cy = 10.0 * std::sin(a);
  double phi = std::atan2(cy, cx), rad = std::hypot(cx, cy);
  EXPECT_TRUE(in_fov(to_camera_frame(phi, rad, 0.0, 10.0), kShape));
  EXPECT_FALSE(in_fov(to_camera_frame(phi + 0.01, rad, 0.0, 10.0), kShape));
  EXPECT_TRUE(in_fov(to_camera_frame(0.0, 0.5, 0.0, 10.0), kShape));
  EXPECT_FALSE(in_fov(to_camera_frame(kPi, 0.5, 0.0, 10.0), kShape));
}

TEST(Ray, PassesThroughCamera) {
  for (double theta : {0.0, 1.0, 2.5, 4.0, 6.0}) {
    for (double alpha : {-1.2, -0.3, 0.3, 1.2}) {
      EXPECT_DOUBLE_EQ(ray(theta, theta, alpha, 10.0), 10.0);
    }
  }
}

TEST(Ray, FovEndpointMatchesSampledSegment) {
  double a = 17.5 * kPi / 180.0;
  for (double sign : {-1.0, 1.0}) {
    double phi = -sign * kShape.half_width();
    double got = ray(phi, 0.0, sign * a, 10.0);
    EXPECT_NEAR(got, kShape.endpoint_distance(), 1e-9);
    EXPECT_NEAR(got, sampled_ray_radius(phi, 0.0, sign * a, 10.0), 1e-3);
  }
}

TEST(Ray, RoundTripFromCartesianPoints) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> th(0.0, kTwoPi), al(-0.3054, 0.3054),
      s(0.05, 10.0);
  int checked = 0;
  for (int i = 0; i < 2000; ++i) {
    double theta = th(rng), alpha = al(rng), t = s(rng);
    if (std::abs(alpha) < 1e-3) continue;
    Vec2 cam = polar_to_cartesian(theta, 10.0);
    double dir = theta + kPi + alpha;
    double x = cam.x + t * std::cos(dir), y = cam.y + t * std::sin(dir);
    double phi = std::atan2(y, x), r = std::hypot(x, y);
    EXPECT_NEAR(ray(phi, theta, alpha, 10.0), r, 1e-8 * r);
    ++checked;
  }
  EXPECT_GT(checked, 1900);
}

TEST(Ray, BranchChoiceDoesNotMatter) {
  // both line parametrisations, evaluated directly
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> th(0.0, kTwoPi), al(-1.4, 1.4), f(0.05, 0.95);
  for (int i = 0; i < 1000; ++i) {
    double theta = th(rng), alpha = al(rng);
    if (std::abs(alpha) < 1e-2) continue;
    double reach = kPi - std::abs(alpha);
    double phi = theta - (alpha > 0 ? 1.0 : -1.0) * f(rng) * reach;
    double psi = theta + alpha;
    double t = std::tan(psi), c = 1.0 / t;
    double via_tan = 10.0 * (std::sin(theta) - t * std::cos(theta)) /
                     (std::sin(phi) - t * std::cos(phi));
    double via_cot = 10.0 * (std::cos(theta) - c * std::sin(theta)) /
                     (std::cos(phi) - c * std::sin(phi));
    double got = ray(phi, theta, alpha, 10.0);
    EXPECT_NEAR(via_tan, via_cot, 1e-9 * std::abs(via_tan) + 1e-9);
    EXPECT_NEAR(got, via_tan, 1e-9 * std::abs(got) + 1e-9);
  }
}

TEST(Ray, RejectsDegenerateDirections) {
  EXPECT_THROW(ray(1.0, 0.0, 0.0, 10.0), DomainError);
  EXPECT_THROW(ray(1.0, 0.0, kPi, 10.0), DomainError);
  // a ray turning left never reaches angles on the left of the camera
  EXPECT_THROW(ray(0.5, 0.0, 0.3, 10.0), DomainError);
}

TEST(FovBoundary, CameraAndEndpoints) {
  EXPECT_DOUBLE_EQ(fov_boundary(1.3, 1.3, kShape), 10.0);
  double hw = kShape.half_width();
  EXPECT_NEAR(fov_boundary(hw, 0.0, kShape), kShape.endpoint_distance(), 1e-9);
  EXPECT_NEAR(fov_boundary(-hw, 0.0, kShape), kShape.endpoint_distance(), 1e-9);
  EXPECT_THROW(fov_boundary(hw + 0.01, 0.0, kShape), DomainError);
}

TEST(FovBoundary, MirrorSymmetric) {
  for (double theta : {0.0, 2.0, 5.5}) {
    for (int k = 0; k <= 50; ++k) {
      double d = kShape.half_width() * k / 50.0;
      EXPECT_NEAR(fov_boundary(theta + d, theta, kShape),
                  fov_boundary(theta - d, theta, kShape), 1e-9);
    }
  }
}

TEST(SectorArea, KnownValuesAndAdditivity) {
  EXPECT_NEAR(sector_area(kTwoPi, 0.0, 3.0), kPi * 9.0, 1e-12);
  EXPECT_DOUBLE_EQ(sector_area(0.7, 4.0, 4.0), 0.0);
  EXPECT_DOUBLE_EQ(sector_area(1.0, 2.0, 8.0), 30.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 8.0), w(0.0, kTwoPi);
  for (int i = 0; i < 500; ++i) {
    double a = u(rng), b = u(rng), c = u(rng), dphi = w(rng);
    if (a > b) std::swap(a, b);
    if (b > c) std::swap(b, c);
    if (a > b) std::swap(a, b);
    EXPECT_NEAR(sector_area(dphi, a, c), sector_area(dphi, a, b) + sector_area(dphi, b, c),
                1e-10);
  }
  EXPECT_THROW(sector_area(-1.0, 1.0, 2.0), DomainError);
}

}  // namespace
}  // namespace nbv
