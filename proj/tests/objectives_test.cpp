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

#include "nbv/objectives.hpp"

namespace nbv {
namespace {

const FovShape kShape(10.0, 10.0, 35.0 * kPi / 180.0);

struct Band {
  double u, l;
  double upper(double) const { return u; }
  double lower(double) const { return l; }
};

struct Wavy {
  double upper(double phi) const { return 6.0 + std::cos(phi); }
  double lower(double phi) const { return 4.0 + 0.5 * std::sin(2.0 * phi); }
};

ObjectiveContext context() {
  ObjectiveContext c;
  c.shape = kShape;
  c.h = 0.1;
  c.sum_step = 0.1 / 8.0;
  return c;
}

TEST(Objectives, NamesRoundTrip) {
  for (const auto& [kind, name] : objective_names()) {
    EXPECT_EQ(objective_from_string(name), kind);
    EXPECT_EQ(to_string(kind), name);
  }
  EXPECT_THROW(objective_from_string("XYZ"), ConfigError);
  EXPECT_FALSE(try_objective_from_string("cs").has_value());
  EXPECT_TRUE(has_interval(ObjectiveKind::kCS));
  EXPECT_TRUE(has_interval(ObjectiveKind::kC));
  EXPECT_FALSE(has_interval(ObjectiveKind::kU));
  EXPECT_FALSE(has_interval(ObjectiveKind::kIOA));
}

TEST(Objectives, IntervalSumOfConstant) {
  AngleInterval iv(1.0, 0.55);
  double s = interval_sum(iv, 0.1, [](double) { return 2.0; });
  EXPECT_NEAR(s, 6 * 0.1 * 2.0, 1e-12);
  EXPECT_THROW(interval_sum(iv, 0.0, [](double) { return 1.0; }), ConfigError);
}

TEST(Objectives, ConstantBandClosedForms) {
  ObjectiveContext c = context();
  Band b{6.0, 4.0};
  double w = kShape.width(), h2 = 0.01, step = c.sum_step;
  double nodes = std::floor(w / step + 1e-9) + 1;
  double half_ring = 0.5 * (36.0 - 16.0);
  for (double theta : {0.0, 2.0, 5.5}) {
    EXPECT_NEAR(eval_objective(ObjectiveKind::kCS, theta, b, c), nodes * step * half_ring / h2,
                1e-9);
    EXPECT_NEAR(eval_objective(ObjectiveKind::kCSP, theta, b, c), nodes * step * 2.0 / h2, 1e-9);
    EXPECT_NEAR(eval_objective(ObjectiveKind::kU, theta, b, c), w * half_ring / h2, 1e-9);
    EXPECT_NEAR(eval_objective(ObjectiveKind::kUP, theta, b, c), w * 2.0 / h2, 1e-9);
  }
}

TEST(Objectives, PriorStateWorkedValues) {
  ObjectiveContext c = context();
  Band prior{8.0, 2.0};
  double w = 2.0 * std::atan(3.0070 / 0.4629);
  EXPECT_NEAR(kShape.width(), w, 1e-4);
  EXPECT_NEAR(eval_objective(ObjectiveKind::kU, 0.0, prior, c), 100.0 * 0.5 * w * 60.0, 0.5);
  EXPECT_NEAR(eval_objective(ObjectiveKind::kU, 0.0, prior, c), 8508.5, 0.1);
  EXPECT_NEAR(eval_objective(ObjectiveKind::kUP, 0.0, prior, c), 1701.7, 0.1);
}

TEST(Objectives, SumsApproachAnnularSectorArea) {
  ObjectiveContext c = context();
  c.sum_step = 1e-5;
  Band b{6.0, 4.0};
  EXPECT_NEAR(eval_objective(ObjectiveKind::kCS, 1.0, b, c),
              sector_area(kShape.width(), 4.0, 6.0) / 0.01, 0.2);
}

TEST(Objectives, WeightedSumMatchesFineQuadrature) {
  ObjectiveContext c = context();
  Wavy f;
  double theta = 0.7;
  AngleInterval iv = fov_interval(theta, kShape);
  const int n = 200000;
  double q = 0.0;
  for (int k = 0; k < n; ++k) {
    double phi = iv.lo() + (k + 0.5) * iv.width() / n;
    double u = f.upper(phi), l = f.lower(phi);
    q += 0.5 * (u * u - l * l) * fov_boundary(phi, theta, kShape) / kShape.d_cam();
  }
  q *= iv.width() / n / 0.01;
  double got = eval_objective(ObjectiveKind::kCSW, theta, f, c);
  EXPECT_NEAR(got / q, 1.0, 0.02);
}

TEST(Objectives, ClippedAreaNeverExceedsFullArea) {
  ObjectiveContext c = context();
  Wavy f;
  for (int i = 0; i < 36; ++i) {
    double theta = kTwoPi * i / 36;
    double full = eval_objective(ObjectiveKind::kCS, theta, f, c);
    double clipped = eval_objective(ObjectiveKind::kI, theta, f, c);
    double weighted = eval_objective(ObjectiveKind::kCSW, theta, f, c);
    EXPECT_LE(clipped, full + 1e-9);
    EXPECT_LE(weighted, full + 1e-9);
    EXPECT_GE(clipped, 0.0);
  }
}

TEST(Objectives, ClippedEqualsFullForThinBandNearOrigin) {
  ObjectiveContext c = context();
  Band b{1.0, 0.5};
  EXPECT_NEAR(eval_objective(ObjectiveKind::kI, 3.0, b, c),
              eval_objective(ObjectiveKind::kCS, 3.0, b, c), 1e-9);
}

// Extent of the angles around theta at which radius l is inside the FOV,
// found by a fine scan.
std::pair<double, double> scanned_extent(double theta, double l) {
  auto inside = [&](double phi) {
    return in_fov(to_camera_frame(phi, l, theta, kShape.d_cam()), kShape);
  };
  double half = kShape.half_width();
  auto walk = [&](int dir) {
    double d = 0.0;
    while (d + 1e-5 <= half && inside(theta + dir * (d + 1e-5))) d += 1e-5;
    return d;
  };
  return {walk(-1), walk(+1)};
}

TEST(Objectives, IntersectionIntervalMatchesFovScan) {
  for (double l : {2.0, 5.0, 7.0, 9.0}) {
    for (double theta : {0.0, 1.3}) {
      AngleInterval iv = phi_intersection(theta, Band{l + 1.0, l}, kShape, 0.01);
      auto [left, right] = scanned_extent(theta, l);
      EXPECT_NEAR(iv.lo(), theta - left, 2e-5) << l;
      EXPECT_NEAR(iv.width(), left + right, 4e-5) << l;
    }
  }
}

TEST(Objectives, IntersectionObjectiveSumsOverItsInterval) {
  ObjectiveContext c = context();
  Band b{9.5, 7.0};
  double theta = 2.0;
  AngleInterval iv = objective_interval(ObjectiveKind::kC, theta, b, c);
  EXPECT_LT(iv.width(), kShape.width());
  double want = interval_sum(iv, c.sum_step, [](double) { return 0.5 * (9.5 * 9.5 - 49.0); });
  EXPECT_NEAR(eval_objective(ObjectiveKind::kC, theta, b, c), want / 0.01, 1e-9);
  AngleInterval full = objective_interval(ObjectiveKind::kCS, theta, b, c);
  EXPECT_NEAR(full.width(), kShape.width(), 1e-12);
  EXPECT_THROW(objective_interval(ObjectiveKind::kU, theta, b, c), ConfigError);
}

TEST(Objectives, RefinedGridSum) {
  ObjectiveContext c = context();
  Wavy f;
  for (int t : {1, 3, 10}) {
    c.t = t;
    int n = c.schedule.grid_points(t);
    for (double theta : {0.3, 4.1}) {
      double want = 0.0;
      for (int j = 0; j < n; ++j) {
        double phi = kTwoPi * j / n;
        if (std::abs(signed_angle(phi - theta)) > kShape.half_width()) continue;
        double u = f.upper(phi), l = f.lower(phi);
        want += 0.5 * (u * u - l * l) * kTwoPi / n;
      }
      EXPECT_NEAR(eval_objective(ObjectiveKind::kCSRefined, theta, f, c), want / 0.01,
                  1e-9 * want / 0.01);
    }
  }
  c.t = 40;
  double cs = eval_objective(ObjectiveKind::kCS, 0.3, f, c);
  EXPECT_NEAR(eval_objective(ObjectiveKind::kCSRefined, 0.3, f, c) / cs, 1.0, 0.01);
}

// Pixels with centre inside the FOV and between the bounds, over a box that
// holds the whole scene.
int exhaustive_uncertain_pixels(double theta, const Wavy& f, double h) {
  int n = 0;
  int m = static_cast<int>(std::ceil(11.0 / h));
  for (int ix = -m; ix < m; ++ix) {
    for (int iy = -m; iy < m; ++iy) {
      double x = (ix + 0.5) * h, y = (iy + 0.5) * h;
      double r = std::hypot(x, y), phi = std::atan2(y, x);
      if (!in_fov(to_camera_frame(phi, r, theta, kShape.d_cam()), kShape)) continue;
      if (r < f.lower(phi) || r > f.upper(phi)) continue;
      ++n;
    }
  }
  return n;
}

TEST(Objectives, UncertainPixelsMatchExhaustiveCount) {
  ObjectiveContext c = context();
  Wavy f;
  for (double theta : {0.0, 0.8, 2.9, 4.7}) {
    EXPECT_EQ(eval_objective(ObjectiveKind::kIOA, theta, f, c),
              exhaustive_uncertain_pixels(theta, f, 0.1))
        << theta;
  }
}

TEST(Objectives, MeasuredSurfaceOccludesUncertainPixels) {
  ObjectiveContext c = context();
  Band b{6.0, 4.0};
  double open = eval_objective(ObjectiveKind::kIOA, 1.0, b, c);
  SurfacePointSet wall = discretize(SurfaceObject::circle(5.0), 0.1);
  PixelGrid g(wall);
  c.measured_grid = &g;
  double shaded = eval_objective(ObjectiveKind::kIOA, 1.0, b, c);
  EXPECT_LT(shaded, 0.7 * open);
  EXPECT_GT(shaded, 0.0);
}

TEST(Objectives, SurfaceCountsMatchObserve) {
  ObjectiveContext c = context();
  SurfacePointSet truth = discretize(SurfaceObject::flower(2.0, 8.0, 2.0, 3, 0.1), 0.1);
  c.truth = &truth;
  Band b{6.0, 3.0};
  EXPECT_EQ(eval_objective(ObjectiveKind::kOS, 1.2, b, c),
            static_cast<double>(observe(1.2, truth, kShape).size()));
  PixelGrid tg(truth);
  c.truth_grid = &tg;
  EXPECT_EQ(eval_objective(ObjectiveKind::kOS, 1.2, b, c),
            static_cast<double>(observe(1.2, truth, kShape).size()));
  SurfacePointSet up = discretize(SurfaceObject::circle(6.0), 0.1);
  EXPECT_EQ(eval_objective(ObjectiveKind::kOCU, 1.2, b, c),
            static_cast<double>(observe(1.2, up, kShape).size()));
  SurfacePointSet low = discretize(SurfaceObject::circle(3.0), 0.1);
  c.lower_curve = &low;
  EXPECT_EQ(eval_objective(ObjectiveKind::kOCL, 1.2, b, c),
            static_cast<double>(observe(1.2, low, kShape).size()));
  c.truth = nullptr;
  EXPECT_THROW(eval_objective(ObjectiveKind::kOS, 1.2, b, c), ConfigError);
}

TEST(Objectives, ZeroWidthBandScoresZero) {
  ObjectiveContext c = context();
  Band b{5.0, 5.0};
  for (ObjectiveKind k : {ObjectiveKind::kI, ObjectiveKind::kC, ObjectiveKind::kCS,
                          ObjectiveKind::kCSP, ObjectiveKind::kCSW, ObjectiveKind::kU,
                          ObjectiveKind::kUP, ObjectiveKind::kCSRefined}) {
    EXPECT_EQ(eval_objective(k, 0.5, b, c), 0.0) << to_string(k);
  }
}

}  // namespace
}  // namespace nbv
