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

// View-scoring functions evaluated on confidence bounds of the surface.
//
// A bounds field is any type with upper(phi) and lower(phi). Area-type
// objectives are measured in pixels (divided by h^2).

#ifndef NBV_OBJECTIVES_HPP_
#define NBV_OBJECTIVES_HPP_

#include <algorithm>
#include <cmath>
#include <concepts>
#include <optional>
#include <string>
#include <vector>

#include "nbv/angles.hpp"
#include "nbv/camera.hpp"
#include "nbv/errors.hpp"
#include "nbv/geometry.hpp"
#include "nbv/gp.hpp"
#include "nbv/world.hpp"

namespace nbv {

template <class F>
concept BoundsField = requires(const F& f, double phi) {
  { f.upper(phi) } -> std::convertible_to<double>;
  { f.lower(phi) } -> std::convertible_to<double>;
};

enum class ObjectiveKind {
  kOS,         // points of the true surface seen
  kOCU,        // points of the upper-bound curve seen
  kOCL,        // points of the lower-bound curve seen
  kIOA,        // uncertain pixels inside the FOV and not occluded
  kI,          // uncertain area clipped by the FOV
  kC,          // uncertain area over the intersection interval
  kCS,         // uncertain area over the full FOV interval
  kCSP,        // radial uncertainty length over the FOV interval
  kCSW,        // CS weighted by fov(phi) / d_cam
  kU,          // uncertainty at the pose angle times the FOV width
  kUP,         // radial uncertainty at the pose angle times the FOV width
  kCSRefined,  // CS on the round-dependent angular grid
};

inline const std::vector<std::pair<ObjectiveKind, std::string>>& objective_names() {
  static const std::vector<std::pair<ObjectiveKind, std::string>> names = {
      {ObjectiveKind::kOS, "OS"},   {ObjectiveKind::kOCU, "OCU"},
      {ObjectiveKind::kOCL, "OCL"}, {ObjectiveKind::kIOA, "IOA"},
      {ObjectiveKind::kI, "I"},     {ObjectiveKind::kC, "C"},
      {ObjectiveKind::kCS, "CS"},   {ObjectiveKind::kCSP, "CSP"},
      {ObjectiveKind::kCSW, "CSW"}, {ObjectiveKind::kU, "U"},
      {ObjectiveKind::kUP, "UP"},   {ObjectiveKind::kCSRefined, "CS-refined"},
  };
  return names;
}

inline std::string to_string(ObjectiveKind k) {
  for (const auto& [kind, name] : objective_names()) {
    if (kind == k) return name;
  }
  return "?";
}

inline std::optional<ObjectiveKind> try_objective_from_string(const std::string& s) {
  for (const auto& [kind, name] : objective_names()) {
    if (name == s) return kind;
  }
  return std::nullopt;
}

inline ObjectiveKind objective_from_string(const std::string& s) {
  auto k = try_objective_from_string(s);
  if (!k) throw ConfigError("unknown objective '" + s + "'");
  return *k;
}

// Objectives that sum over an angular interval and can serve as the first
// phase of a two-phase planner.
inline bool has_interval(ObjectiveKind k) {
  switch (k) {
    case ObjectiveKind::kI:
    case ObjectiveKind::kC:
    case ObjectiveKind::kCS:
    case ObjectiveKind::kCSP:
    case ObjectiveKind::kCSW:
    case ObjectiveKind::kCSRefined:
      return true;
    default:
      return false;
  }
}

struct ObjectiveContext {
  FovShape shape;
  double h = 0.1;
  double sum_step = 0.1 / 8.0;  // angular step of interval sums
  int t = 1;                    // round being planned
  ConfidenceSchedule schedule;
  VisibilityOptions visibility;
  double intersection_tol = 1e-6;

  // True surface, for OS.
  const SurfacePointSet* truth = nullptr;
  const PixelGrid* truth_grid = nullptr;
  // Surface measured so far, for IOA occlusion.
  const PixelGrid* measured_grid = nullptr;
  // Discretised bound curves, for OCU and OCL. Built on demand when null.
  const SurfacePointSet* upper_curve = nullptr;
  const SurfacePointSet* lower_curve = nullptr;
};

// sum_{k=0}^{floor(width/step)} g(lo + k step) * step.
template <class G>
double interval_sum(const AngleInterval& iv, double step, G&& g) {
  if (!(step > 0.0)) throw ConfigError("sum step must be positive");
  long n = static_cast<long>(std::floor(iv.width() / step + 1e-9));
  double s = 0.0;
  for (long k = 0; k <= n; ++k) s += g(iv.lo() + k * step);
  return s * step;
}

// Sub-interval of the FOV interval where the lower bound stays inside the
// FOV, found by scanning outward from theta and bisecting the crossing.
template <BoundsField F>
AngleInterval phi_intersection(double theta, const F& field,
                               const FovShape& shape, double scan_step,
                               double tol = 1e-6) {
  double half = shape.half_width();
  auto gap = [&](double phi) {
    return field.lower(phi) - fov_boundary(phi, theta, shape);
  };
  auto edge = [&](int dir) {
    if (gap(theta) >= 0.0) return 0.0;
    double prev = 0.0;
    long n = static_cast<long>(std::ceil(half / scan_step));
    for (long k = 1; k <= n; ++k) {
      double d = std::min(k * scan_step, half);
      if (gap(theta + dir * d) >= 0.0) {
        double a = prev, b = d;
        while (b - a > tol) {
          double m = 0.5 * (a + b);
          if (gap(theta + dir * m) >= 0.0) {
            b = m;
          } else {
            a = m;
          }
        }
        return 0.5 * (a + b);
      }
      prev = d;
    }
    return half;
  };
  double left = edge(-1);
  double right = edge(+1);
  return AngleInterval(theta - left, left + right);
}

template <BoundsField F>
SurfacePointSet bound_curve(const F& field, bool upper, double d_cam, double h) {
  return discretize(
      [&](double phi) {
        double v = upper ? field.upper(phi) : field.lower(phi);
        return std::clamp(v, 0.0, d_cam);
      },
      h);
}

namespace detail {

template <BoundsField F>
double count_uncertain_pixels(double theta, const F& field,
                              const ObjectiveContext& ctx) {
  const FovShape& shape = ctx.shape;
  double h = ctx.h;
  Vec2 cam = camera_position(theta, shape.d_cam());
  // Bounding box of the FOV sector.
  double a0 = theta + kPi - 0.5 * shape.alpha();
  double a1 = theta + kPi + 0.5 * shape.alpha();
  double xmin = cam.x, xmax = cam.x, ymin = cam.y, ymax = cam.y;
  auto grow = [&](double a) {
    double x = cam.x + shape.d_dof() * std::cos(a);
    double y = cam.y + shape.d_dof() * std::sin(a);
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  };
  grow(a0);
  grow(a1);
  for (int q = -8; q <= 8; ++q) {
    double a = q * 0.5 * kPi;
    if (a > a0 && a < a1) grow(a);
  }
  auto lo = [&](double v) { return static_cast<long>(std::floor(v / h)); };
  double count = 0.0;
  for (long ix = lo(xmin); ix <= lo(xmax); ++ix) {
    for (long iy = lo(ymin); iy <= lo(ymax); ++iy) {
      double x = (ix + 0.5) * h, y = (iy + 0.5) * h;
      double r = std::hypot(x, y);
      double phi = std::atan2(y, x);
      if (!in_fov(to_camera_frame(phi, r, theta, shape.d_cam()), shape)) continue;
      if (r < field.lower(phi) || r > field.upper(phi)) continue;
      if (ctx.measured_grid != nullptr) {
        bool hit = traverse_pixels(cam, {x, y}, h, [&](std::int64_t jx, std::int64_t jy) {
          if (jx == ix && jy == iy) return false;
          return ctx.measured_grid->owner(jx, jy) >= 0;
        });
        if (hit) continue;
      }
      count += 1.0;
    }
  }
  return count;
}

}  // namespace detail

// Value of objective k for a camera at theta.
template <BoundsField F>
double eval_objective(ObjectiveKind k, double theta, const F& field,
                      const ObjectiveContext& ctx) {
  const FovShape& shape = ctx.shape;
  const double inv_area = 1.0 / (ctx.h * ctx.h);
  const AngleInterval fov_iv = fov_interval(theta, shape);
  auto area = [&](double phi) {
    double u = field.upper(phi), l = field.lower(phi);
    return 0.5 * std::max(u * u - l * l, 0.0);
  };
  switch (k) {
    case ObjectiveKind::kOS: {
      if (ctx.truth == nullptr) throw ConfigError("OS needs the true surface");
      if (ctx.truth_grid != nullptr) {
        return static_cast<double>(
            observe(theta, *ctx.truth, *ctx.truth_grid, shape, ctx.visibility).size());
      }
      return static_cast<double>(observe(theta, *ctx.truth, shape, ctx.visibility).size());
    }
    case ObjectiveKind::kOCU:
    case ObjectiveKind::kOCL: {
      bool up = k == ObjectiveKind::kOCU;
      const SurfacePointSet* curve = up ? ctx.upper_curve : ctx.lower_curve;
      if (curve != nullptr) {
        return static_cast<double>(observe(theta, *curve, shape, ctx.visibility).size());
      }
      SurfacePointSet c = bound_curve(field, up, shape.d_cam(), ctx.h);
      return static_cast<double>(observe(theta, c, shape, ctx.visibility).size());
    }
    case ObjectiveKind::kIOA:
      return detail::count_uncertain_pixels(theta, field, ctx);
    case ObjectiveKind::kI:
      return inv_area * interval_sum(fov_iv, ctx.sum_step, [&](double phi) {
               double u = std::min(field.upper(phi), fov_boundary(phi, theta, shape));
               double l = field.lower(phi);
               return 0.5 * std::max(u * u - l * l, 0.0);
             });
    case ObjectiveKind::kC: {
      AngleInterval iv = phi_intersection(theta, field, shape, ctx.sum_step,
                                          ctx.intersection_tol);
      return inv_area * interval_sum(iv, ctx.sum_step, area);
    }
    case ObjectiveKind::kCS:
      return inv_area * interval_sum(fov_iv, ctx.sum_step, area);
    case ObjectiveKind::kCSP:
      return inv_area * interval_sum(fov_iv, ctx.sum_step, [&](double phi) {
               return std::max(field.upper(phi) - field.lower(phi), 0.0);
             });
    case ObjectiveKind::kCSW:
      return inv_area * interval_sum(fov_iv, ctx.sum_step, [&](double phi) {
               return area(phi) * fov_boundary(phi, theta, shape) / shape.d_cam();
             });
    case ObjectiveKind::kU:
      return inv_area * fov_iv.width() * area(theta);
    case ObjectiveKind::kUP:
      return inv_area * fov_iv.width() *
             std::max(field.upper(theta) - field.lower(theta), 0.0);
    case ObjectiveKind::kCSRefined: {
      int n = std::max(ctx.schedule.grid_points(ctx.t), 1);
      double step = kTwoPi / n;
      long first = static_cast<long>(std::ceil((fov_iv.lo() - 1e-12) / step));
      double sum = 0.0;
      for (long j = first; j * step <= fov_iv.hi() + 1e-12; ++j) sum += area(j * step);
      return inv_area * sum * step;
    }
  }
  return 0.0;
}

// Interval an objective sums over, for the two-phase planner.
template <BoundsField F>
AngleInterval objective_interval(ObjectiveKind k, double theta, const F& field,
                                 const ObjectiveContext& ctx) {
  if (!has_interval(k)) {
    throw ConfigError("objective " + to_string(k) + " has no summation interval");
  }
  if (k == ObjectiveKind::kC) {
    return phi_intersection(theta, field, ctx.shape, ctx.sum_step,
                            ctx.intersection_tol);
  }
  return fov_interval(theta, ctx.shape);
}

}  // namespace nbv

#endif  // NBV_OBJECTIVES_HPP_
