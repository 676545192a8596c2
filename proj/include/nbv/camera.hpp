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

// Visibility of surface points from a camera pose and noisy measurement.

#ifndef NBV_CAMERA_HPP_
#define NBV_CAMERA_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "nbv/geometry.hpp"
#include "nbv/world.hpp"

namespace nbv {

// Dense lookup from pixel to the index of the surface point it holds.
class PixelGrid {
 public:
  PixelGrid() = default;
  explicit PixelGrid(const SurfacePointSet& s) {
    if (s.points.empty()) return;
    x0_ = x1_ = s.points[0].pixel.ix;
    y0_ = y1_ = s.points[0].pixel.iy;
    for (const auto& p : s.points) {
      x0_ = std::min(x0_, p.pixel.ix);
      x1_ = std::max(x1_, p.pixel.ix);
      y0_ = std::min(y0_, p.pixel.iy);
      y1_ = std::max(y1_, p.pixel.iy);
    }
    w_ = x1_ - x0_ + 1;
    owner_.assign(static_cast<std::size_t>(w_ * (y1_ - y0_ + 1)), -1);
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      const Pixel& p = s.points[i].pixel;
      owner_[static_cast<std::size_t>((p.iy - y0_) * w_ + (p.ix - x0_))] =
          static_cast<int>(i);
    }
  }

  int owner(std::int64_t ix, std::int64_t iy) const {
    if (owner_.empty() || ix < x0_ || ix > x1_ || iy < y0_ || iy > y1_) return -1;
    return owner_[static_cast<std::size_t>((iy - y0_) * w_ + (ix - x0_))];
  }

 private:
  std::int64_t x0_ = 0, x1_ = -1, y0_ = 0, y1_ = -1, w_ = 0;
  std::vector<int> owner_;
};

// Calls visit(ix, iy) for every pixel whose open square meets the segment
// a-b in more than a point, in order from a to b. Stops early when visit
// returns true and reports whether it did.
template <class Visit>
bool traverse_pixels(Vec2 a, Vec2 b, double h, Visit&& visit) {
  double ax = a.x / h, ay = a.y / h, bx = b.x / h, by = b.y / h;
  std::int64_t ix = static_cast<std::int64_t>(std::floor(ax));
  std::int64_t iy = static_cast<std::int64_t>(std::floor(ay));
  std::int64_t ex = static_cast<std::int64_t>(std::floor(bx));
  std::int64_t ey = static_cast<std::int64_t>(std::floor(by));
  double dx = bx - ax, dy = by - ay;
  int sx = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
  int sy = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
  const double inf = std::numeric_limits<double>::infinity();
  double tdx = sx != 0 ? 1.0 / std::abs(dx) : inf;
  double tdy = sy != 0 ? 1.0 / std::abs(dy) : inf;
  double tx = sx > 0 ? (ix + 1 - ax) * tdx : (sx < 0 ? (ax - ix) * tdx : inf);
  double ty = sy > 0 ? (iy + 1 - ay) * tdy : (sy < 0 ? (ay - iy) * tdy : inf);
  std::int64_t budget = std::abs(ex - ix) + std::abs(ey - iy) + 2;
  while (true) {
    if (visit(ix, iy)) return true;
    if ((ix == ex && iy == ey) || budget-- <= 0) return false;
    if (tx < ty) {
      if (tx > 1.0) return false;
      ix += sx;
      tx += tdx;
    } else if (ty < tx) {
      if (ty > 1.0) return false;
      iy += sy;
      ty += tdy;
    } else {
      if (tx > 1.0) return false;
      ix += sx;
      iy += sy;
      tx += tdx;
      ty += tdy;
    }
  }
}

struct VisibilityOptions {
  // Pixels within this Chebyshev distance of a point's own pixel never
  // occlude it. Zero means only the own pixel is ignored.
  int neighborhood = 1;
};

inline Vec2 camera_position(double theta, double d_cam) {
  return polar_to_cartesian(theta, d_cam);
}

// Whether surface point i is occluded from the camera by another point.
inline bool occluded(const SurfacePointSet& s, const PixelGrid& grid,
                     std::size_t i, Vec2 cam, const VisibilityOptions& opt) {
  const SurfacePoint& p = s.points[i];
  return traverse_pixels(cam, {p.x, p.y}, s.h, [&](std::int64_t ix, std::int64_t iy) {
    if (std::max(std::abs(ix - p.pixel.ix), std::abs(iy - p.pixel.iy)) <=
        opt.neighborhood) {
      return false;
    }
    return grid.owner(ix, iy) >= 0;
  });
}

// Indices of the surface points seen from pose theta, in angular order.
inline std::vector<int> observe(double theta, const SurfacePointSet& s,
                                const PixelGrid& grid, const FovShape& shape,
                                const VisibilityOptions& opt = {}) {
  std::vector<int> out;
  Vec2 cam = camera_position(theta, shape.d_cam());
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    const SurfacePoint& p = s.points[i];
    if (!in_fov(to_camera_frame(p.angle, p.radius, theta, shape.d_cam()), shape)) {
      continue;
    }
    if (!occluded(s, grid, i, cam, opt)) out.push_back(static_cast<int>(i));
  }
  return out;
}

inline std::vector<int> observe(double theta, const SurfacePointSet& s,
                                const FovShape& shape,
                                const VisibilityOptions& opt = {}) {
  return observe(theta, s, PixelGrid(s), shape, opt);
}

// Evenly spaced camera poses, the first at angle 0.
inline std::vector<double> pose_grid(int n) {
  detail::require(n >= 1, "pose grid needs at least one pose");
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = kTwoPi * i / n;
  return g;
}

// Observation sets of every pose of a grid.
struct VisibilityTable {
  std::vector<double> poses;
  std::vector<std::vector<int>> seen;
};

inline VisibilityTable build_visibility(const SurfacePointSet& s,
                                        const FovShape& shape,
                                        const std::vector<double>& poses,
                                        const VisibilityOptions& opt = {}) {
  VisibilityTable t;
  t.poses = poses;
  PixelGrid grid(s);
  t.seen.reserve(poses.size());
  for (double th : poses) t.seen.push_back(observe(th, s, grid, shape, opt));
  return t;
}

class NoiseModel {
 public:
  NoiseModel(double sigma, std::uint64_t seed) : sigma_(sigma), rng_(seed) {
    detail::require(sigma >= 0.0, "noise sigma must be non-negative");
  }
  double draw() { return sigma_ > 0.0 ? sigma_ * normal_(rng_) : 0.0; }
  double sigma() const { return sigma_; }

 private:
  double sigma_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// Noisy radii of the given surface points.
inline std::vector<double> measure(std::span<const int> idx,
                                   const SurfacePointSet& s, NoiseModel& noise) {
  std::vector<double> y;
  y.reserve(idx.size());
  for (int i : idx) y.push_back(s.points[static_cast<std::size_t>(i)].radius + noise.draw());
  return y;
}

}  // namespace nbv

#endif  // NBV_CAMERA_HPP_
