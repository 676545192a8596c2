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

// Polar geometry of a camera on a circle of radius d_cam looking at the
// origin. Angles are world polar angles; distances are radii from the origin.

#ifndef NBV_GEOMETRY_HPP_
#define NBV_GEOMETRY_HPP_

#include <cmath>
#include <string>

#include "nbv/angles.hpp"
#include "nbv/errors.hpp"

namespace nbv {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 polar_to_cartesian(double phi, double r) {
  return {r * std::cos(phi), r * std::sin(phi)};
}

// Field-of-view shape shared by every camera pose.
class FovShape {
 public:
  FovShape() = default;
  FovShape(double d_cam, double d_dof, double alpha)
      : d_cam_(d_cam), d_dof_(d_dof), alpha_(alpha) {
    detail::require(d_cam > 0.0, "camera distance must be positive");
    detail::require(d_dof > 0.0, "depth of field must be positive");
    detail::require(alpha > 0.0 && alpha < kPi,
                    "field-of-view angle must lie in (0, pi)");
    double den = d_cam - d_dof * std::cos(0.5 * alpha);
    if (!(den > 0.0)) {
      throw ConfigError(
          "field of view reaches past the origin: d_cam - d_dof*cos(alpha/2) "
          "must be positive");
    }
    half_width_ = std::atan(d_dof * std::sin(0.5 * alpha) / den);
  }

  double d_cam() const { return d_cam_; }
  double d_dof() const { return d_dof_; }
  double alpha() const { return alpha_; }

  // Half of the angular extent of the FOV seen from the origin.
  double half_width() const { return half_width_; }
  double width() const { return 2.0 * half_width_; }

  // Distance from the origin to either far corner of the FOV.
  double endpoint_distance() const {
    double x = d_cam_ - d_dof_ * std::cos(0.5 * alpha_);
    double y = d_dof_ * std::sin(0.5 * alpha_);
    return std::hypot(x, y);
  }

 private:
  double d_cam_ = 10.0;
  double d_dof_ = 10.0;
  double alpha_ = 35.0 * kPi / 180.0;
  double half_width_ = 0.0;
};

// A point expressed relative to a camera at polar angle theta.
struct CameraFramePoint {
  double x = 0.0;      // along the line of sight
  double y = 0.0;      // across the line of sight
  double angle = 0.0;  // viewing angle from the line of sight
  double distance = 0.0;
};

inline CameraFramePoint to_camera_frame(double phi, double r, double theta,
                                        double d_cam) {
  CameraFramePoint p;
  p.x = d_cam - r * std::cos(theta - phi);
  p.y = r * std::sin(theta - phi);
  p.angle = std::atan2(p.y, p.x);
  p.distance = std::hypot(p.x, p.y);
  return p;
}

inline bool in_fov(const CameraFramePoint& p, const FovShape& shape,
                   double tol = 1e-12) {
  return std::abs(p.angle) <= 0.5 * shape.alpha() + tol &&
         p.distance <= shape.d_dof() + tol;
}

// Radius at polar angle phi of the ray leaving the camera at theta with
// casting angle alpha relative to the line of sight.
inline double ray(double phi, double theta, double alpha, double d_cam) {
  detail::require(d_cam > 0.0, "camera distance must be positive");
  double a = signed_angle(alpha);
  if (std::abs(a) < 1e-12 || std::abs(std::abs(a) - kPi) < 1e-12) {
    throw DomainError("ray direction passes through the origin");
  }
  double delta = signed_angle(phi - theta);
  if (delta == 0.0) return d_cam;
  double reach = kPi - std::abs(a);
  bool in_span = a > 0.0 ? (delta < 0.0 && -delta < reach)
                         : (delta > 0.0 && delta < reach);
  if (!in_span) {
    throw DomainError("angle " + std::to_string(phi) +
                      " is not reached by the ray");
  }
  double psi = theta + a;
  double m = std::fmod(wrap_angle(psi), kPi);
  double num = 0.0;
  double den = 0.0;
  if (m < 0.25 * kPi || m >= 0.75 * kPi) {
    double t = std::tan(psi);
    num = std::sin(theta) - t * std::cos(theta);
    den = std::sin(phi) - t * std::cos(phi);
  } else {
    double c = std::cos(psi) / std::sin(psi);
    num = std::cos(theta) - c * std::sin(theta);
    den = std::cos(phi) - c * std::sin(phi);
  }
  if (den == 0.0) throw DomainError("ray is parallel to the query direction");
  return d_cam * num / den;
}

// Radius of the FOV boundary at polar angle phi for a camera at theta.
inline double fov_boundary(double phi, double theta, const FovShape& shape) {
  double delta = signed_angle(phi - theta);
  if (std::abs(delta) > shape.half_width() + 1e-12) {
    throw DomainError("angle " + std::to_string(phi) +
                      " lies outside the field of view");
  }
  if (delta == 0.0) return shape.d_cam();
  double a = delta < 0.0 ? 0.5 * shape.alpha() : -0.5 * shape.alpha();
  return ray(phi, theta, a, shape.d_cam());
}

// Angular interval covered by the FOV of a camera at theta.
inline AngleInterval fov_interval(double theta, const FovShape& shape) {
  return AngleInterval::centered(theta, shape.half_width());
}

// Area of an annular sector of angular width dphi between radii l and u.
inline double sector_area(double dphi, double l, double u) {
  if (dphi < 0.0) throw DomainError("sector width must be non-negative");
  if (l < 0.0 || u < 0.0) throw DomainError("radii must be non-negative");
  return 0.5 * dphi * (u * u - l * l);
}

}  // namespace nbv

#endif  // NBV_GEOMETRY_HPP_
