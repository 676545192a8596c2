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

#ifndef NBV_ANGLES_HPP_
#define NBV_ANGLES_HPP_

#include <cmath>
#include <numbers>

namespace nbv {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Maps an angle into [0, 2*pi).
inline double wrap_angle(double a) {
  double w = std::fmod(a, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

// Maps an angle into (-pi, pi].
inline double signed_angle(double a) {
  double w = wrap_angle(a);
  return w > kPi ? w - kTwoPi : w;
}

// Closed arc of the circle starting at lo and running counter-clockwise
// for width radians.
class AngleInterval {
 public:
  AngleInterval() = default;
  AngleInterval(double lo, double width) : lo_(lo), width_(width) {
    if (width_ < 0.0) width_ = 0.0;
    if (width_ > kTwoPi) width_ = kTwoPi;
  }

  static AngleInterval centered(double center, double half_width) {
    return AngleInterval(center - half_width, 2.0 * half_width);
  }

  // Unwrapped endpoints; hi() - lo() == width().
  double lo() const { return lo_; }
  double hi() const { return lo_ + width_; }
  double width() const { return width_; }
  bool empty() const { return width_ <= 0.0; }

  // Counter-clockwise offset of a from lo, in [0, 2*pi).
  double offset(double a) const { return wrap_angle(a - lo_); }

  bool contains(double a, double tol = 1e-12) const {
    if (width_ >= kTwoPi) return true;
    double off = offset(a);
    return off <= width_ + tol || off >= kTwoPi - tol;
  }

 private:
  double lo_ = 0.0;
  double width_ = 0.0;
};

}  // namespace nbv

#endif  // NBV_ANGLES_HPP_
