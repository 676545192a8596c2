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

// Stationary kernels on the real line and their 2*pi-periodic versions.

#ifndef NBV_KERNELS_HPP_
#define NBV_KERNELS_HPP_

#include <cmath>
#include <string>

#include "nbv/angles.hpp"
#include "nbv/errors.hpp"

namespace nbv {

enum class KernelBase { kRbf, kMatern };

enum class Periodization {
  kNone,       // plain stationary kernel on the real line
  kWarp,       // k(2 |sin(r / 2)|)
  kSumFinite,  // normalised sum of 2*kappa + 1 shifted copies
  kSumClosed,  // closed form of the infinite shifted sum
  kTruncated,  // smoothly truncated base kernel, then summed
};

struct KernelParams {
  KernelBase base = KernelBase::kMatern;
  double sigma_f = 1.5;
  double length = 0.2;
  double nu = 1.5;
  Periodization periodization = Periodization::kSumClosed;
  int kappa = 1;
  double c1 = kPi;
  double c2 = kTwoPi;
};

namespace detail {

inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Smooth step used by the truncation weights.
inline double bump(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

}  // namespace detail

class Kernel {
 public:
  Kernel() : Kernel(KernelParams{}) {}

  explicit Kernel(const KernelParams& p) : p_(p) {
    detail::require(p.sigma_f >= 0.0 && std::isfinite(p.sigma_f),
                    "kernel sigma_f must be non-negative");
    detail::require(p.length > 0.0 && std::isfinite(p.length),
                    "kernel length scale must be positive");
    if (p.base == KernelBase::kMatern) {
      double q = p.nu - 0.5;
      detail::require(p.nu > 0.0 && std::abs(q - std::round(q)) < 1e-12,
                      "Matern smoothness must be a half-integer (n + 1/2)");
      order_ = static_cast<int>(std::round(q));
      detail::require(order_ <= 20, "Matern smoothness too large");
    }
    switch (p.periodization) {
      case Periodization::kSumFinite:
        detail::require(p.kappa >= 0, "kappa must be non-negative");
        break;
      case Periodization::kSumClosed:
        detail::require(p.base == KernelBase::kMatern && order_ <= 2,
                        "closed-form periodic sum needs Matern nu in "
                        "{1/2, 3/2, 5/2}");
        break;
      case Periodization::kTruncated:
        detail::require(p.c1 >= 0.0 && p.c1 < p.c2,
                        "truncation needs 0 <= c1 < c2");
        break;
      default:
        break;
    }
    scale_ = 1.0;
    double at_zero = raw(0.0);
    scale_ = at_zero > 0.0 ? 1.0 / at_zero : 0.0;
  }

  static Kernel rbf(double sigma_f, double length) {
    KernelParams p;
    p.base = KernelBase::kRbf;
    p.sigma_f = sigma_f;
    p.length = length;
    p.periodization = Periodization::kNone;
    return Kernel(p);
  }

  static Kernel matern(double nu, double sigma_f, double length) {
    KernelParams p;
    p.base = KernelBase::kMatern;
    p.nu = nu;
    p.sigma_f = sigma_f;
    p.length = length;
    p.periodization = Periodization::kNone;
    return Kernel(p);
  }

  Kernel warped() const {
    KernelParams p = p_;
    p.periodization = Periodization::kWarp;
    return Kernel(p);
  }

  Kernel summed(int kappa) const {
    KernelParams p = p_;
    p.periodization = Periodization::kSumFinite;
    p.kappa = kappa;
    return Kernel(p);
  }

  Kernel closed_sum() const {
    KernelParams p = p_;
    p.periodization = Periodization::kSumClosed;
    return Kernel(p);
  }

  Kernel truncated(double c1, double c2) const {
    KernelParams p = p_;
    p.periodization = Periodization::kTruncated;
    p.c1 = c1;
    p.c2 = c2;
    return Kernel(p);
  }

  const KernelParams& params() const { return p_; }
  double variance() const { return p_.sigma_f * p_.sigma_f; }

  double operator()(double r) const {
    return variance() * scale_ * raw(r);
  }

  // Base kernel on the real line with unit variance.
  double base_unit(double r) const {
    double d = std::abs(r);
    if (p_.base == KernelBase::kRbf) {
      return std::exp(-d * d / (2.0 * p_.length * p_.length));
    }
    double x = std::sqrt(2.0 * p_.nu) * d / p_.length;
    int n = order_;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
      sum += detail::factorial(n + i) /
             (detail::factorial(i) * detail::factorial(n - i)) *
             std::pow(2.0 * x, n - i);
    }
    return std::exp(-x) * detail::factorial(n) / detail::factorial(2 * n) *
           sum;
  }

  // Truncation weight t(r).
  double truncation_weight(double r) const {
    double d = std::abs(r);
    double dc = p_.c2 - p_.c1;
    double a = detail::bump((p_.c2 - d) / dc);
    double b = detail::bump((d - p_.c1) / dc);
    return a / (a + b);
  }

 private:
  // Unnormalised kernel value.
  double raw(double r) const {
    switch (p_.periodization) {
      case Periodization::kNone:
        return base_unit(r);
      case Periodization::kWarp:
        return base_unit(2.0 * std::abs(std::sin(0.5 * r)));
      case Periodization::kSumFinite: {
        double r0 = signed_angle(r);
        double s = 0.0;
        for (int i = -p_.kappa; i <= p_.kappa; ++i) {
          s += base_unit(r0 + kTwoPi * i);
        }
        return s;
      }
      case Periodization::kSumClosed:
        return closed(wrap_angle(r));
      case Periodization::kTruncated: {
        double r0 = wrap_angle(r);
        int k = static_cast<int>(std::ceil(p_.c2 / kTwoPi));
        double s = 0.0;
        for (int i = -k - 1; i <= k + 1; ++i) {
          double x = r0 + kTwoPi * i;
          if (std::abs(x) >= p_.c2) continue;
          s += truncation_weight(x) * base_unit(x);
        }
        return s;
      }
    }
    return 0.0;
  }

  // Infinite shifted Matern sum on [0, 2*pi), up to a constant factor.
  // Hyperbolic terms are scaled by exp(-a*pi) to avoid overflow.
  double closed(double r) const {
    double a = std::sqrt(2.0 * p_.nu) / p_.length;
    double big = a * kPi;
    double u = a * (r - kPi);
    double ch = 0.5 * (std::exp(u - big) + std::exp(-u - big));
    double sh = 0.5 * (std::exp(u - big) - std::exp(-u - big));
    double coth = 1.0 / std::tanh(big);
    switch (order_) {
      case 0:
        return ch;
      case 1:
        return (1.0 + big * coth) * ch - u * sh;
      default: {
        double c0 = 1.0 + big * coth + (2.0 / 3.0) * big * big * coth * coth -
                    big * big / 3.0;
        double c1 = -((2.0 / 3.0) * big * coth + 1.0);
        return c0 * ch + c1 * u * sh + u * u * ch / 3.0;
      }
    }
  }

  KernelParams p_;
  int order_ = 0;
  double scale_ = 1.0;
};

inline std::string to_string(Periodization p) {
  switch (p) {
    case Periodization::kNone:
      return "none";
    case Periodization::kWarp:
      return "warp";
    case Periodization::kSumFinite:
      return "psum_finite";
    case Periodization::kSumClosed:
      return "psum_closed";
    case Periodization::kTruncated:
      return "truncated";
  }
  return "none";
}

inline Periodization periodization_from_string(const std::string& s) {
  if (s == "none") return Periodization::kNone;
  if (s == "warp") return Periodization::kWarp;
  if (s == "psum_finite") return Periodization::kSumFinite;
  if (s == "psum_closed") return Periodization::kSumClosed;
  if (s == "truncated") return Periodization::kTruncated;
  throw ConfigError("unknown periodization '" + s + "'");
}

}  // namespace nbv

#endif  // NBV_KERNELS_HPP_
