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

// Fourier spectrum of the periodic Matern kernel on the circle.

#ifndef NBV_SPECTRAL_HPP_
#define NBV_SPECTRAL_HPP_

#include <cmath>
#include <vector>

#include "nbv/angles.hpp"
#include "nbv/errors.hpp"

namespace nbv {

class MaternSpectrum {
 public:
  MaternSpectrum(double nu, double sigma_f, double length)
      : nu_(nu), sigma_f_(sigma_f), length_(length) {
    detail::require(nu > 0.0, "smoothness must be positive");
    detail::require(length > 0.0, "length scale must be positive");
    detail::require(sigma_f >= 0.0, "sigma_f must be non-negative");
    // The coefficients sum to k(0) = sigma_f^2.
    const long kTerms = 200000;
    double z = shape(0.0);
    for (long m = kTerms; m >= 1; --m) z += 2.0 * shape(static_cast<double>(m));
    double e = 2.0 * nu_;
    z += 2.0 * std::pow(kTerms + 0.5, -e) / e;
    c1_ = sigma_f_ * sigma_f_ / z;
  }

  // Spectral density at frequency omega (cycles per radian).
  double density(double omega) const {
    return c1_ * shape(kTwoPi * omega);
  }

  // Fourier coefficient of mode m, i.e. density(m / (2 pi)).
  double coefficient(int m) const { return c1_ * shape(m); }

  // Mercer eigenvalues for the basis 1, cos(m x), sin(m x); lambda_1 is
  // the constant mode, later modes pair up.
  std::vector<double> eigenvalues(int count) const {
    std::vector<double> out;
    out.reserve(count);
    for (int m = 1; m <= count; ++m) {
      out.push_back(m == 1 ? coefficient(0) : 2.0 * coefficient(m - 1));
    }
    return out;
  }

  double normalizer() const { return c1_; }

 private:
  double shape(double w) const {
    return std::pow(2.0 * nu_ / (length_ * length_) + w * w, -(nu_ + 0.5));
  }

  double nu_;
  double sigma_f_;
  double length_;
  double c1_ = 0.0;
};

}  // namespace nbv

#endif  // NBV_SPECTRAL_HPP_
