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

// Gaussian-process belief over the radial surface function and the
// confidence bounds derived from it.

#ifndef NBV_GP_HPP_
#define NBV_GP_HPP_

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "nbv/angles.hpp"
#include "nbv/errors.hpp"
#include "nbv/kernels.hpp"

namespace nbv {

struct Prediction {
  std::vector<double> mean;
  std::vector<double> variance;
};

// Factor A + jitter * I with jitter escalating from 1e-10 to 1e-6 times
// the prior variance.
inline Eigen::MatrixXd robust_cholesky(const Eigen::MatrixXd& a,
                                       double prior_variance) {
  double base = prior_variance > 0.0 ? prior_variance : 1.0;
  for (double j = 1e-10; j <= 1e-6 * 1.0000001; j *= 10.0) {
    Eigen::MatrixXd m = a;
    m.diagonal().array() += j * base;
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() == Eigen::Success) {
      Eigen::MatrixXd l = llt.matrixL();
      if (l.allFinite()) return l;
    }
  }
  throw NumericalError("Cholesky factorisation failed after jitter 1e-6");
}

// Posterior over f given noisy point measurements. Repeated measurements at
// the same input are stored as their mean with noise variance sigma^2 / n,
// which yields the same posterior as keeping them separately.
class GPState {
 public:
  GPState() = default;
  GPState(Kernel kernel, double sigma_eps, double mean)
      : kernel_(std::move(kernel)), sigma_eps_(sigma_eps), mean_(mean) {
    detail::require(sigma_eps >= 0.0 && std::isfinite(sigma_eps),
                    "noise sigma must be non-negative");
  }

  const Kernel& kernel() const { return kernel_; }
  double sigma_eps() const { return sigma_eps_; }
  double prior_mean() const { return mean_; }
  std::size_t size() const { return x_.size(); }
  std::size_t num_measurements() const { return total_; }
  const std::vector<double>& inputs() const { return x_; }

  void update(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) {
      throw ConfigError("update needs as many values as inputs");
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
        throw ConfigError("non-finite observation");
      }
      auto it = index_.find(xs[i]);
      if (it == index_.end()) {
        index_.emplace(xs[i], x_.size());
        x_.push_back(xs[i]);
        sum_.push_back(ys[i]);
        count_.push_back(1);
      } else {
        sum_[it->second] += ys[i];
        count_[it->second] += 1;
      }
    }
    total_ += xs.size();
    refactor();
  }

  Prediction predict(std::span<const double> q) const {
    Prediction p;
    p.mean.assign(q.size(), mean_);
    p.variance.assign(q.size(), kernel_.variance());
    if (x_.empty() || q.empty()) return p;
    Eigen::MatrixXd kq = cross(q);
    Eigen::VectorXd mu = kq.transpose() * alpha_;
    Eigen::MatrixXd v = l_.triangularView<Eigen::Lower>().solve(kq);
    Eigen::VectorXd reduce = v.colwise().squaredNorm().transpose();
    double prior = kernel_(0.0);
    for (std::size_t j = 0; j < q.size(); ++j) {
      p.mean[j] = mean_ + mu(j);
      p.variance[j] = std::max(prior - reduce(j), 0.0);
    }
    return p;
  }

  double mean_at(double phi) const {
    return predict(std::span<const double>(&phi, 1)).mean[0];
  }
  double sd_at(double phi) const {
    return std::sqrt(predict(std::span<const double>(&phi, 1)).variance[0]);
  }

  // Full posterior covariance between query points.
  Eigen::MatrixXd covariance(std::span<const double> q) const {
    Eigen::MatrixXd c(q.size(), q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
      for (std::size_t j = 0; j < q.size(); ++j) c(i, j) = kernel_(q[i] - q[j]);
    }
    if (x_.empty()) return c;
    Eigen::MatrixXd v = l_.triangularView<Eigen::Lower>().solve(cross(q));
    c.noalias() -= v.transpose() * v;
    return c;
  }

 private:
  Eigen::MatrixXd cross(std::span<const double> q) const {
    Eigen::MatrixXd kq(x_.size(), q.size());
    for (std::size_t j = 0; j < q.size(); ++j) {
      for (std::size_t i = 0; i < x_.size(); ++i) kq(i, j) = kernel_(x_[i] - q[j]);
    }
    return kq;
  }

  void refactor() {
    std::size_t n = x_.size();
    Eigen::MatrixXd k(n, n);
    Eigen::VectorXd resid(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        double v = kernel_(x_[i] - x_[j]);
        k(i, j) = v;
        k(j, i) = v;
      }
      k(i, i) += sigma_eps_ * sigma_eps_ / count_[i];
      resid(i) = sum_[i] / count_[i] - mean_;
    }
    l_ = robust_cholesky(k, kernel_.variance());
    alpha_ = l_.triangularView<Eigen::Lower>().solve(resid);
    l_.triangularView<Eigen::Lower>().transpose().solveInPlace(alpha_);
  }

  Kernel kernel_;
  double sigma_eps_ = 0.2;
  double mean_ = 0.0;
  std::vector<double> x_;
  std::vector<double> sum_;
  std::vector<int> count_;
  std::map<double, std::size_t> index_;
  std::size_t total_ = 0;
  Eigen::MatrixXd l_;
  Eigen::VectorXd alpha_;
};

enum class BetaMode { kStatic, kUnionBound };

// Confidence parameter for a countable-discretisation bound; |D_t| grows
// as t^2 and the union bound uses pi_t = pi^2 t^2 / 6.
inline double discretization_size(int t, double a, double b, double delta) {
  return 2.0 * kPi * b * std::sqrt(std::log(2.0 * a / delta)) * t * t;
}

inline double beta_union_bound(int t, double a, double b, double delta) {
  if (t < 1) throw DomainError("round index must be at least 1");
  detail::require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
  detail::require(a > 0.0 && b > 0.0, "a and b must be positive");
  detail::require(2.0 * a / delta > 1.0, "2a/delta must exceed 1");
  double pi_t = kPi * kPi * t * t / 6.0;
  return 2.0 * std::log(discretization_size(t, a, b, delta) * pi_t /
                        (0.5 * delta));
}

struct ConfidenceSchedule {
  BetaMode mode = BetaMode::kStatic;
  double sqrt_beta = 2.0;
  double a = 1.0;
  double b = 1.0;
  double delta = 0.1;

  void validate() const {
    if (mode == BetaMode::kStatic) {
      detail::require(sqrt_beta >= 0.0, "sqrt_beta must be non-negative");
    } else {
      beta_union_bound(1, a, b, delta);
    }
  }

  // Half-width of the confidence band at round t for posterior sd.
  double half_width(int t, double sd) const {
    if (mode == BetaMode::kStatic) return sqrt_beta * sd;
    return std::sqrt(beta_union_bound(t, a, b, delta)) * sd + 1.0 / (double(t) * t);
  }

  // Number of points of the round-t angular grid.
  int grid_points(int t) const {
    double a0 = mode == BetaMode::kUnionBound ? a : 1.0;
    double b0 = mode == BetaMode::kUnionBound ? b : 1.0;
    double d0 = mode == BetaMode::kUnionBound ? delta : 0.1;
    return static_cast<int>(std::ceil(discretization_size(t, a0, b0, d0)));
  }
};

inline std::string to_string(BetaMode m) {
  return m == BetaMode::kStatic ? "static" : "union_bound";
}

struct Bounds {
  double lower = 0.0;
  double upper = 0.0;
};

// Confidence bounds at the query points for round t. Lower bounds are
// clamped at zero since radii cannot be negative.
inline std::vector<Bounds> confidence_bounds(const GPState& gp,
                                             const ConfidenceSchedule& s,
                                             int t,
                                             std::span<const double> q) {
  Prediction p = gp.predict(q);
  std::vector<Bounds> out(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    double w = s.half_width(t, std::sqrt(p.variance[i]));
    out[i].upper = p.mean[i] + w;
    out[i].lower = std::max(p.mean[i] - w, 0.0);
  }
  return out;
}

// Confidence bounds tabulated on a uniform periodic grid and linearly
// interpolated between nodes.
class GriddedBounds {
 public:
  GriddedBounds(const GPState& gp, const ConfidenceSchedule& s, int t,
                int resolution)
      : n_(resolution) {
    detail::require(resolution >= 8, "belief grid needs at least 8 nodes");
    std::vector<double> q(n_);
    for (int i = 0; i < n_; ++i) q[i] = kTwoPi * i / n_;
    Prediction p = gp.predict(q);
    upper_.resize(n_);
    lower_.resize(n_);
    mean_ = p.mean;
    sd_.resize(n_);
    for (int i = 0; i < n_; ++i) {
      sd_[i] = std::sqrt(p.variance[i]);
      double w = s.half_width(t, sd_[i]);
      upper_[i] = p.mean[i] + w;
      lower_[i] = std::max(p.mean[i] - w, 0.0);
    }
  }

  double upper(double phi) const { return interp(upper_, phi); }
  double lower(double phi) const { return interp(lower_, phi); }
  double mean(double phi) const { return interp(mean_, phi); }
  double sd(double phi) const { return interp(sd_, phi); }

 private:
  double interp(const std::vector<double>& v, double phi) const {
    double x = wrap_angle(phi) / kTwoPi * n_;
    int i = static_cast<int>(std::floor(x));
    double f = x - i;
    i %= n_;
    int j = (i + 1) % n_;
    return (1.0 - f) * v[i] + f * v[j];
  }

  int n_;
  std::vector<double> upper_;
  std::vector<double> lower_;
  std::vector<double> mean_;
  std::vector<double> sd_;
};

// Confidence bounds evaluated exactly at every query.
class ExactBounds {
 public:
  ExactBounds(const GPState& gp, const ConfidenceSchedule& s, int t)
      : gp_(&gp), s_(s), t_(t) {}

  double upper(double phi) const { return at(phi).upper; }
  double lower(double phi) const { return at(phi).lower; }

 private:
  Bounds at(double phi) const {
    return confidence_bounds(*gp_, s_, t_, std::span<const double>(&phi, 1))[0];
  }

  const GPState* gp_;
  ConfidenceSchedule s_;
  int t_;
};

}  // namespace nbv

#endif  // NBV_GP_HPP_
