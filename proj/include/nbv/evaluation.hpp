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

// Coverage utility, regret, information gain and reconstruction metrics.

#ifndef NBV_EVALUATION_HPP_
#define NBV_EVALUATION_HPP_

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nbv/errors.hpp"
#include "nbv/gp.hpp"
#include "nbv/planner.hpp"

namespace nbv {

// |union of the observation sets of the given poses|.
inline int utility(const std::vector<std::vector<int>>& seen,
                   std::span<const int> poses, std::size_t surface_size) {
  std::vector<char> mark(surface_size, 0);
  int n = 0;
  for (int p : poses) {
    for (int i : seen[static_cast<std::size_t>(p)]) {
      if (!mark[i]) {
        mark[i] = 1;
        ++n;
      }
    }
  }
  return n;
}

// Points seen from pose p that no pose of the history has seen.
inline int marginal_utility(const std::vector<std::vector<int>>& seen, int p,
                            std::span<const int> history,
                            std::size_t surface_size) {
  std::vector<char> mark(surface_size, 0);
  for (int q : history) {
    for (int i : seen[static_cast<std::size_t>(q)]) mark[i] = 1;
  }
  return count_new(seen[static_cast<std::size_t>(p)], mark);
}

inline std::vector<long> cumulative_regret(const EpisodeRecord& e) {
  std::vector<long> out;
  long s = 0;
  for (const auto& r : e.rounds) {
    s += r.r_ind;
    out.push_back(s);
  }
  return out;
}

// log det of a symmetric positive definite matrix.
inline double log_det_spd(const Eigen::MatrixXd& a) {
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("matrix is not positive definite");
  }
  Eigen::MatrixXd l = llt.matrixL();
  return 2.0 * l.diagonal().array().log().sum();
}

struct InformationGain {
  double total = 0.0;
  std::vector<double> per_round;
};

// 1/2 sum_t log det(sigma^-2 Sigma_{t-1}(X_t) + I) for a sequence of input
// batches. Only the inputs matter, so the GP is fed placeholder values.
inline InformationGain information_gain(const Kernel& kernel, double sigma_eps,
                                        const std::vector<std::vector<double>>& batches) {
  if (!(sigma_eps > 0.0)) {
    throw ConfigError("information gain needs positive noise sigma");
  }
  GPState gp(kernel, sigma_eps, 0.0);
  InformationGain g;
  double inv = 1.0 / (sigma_eps * sigma_eps);
  for (const auto& b : batches) {
    double step = 0.0;
    if (!b.empty()) {
      Eigen::MatrixXd c = gp.covariance(b) * inv;
      c.diagonal().array() += 1.0;
      step = 0.5 * log_det_spd(c);
      std::vector<double> zeros(b.size(), 0.0);
      gp.update(b, zeros);
    }
    g.per_round.push_back(step);
    g.total += step;
  }
  return g;
}

struct VarianceBoundReport {
  double lhs = 0.0;  // 1/2 sum of prior-to-round posterior variances
  double rhs = 0.0;  // N_T / log(sigma^-2 + 1) * information gain
  double slack = 0.0;
  int max_batch = 0;
  double information = 0.0;
};

inline VarianceBoundReport variance_information_bound(const Kernel& kernel, double sigma_eps,
                                   const std::vector<std::vector<double>>& batches) {
  if (!(sigma_eps > 0.0)) throw ConfigError("noise sigma must be positive");
  VarianceBoundReport r;
  GPState gp(kernel, sigma_eps, 0.0);
  for (const auto& b : batches) {
    r.max_batch = std::max(r.max_batch, static_cast<int>(b.size()));
    if (b.empty()) continue;
    Prediction p = gp.predict(b);
    for (double v : p.variance) r.lhs += 0.5 * v;
    std::vector<double> zeros(b.size(), 0.0);
    gp.update(b, zeros);
  }
  r.information = information_gain(kernel, sigma_eps, batches).total;
  double c = 1.0 / (sigma_eps * sigma_eps);
  r.rhs = r.max_batch / std::log(c + 1.0) * r.information;
  r.slack = r.rhs - r.lhs;
  return r;
}

// 1/2 log det(2 pi e Sigma).
inline double gaussian_entropy(const Eigen::MatrixXd& sigma) {
  double n = static_cast<double>(sigma.rows());
  return 0.5 * (n * std::log(2.0 * kPi * std::exp(1.0)) + log_det_spd(sigma));
}

// Slack functions of the scalar inequalities used by the regret bound. Each
// returns rhs - lhs, which is nonnegative on admissible inputs.

// x <= c / log(c + 1) * log(x + 1) for x in [0, c].
inline double log_growth_slack(double x, double c) {
  detail::require(c >= 0.0 && x >= 0.0 && x <= c, "need 0 <= x <= c");
  double ratio = c > 0.0 ? c / std::log1p(c) : 1.0;
  return ratio * std::log1p(x) - x;
}

// (c + x^2)^-beta <= (1 + 1/c)^beta (1 + x)^(-2 beta) for x != -1.
inline double power_decay_slack(double x, double c, double beta) {
  detail::require(c > 0.0 && beta >= 0.0 && x != -1.0, "need c > 0, beta >= 0, x != -1");
  double lhs = std::pow(c + x * x, -beta);
  double rhs = std::pow(1.0 + 1.0 / c, beta) * std::pow((1.0 + x) * (1.0 + x), -beta);
  return rhs - lhs;
}

// (x + a)^2 <= c x^2 + c / (c - 1) a^2 for c > 1.
inline double shifted_square_slack(double x, double a, double c) {
  detail::require(c > 1.0, "need c > 1");
  return c * x * x + c / (c - 1.0) * a * a - (x + a) * (x + a);
}

// (sum x)^2 <= n sum x^2.
inline double sum_square_slack(std::span<const double> x) {
  double s = 0.0, q = 0.0;
  for (double v : x) {
    s += v;
    q += v * v;
  }
  return static_cast<double>(x.size()) * q - s * s;
}

struct CapacityCurve {
  std::vector<double> gamma;  // gamma[T-1] for T = 1..T_max
  std::vector<double> shape;  // c T^{1/(2nu+1)} log(T)^{2nu/(2nu+1)}, fitted at T_max
};

// Greedy lower bound on the information capacity over a uniform grid of
// candidate inputs.
inline CapacityCurve info_capacity_curve(const Kernel& kernel, int t_max,
                                         double sigma_eps, int candidates = 512) {
  detail::require(t_max >= 1, "T_max must be at least 1");
  detail::require(sigma_eps > 0.0, "noise sigma must be positive");
  std::vector<double> grid(candidates);
  for (int i = 0; i < candidates; ++i) grid[i] = kTwoPi * i / candidates;
  GPState gp(kernel, sigma_eps, 0.0);
  CapacityCurve c;
  double inv = 1.0 / (sigma_eps * sigma_eps);
  double total = 0.0;
  for (int t = 1; t <= t_max; ++t) {
    Prediction p = gp.predict(grid);
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (p.variance[i] > p.variance[best]) best = i;
    }
    total += 0.5 * std::log(1.0 + inv * p.variance[best]);
    c.gamma.push_back(total);
    double x = grid[best], y = 0.0;
    gp.update(std::span<const double>(&x, 1), std::span<const double>(&y, 1));
  }
  double nu = kernel.params().nu;
  auto shape = [&](int t) {
    return std::pow(t, 1.0 / (2.0 * nu + 1.0)) *
           std::pow(std::log(static_cast<double>(t)), 2.0 * nu / (2.0 * nu + 1.0));
  };
  double fit = t_max > 1 ? c.gamma.back() / shape(t_max) : 0.0;
  for (int t = 1; t <= t_max; ++t) c.shape.push_back(fit * shape(t));
  return c;
}

struct MetricRow {
  std::string planner;
  std::string object;
  std::string object_class;
  std::uint64_t seed = 0;
  double rec = 0.0;
  int T = 0;
  std::optional<int> T_ge95;
  double T_tilde = 0.0;
  std::optional<double> T_ge95_tilde;
  double r_ind_bar = 0.0;
  Termination termination = Termination::kRoundCap;
};

inline std::optional<int> rounds_to_fraction(const EpisodeRecord& e, double frac) {
  for (const auto& r : e.rounds) {
    if (r.cum_observed >= frac * e.surface_size) return r.t;
  }
  return std::nullopt;
}

inline MetricRow compute_metrics(const EpisodeRecord& e, const EpisodeRecord& oracle) {
  MetricRow m;
  m.planner = e.planner;
  m.seed = e.seed;
  m.termination = e.termination;
  m.T = static_cast<int>(e.rounds.size());
  int seen = e.rounds.empty() ? 0 : e.rounds.back().cum_observed;
  m.rec = e.surface_size > 0 ? static_cast<double>(seen) / e.surface_size : 1.0;
  m.T_ge95 = rounds_to_fraction(e, 0.95);
  int t_star = static_cast<int>(oracle.rounds.size());
  m.T_tilde = t_star > 0 ? static_cast<double>(m.T) / t_star : 0.0;
  auto o95 = rounds_to_fraction(oracle, 0.95);
  if (m.T_ge95 && o95 && *o95 > 0) {
    m.T_ge95_tilde = static_cast<double>(*m.T_ge95) / *o95;
  }
  long total = 0;
  for (const auto& r : e.rounds) total += r.r_ind;
  m.r_ind_bar = m.T > 0 ? static_cast<double>(total) / m.T : 0.0;
  return m;
}

enum class RankMode { kRec, kNbv };

namespace detail {

// Three-way comparison of optional values with missing values last.
template <class T>
int cmp_opt(const std::optional<T>& a, const std::optional<T>& b) {
  if (a && b) return *a < *b ? -1 : (*b < *a ? 1 : 0);
  if (a) return -1;
  if (b) return 1;
  return 0;
}

template <class T>
int cmp(T a, T b) {
  return a < b ? -1 : (b < a ? 1 : 0);
}

template <class Row>
int compare_rows(const Row& a, const Row& b, RankMode mode) {
  int c = 0;
  if (mode == RankMode::kNbv) {
    c = cmp(a.r_ind_bar, b.r_ind_bar);
    if (c != 0) return c;
  }
  c = cmp_opt(a.T_ge95, b.T_ge95);
  if (c != 0) return c;
  c = cmp(a.T, b.T);
  if (c != 0) return c;
  return cmp(b.rec, a.rec);  // higher reconstruction ranks first
}

}  // namespace detail

// Dense ranks (1 = best) in the order of the input rows. Row needs the
// fields rec, T, T_ge95 and r_ind_bar.
template <class Row>
std::vector<int> rank_algorithms(const std::vector<Row>& rows, RankMode mode) {
  std::vector<std::size_t> order(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return detail::compare_rows(rows[a], rows[b], mode) < 0;
  });
  std::vector<int> rank(rows.size(), 0);
  int r = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k == 0 || detail::compare_rows(rows[order[k - 1]], rows[order[k]], mode) != 0) ++r;
    rank[order[k]] = r;
  }
  return rank;
}

}  // namespace nbv

#endif  // NBV_EVALUATION_HPP_
