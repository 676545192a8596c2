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

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <set>
#include <tuple>

#include "nbv/evaluation.hpp"

namespace nbv {
namespace {

Kernel unit_kernel() { return Kernel::matern(2.5, 1.0, 0.5).closed_sum(); }

TEST(Coverage, UtilityAndMarginalTelescope) {
  std::vector<std::vector<int>> seen = {{0, 1, 2}, {2, 3}, {3, 4, 5}, {0, 5}, {}};
  std::vector<int> order = {1, 3, 0, 4, 2};
  int total = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    std::span<const int> hist(order.data(), k);
    total += marginal_utility(seen, order[k], hist, 6);
    std::set<int> u;
    for (std::size_t j = 0; j <= k; ++j) u.insert(seen[order[j]].begin(), seen[order[j]].end());
    EXPECT_EQ(utility(seen, std::span<const int>(order.data(), k + 1), 6),
              static_cast<int>(u.size()));
    EXPECT_EQ(total, static_cast<int>(u.size()));
  }
}

TEST(Coverage, CumulativeRegret) {
  EpisodeRecord e;
  for (int r : {2, 0, 3, 1}) {
    RoundRecord x;
    x.r_ind = r;
    e.rounds.push_back(x);
  }
  EXPECT_EQ(cumulative_regret(e), (std::vector<long>{2, 2, 5, 6}));
}

TEST(Information, LogDet) {
  Eigen::MatrixXd a(2, 2);
  a << 4.0, 1.0, 1.0, 3.0;
  EXPECT_NEAR(log_det_spd(a), std::log(11.0), 1e-14);
  a(1, 1) = -3.0;
  EXPECT_THROW(log_det_spd(a), NumericalError);
}

TEST(Information, SinglePoint) {
  Kernel k = unit_kernel();
  double s = 0.2;
  InformationGain g = information_gain(k, s, {{1.0}});
  EXPECT_NEAR(g.total, 0.5 * std::log(1.0 + 1.0 / (s * s)), 1e-12);
  EXPECT_THROW(information_gain(k, 0.0, {{1.0}}), ConfigError);
}

TEST(Information, ChainRuleMatchesJointDeterminant) {
  Kernel k = unit_kernel();
  double s = 0.3;
  std::vector<std::vector<double>> batches = {{0.1, 0.5, 2.0}, {}, {2.0, 3.0}, {4.4, 5.1, 0.3}};
  InformationGain g = information_gain(k, s, batches);
  std::vector<double> all;
  for (const auto& b : batches) all.insert(all.end(), b.begin(), b.end());
  int n = static_cast<int>(all.size());
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = k(all[i] - all[j]) / (s * s);
  }
  m.diagonal().array() += 1.0;
  EXPECT_NEAR(g.total, 0.5 * std::log(m.determinant()), 1e-9);
  ASSERT_EQ(g.per_round.size(), 4u);
  EXPECT_EQ(g.per_round[1], 0.0);
  double sum = 0.0;
  for (double v : g.per_round) sum += v;
  EXPECT_NEAR(sum, g.total, 1e-12);
}

TEST(Information, VarianceSumBoundedByInformation) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  std::uniform_int_distribution<int> size(1, 6);
  Kernel k = unit_kernel();
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<double>> batches(8);
    for (auto& b : batches) {
      int n = size(rng);
      for (int i = 0; i < n; ++i) b.push_back(u(rng));
    }
    VarianceBoundReport r = variance_information_bound(k, 1.0, batches);
    EXPECT_GE(r.slack, -1e-9);
    EXPECT_LE(r.max_batch, 6);
  }
  VarianceBoundReport one = variance_information_bound(k, 1.0, {{0.0, 2.0, 4.0}});
  EXPECT_NEAR(one.lhs, 1.5, 1e-12);
  EXPECT_EQ(one.max_batch, 3);
}

TEST(Information, GaussianEntropy) {
  Eigen::MatrixXd s(1, 1);
  s << 2.0;
  EXPECT_NEAR(gaussian_entropy(s), 0.5 * std::log(2.0 * kPi * std::exp(1.0) * 2.0), 1e-14);
  Eigen::MatrixXd d = Eigen::MatrixXd::Identity(3, 3) * 0.5;
  EXPECT_NEAR(gaussian_entropy(d), 3.0 * 0.5 * std::log(2.0 * kPi * std::exp(1.0) * 0.5), 1e-13);
}

TEST(Inequalities, EqualityCases) {
  EXPECT_NEAR(log_growth_slack(0.0, 3.0), 0.0, 1e-15);
  EXPECT_NEAR(log_growth_slack(3.0, 3.0), 0.0, 1e-14);
  EXPECT_NEAR(shifted_square_slack(0.5, 1.0, 3.0), 0.0, 1e-14);
  std::vector<double> same = {2.0, 2.0, 2.0};
  EXPECT_NEAR(sum_square_slack(same), 0.0, 1e-14);
  EXPECT_NEAR(power_decay_slack(1.0, 1.0, 1.0), 0.0, 1e-15);
}

TEST(Inequalities, NonNegativeOnRandomInputs) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    double c = 50.0 * u(rng);
    EXPECT_GE(log_growth_slack(c * u(rng), c), -1e-12);
    double x = 20.0 * u(rng) - 10.0;
    if (std::abs(x + 1.0) > 1e-6) {
      EXPECT_GE(power_decay_slack(x, 0.1 + 5.0 * u(rng), 3.0 * u(rng)), -1e-12);
    }
    EXPECT_GE(shifted_square_slack(x, 10.0 * u(rng) - 5.0, 1.0 + 4.0 * u(rng) + 1e-3), -1e-9);
    std::vector<double> v = {x, u(rng), -u(rng), 3.0 * u(rng)};
    EXPECT_GE(sum_square_slack(v), -1e-9);
  }
  EXPECT_THROW(log_growth_slack(4.0, 3.0), ConfigError);
  EXPECT_THROW(shifted_square_slack(1.0, 1.0, 1.0), ConfigError);
  EXPECT_THROW(power_decay_slack(-1.0, 1.0, 1.0), ConfigError);
}

TEST(Capacity, FirstStepAndShape) {
  Kernel k = unit_kernel();
  double s = 0.2;
  CapacityCurve c = info_capacity_curve(k, 30, s, 128);
  ASSERT_EQ(c.gamma.size(), 30u);
  EXPECT_NEAR(c.gamma[0], 0.5 * std::log(1.0 + 1.0 / (s * s)), 1e-9);
  for (std::size_t t = 1; t < c.gamma.size(); ++t) {
    double step = c.gamma[t] - c.gamma[t - 1];
    EXPECT_GT(step, 0.0);
    if (t >= 2) {
      EXPECT_LE(step, c.gamma[t - 1] - c.gamma[t - 2] + 1e-9);
    }
  }
  EXPECT_NEAR(c.shape.back(), c.gamma.back(), 1e-12);
  EXPECT_THROW(info_capacity_curve(k, 0, s), ConfigError);
}

EpisodeRecord episode(std::vector<int> cum, int n, std::vector<int> regret = {}) {
  EpisodeRecord e;
  e.surface_size = n;
  for (std::size_t i = 0; i < cum.size(); ++i) {
    RoundRecord r;
    r.t = static_cast<int>(i) + 1;
    r.cum_observed = cum[i];
    r.r_ind = regret.empty() ? 0 : regret[i];
    e.rounds.push_back(r);
  }
  return e;
}

TEST(Metrics, Example) {
  EpisodeRecord oracle = episode({50, 90, 100}, 100);
  EpisodeRecord e = episode({30, 60, 80, 96}, 100, {20, 10, 5, 1});
  e.termination = Termination::kEarly;
  MetricRow m = compute_metrics(e, oracle);
  EXPECT_DOUBLE_EQ(m.rec, 0.96);
  EXPECT_EQ(m.T, 4);
  ASSERT_TRUE(m.T_ge95.has_value());
  EXPECT_EQ(*m.T_ge95, 4);
  EXPECT_DOUBLE_EQ(m.T_tilde, 4.0 / 3.0);
  ASSERT_TRUE(m.T_ge95_tilde.has_value());
  EXPECT_DOUBLE_EQ(*m.T_ge95_tilde, 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(m.r_ind_bar, 9.0);
  EXPECT_EQ(m.termination, Termination::kEarly);
}

TEST(Metrics, NeverReachingThreshold) {
  EpisodeRecord oracle = episode({100}, 100);
  MetricRow m = compute_metrics(episode({40, 70}, 100), oracle);
  EXPECT_FALSE(m.T_ge95.has_value());
  EXPECT_FALSE(m.T_ge95_tilde.has_value());
  EXPECT_EQ(rounds_to_fraction(episode({94, 95}, 100), 0.95), 2);
}

struct R {
  double rec;
  int T;
  std::optional<int> T_ge95;
  double r_ind_bar;
};

TEST(Ranking, DenseRanksWithTies) {
  std::vector<R> rows = {{1.0, 10, 8, 0.0}, {1.0, 10, 8, 0.0}, {1.0, 12, 8, 0.0}};
  EXPECT_EQ(rank_algorithms(rows, RankMode::kRec), (std::vector<int>{1, 1, 2}));
  std::vector<R> na = {{0.9, 5, std::nullopt, 0.0}, {1.0, 20, 19, 0.0}};
  EXPECT_EQ(rank_algorithms(na, RankMode::kRec), (std::vector<int>{2, 1}));
  std::vector<R> nbv = {{1.0, 5, 4, 3.0}, {1.0, 20, 19, 1.0}};
  EXPECT_EQ(rank_algorithms(nbv, RankMode::kNbv), (std::vector<int>{2, 1}));
  EXPECT_EQ(rank_algorithms(nbv, RankMode::kRec), (std::vector<int>{1, 2}));
  std::vector<R> rec = {{0.8, 9, std::nullopt, 0.0}, {0.9, 9, std::nullopt, 0.0}};
  EXPECT_EQ(rank_algorithms(rec, RankMode::kRec), (std::vector<int>{2, 1}));
}

// Key whose lexicographic order is the ranking order; N/A maps past any T.
std::tuple<double, int, int, double> key(const R& r, RankMode m) {
  return {m == RankMode::kNbv ? r.r_ind_bar : 0.0, r.T_ge95 ? *r.T_ge95 : 1 << 30, r.T, -r.rec};
}

TEST(Ranking, MatchesCountOfDistinctBetterKeys) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> small(0, 3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<R> rows(7);
    for (auto& r : rows) {
      r.rec = 0.9 + 0.05 * small(rng);
      r.T = 5 + small(rng);
      r.T_ge95 = small(rng) == 0 ? std::nullopt : std::optional<int>(3 + small(rng));
      r.r_ind_bar = 0.5 * small(rng);
    }
    for (RankMode m : {RankMode::kRec, RankMode::kNbv}) {
      std::vector<int> got = rank_algorithms(rows, m);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        std::set<std::tuple<double, int, int, double>> better;
        for (const auto& o : rows) {
          if (key(o, m) < key(rows[i], m)) better.insert(key(o, m));
        }
        EXPECT_EQ(got[i], 1 + static_cast<int>(better.size()));
      }
    }
  }
}

}  // namespace
}  // namespace nbv
