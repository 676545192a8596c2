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

// End-to-end acceptance checks. Each returns a verdict and a short detail line.

#ifndef NBV_ACCEPTANCE_HPP_
#define NBV_ACCEPTANCE_HPP_

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nbv/evaluation.hpp"
#include "nbv/harness.hpp"

namespace nbv {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace detail {

inline std::string printf_string(const char* f, double a, double b = 0.0,
                                 double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

inline const Cell* find_cell(const ResultSet& r, const std::string& object,
                             const std::string& planner) {
  for (const auto& c : r.cells) {
    if (c.object == object && c.planner == planner) return &c;
  }
  return nullptr;
}

}  // namespace detail

// Oracle planner rows have zero mean regret and a round ratio of one.
inline CheckResult check_oracle_identity(const ExperimentConfig& base) {
  CheckResult r{1, "oracle identity", false, ""};
  ExperimentConfig c = base;
  c.planners = {"oracle"};
  auto t0 = std::chrono::steady_clock::now();
  ResultSet res = run_experiments(c);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  int bad = 0;
  for (const auto& cell : res.cells) {
    if (!cell.metrics || cell.metrics->r_ind_bar != 0.0 || cell.metrics->T_tilde != 1.0) {
      ++bad;
    }
  }
  double per_object = secs / std::max<std::size_t>(res.objects.size(), 1);
  r.passed = bad == 0 && per_object < 60.0;
  r.detail = std::to_string(res.cells.size() - bad) + "/" +
             std::to_string(res.cells.size()) + " objects exact, " +
             detail::printf_string("%.2f s per object", per_object);
  return r;
}

// Shared planner runs for the coverage checks.
inline ResultSet coverage_runs(const ExperimentConfig& base) {
  ExperimentConfig c = base;
  c.planners = {"oracle", "C", "CS", "CSP", "U", "UP", "CS-U"};
  return run_experiments(c);
}

inline CheckResult check_confidence_deficiency(const ResultSet& res) {
  CheckResult r{2, "confidence-family deficiency", false, ""};
  std::ostringstream d;
  bool ok = true;
  for (const char* p : {"C", "CS", "CSP"}) {
    int hit = 0, in_range = 0, early = 0;
    for (const auto& obj : res.objects) {
      const Cell* c = detail::find_cell(res, obj, p);
      if (!c || !c->metrics) continue;
      const MetricRow& m = *c->metrics;
      if (m.termination == Termination::kEarly) {
        ++early;
        if (m.rec < 0.95) ++hit;
        if (m.rec > 0.10 && m.rec < 0.95) ++in_range;
      }
    }
    int n = static_cast<int>(res.objects.size());
    bool pass = 4 * hit >= 3 * n && in_range == early;
    ok = ok && pass;
    d << p << ": " << hit << "/" << n << " early with rec<0.95";
    if (in_range != early) d << " (" << early - in_range << " outside (0.10,0.95))";
    d << "; ";
  }
  r.passed = ok;
  r.detail = d.str();
  return r;
}

inline CheckResult check_uncertainty_completeness(const ResultSet& res) {
  CheckResult r{3, "uncertainty-family completeness", false, ""};
  std::ostringstream d;
  bool ok = true;
  for (const char* p : {"U", "UP", "CS-U"}) {
    int full = 0;
    std::string missing;
    for (const auto& obj : res.objects) {
      const Cell* c = detail::find_cell(res, obj, p);
      if (c && c->metrics && c->metrics->rec == 1.0) {
        ++full;
      } else {
        char buf[64];
        std::snprintf(buf, sizeof buf, " %s(%.3f)", obj.c_str(),
                      c && c->metrics ? c->metrics->rec : 0.0);
        missing += buf;
      }
    }
    ok = ok && full == static_cast<int>(res.objects.size());
    d << p << ": " << full << "/" << res.objects.size() << " full";
    if (!missing.empty()) d << " [short:" << missing << "]";
    d << "; ";
  }
  r.passed = ok;
  r.detail = d.str();
  return r;
}

inline CheckResult check_kernel_worked_example() {
  CheckResult r{4, "kernel worked example", false, ""};
  Kernel k = Kernel::matern(1.5, 1.0, 1.0);
  double a = k.base_unit(kTwoPi), b = k.base_unit(2.0 * kTwoPi);
  auto two_sig = [](double v, double target) {
    double e = std::floor(std::log10(std::abs(target)));
    double s = std::pow(10.0, e - 1.0);
    return std::round(v / s) == std::round(target / s);
  };
  r.passed = two_sig(a, 2.2e-4) && two_sig(b, 8.0e-9);
  r.detail = detail::printf_string("k(2pi)=%.3e k(4pi)=%.3e", a, b);
  return r;
}

inline CheckResult check_periodization() {
  CheckResult r{5, "periodization cross-validation", false, ""};
  const double sigma = 1.5, length = 0.2;
  double worst_closed = 0.0, worst_trunc = 0.0;
  for (double nu : {0.5, 1.5, 2.5}) {
    Kernel base = Kernel::matern(nu, sigma, length);
    Kernel closed = base.closed_sum(), sum50 = base.summed(50);
    for (int i = 0; i < 720; ++i) {
      double x = kTwoPi * i / 720.0;
      worst_closed = std::max(worst_closed, std::abs(closed(x) - sum50(x)));
    }
  }
  std::vector<Kernel> bases = {Kernel::rbf(sigma, length), Kernel::matern(0.5, sigma, length),
                               Kernel::matern(1.5, sigma, length),
                               Kernel::matern(2.5, sigma, length)};
  for (const Kernel& base : bases) {
    Kernel tr = base.truncated(kPi, kTwoPi), sum1 = base.summed(1);
    for (int i = 0; i < 720; ++i) {
      double x = kTwoPi * i / 720.0;
      worst_trunc = std::max(worst_trunc, std::abs(tr(x) - sum1(x)));
    }
  }
  double v = sigma * sigma;
  r.passed = worst_closed <= 1e-6 * v && worst_trunc <= 1e-3 * v;
  r.detail = detail::printf_string("closed vs 50-term sum %.2e, truncated vs 1-term %.2e (x sigma_f^2)",
                                   worst_closed / v, worst_trunc / v);
  return r;
}

inline CheckResult check_gp_correctness(std::uint64_t seed = 7) {
  CheckResult r{6, "GP correctness", false, ""};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi), val(2.0, 8.0);
  Kernel k = Kernel::matern(1.5, 1.5, 0.2).closed_sum();
  double interp = 0.0, var_excess = -1e300, split = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    int n = 3 + trial % 10;
    std::vector<double> xs(n), ys(n);
    for (int i = 0; i < n; ++i) {
      xs[i] = kTwoPi * (i + 0.5 * std::uniform_real_distribution<double>(0, 1)(rng)) / n;
      ys[i] = val(rng);
    }
    GPState exact(k, 0.0, 5.0);
    exact.update(xs, ys);
    Prediction p = exact.predict(xs);
    for (int i = 0; i < n; ++i) interp = std::max(interp, std::abs(p.mean[i] - ys[i]));

    std::vector<double> q(64);
    for (auto& v : q) v = ang(rng);
    GPState batch(k, 0.2, 5.0), inc(k, 0.2, 5.0);
    batch.update(xs, ys);
    int half = n / 2;
    for (int part = 0; part < 2; ++part) {
      std::span<const double> sx(xs.data() + (part ? half : 0), part ? n - half : half);
      std::span<const double> sy(ys.data() + (part ? half : 0), part ? n - half : half);
      Prediction before = inc.predict(q);
      inc.update(sx, sy);
      Prediction after = inc.predict(q);
      for (std::size_t j = 0; j < q.size(); ++j) {
        var_excess = std::max(var_excess, after.variance[j] - before.variance[j]);
        var_excess = std::max(var_excess, after.variance[j] - k.variance());
      }
    }
    Prediction a = batch.predict(q), b = inc.predict(q);
    for (std::size_t j = 0; j < q.size(); ++j) {
      split = std::max({split, std::abs(a.mean[j] - b.mean[j]),
                        std::abs(a.variance[j] - b.variance[j])});
    }
  }
  r.passed = interp <= 1e-6 && var_excess <= 1e-8 && split <= 1e-8;
  r.detail = detail::printf_string("interp err %.1e, max variance increase %.1e, split-batch diff %.1e",
                                   interp, var_excess, split);
  return r;
}

inline CheckResult check_information_theory(std::uint64_t seed = 11) {
  CheckResult r{7, "information-theory suite", false, ""};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  Kernel k1 = Kernel::matern(1.5, 1.0, 0.2).closed_sum();
  const double se = 0.2;

  // log det against eigenvalues for random batches
  double eig_err = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<double>> batches(3);
    for (auto& b : batches) {
      b.resize(1 + trial % 5);
      for (auto& x : b) x = ang(rng);
    }
    double logdet = information_gain(k1, se, batches).total;
    GPState gp(k1, se, 0.0);
    double eig = 0.0;
    for (const auto& b : batches) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gp.covariance(b));
      for (int i = 0; i < es.eigenvalues().size(); ++i) {
        eig += 0.5 * std::log1p(std::max(es.eigenvalues()(i), 0.0) / (se * se));
      }
      std::vector<double> z(b.size(), 0.0);
      gp.update(b, z);
    }
    eig_err = std::max(eig_err, std::abs(logdet - eig));
  }

  // sum of variances against the information gain on random episodes
  double min_slack = 1e300;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::vector<double>> batches(20);
    for (auto& b : batches) {
      b.resize(1 + rng() % 8);
      for (auto& x : b) x = ang(rng);
    }
    min_slack = std::min(min_slack, variance_information_bound(k1, se, batches).slack);
  }

  // greedy capacity against its growth shape
  Kernel k5 = Kernel::matern(2.5, 1.0, 0.2).closed_sum();
  CapacityCurve cc = info_capacity_curve(k5, 256, se);
  double lo = 1e300, hi = 0.0;
  for (int t = 8; t <= 256; ++t) {
    double s = std::pow(t, 1.0 / 6.0) * std::pow(std::log(static_cast<double>(t)), 5.0 / 6.0);
    double q = cc.gamma[t - 1] / s;
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  r.passed = eig_err <= 1e-9 && min_slack >= 0.0 && hi / lo < 3.0;
  r.detail = detail::printf_string("eigen-route err %.1e, min slack %.3f, capacity ratio max/min %.3f",
                                   eig_err, min_slack, hi / lo);
  return r;
}

// Greedy against exhaustive search on an 8-pose grid, plus exhaustive
// monotonicity and diminishing returns of the coverage utility.
inline CheckResult check_submodular(const ExperimentConfig& base) {
  CheckResult r{8, "submodular framework", false, ""};
  EpisodeSettings s = base.settings();
  s.h = 1.0;
  std::ostringstream d;
  bool ok = true;
  std::vector<std::pair<std::string, SurfaceObject>> objects = {
      {"circle", SurfaceObject::circle(5.0)},
      {"flower", SurfaceObject::flower(s.d_min, s.d_max, 2.0, 3, 0.1)}};
  for (const auto& [name, obj] : objects) {
    PreparedObject p = prepare_object(obj, s, 8);
    const auto& seen = p.table.seen;
    std::size_t n = p.surface.size();
    auto members = [](int mask) {
      std::vector<int> v;
      for (int i = 0; i < 8; ++i) {
        if (mask >> i & 1) v.push_back(i);
      }
      return v;
    };
    std::vector<int> f(256);
    for (int m = 0; m < 256; ++m) f[m] = utility(seen, members(m), n);
    int opt = 0;
    for (int m = 0; m < 256; ++m) {
      if (__builtin_popcount(m) <= 3) opt = std::max(opt, f[m]);
    }
    std::vector<int> greedy;
    for (int t = 0; t < 3; ++t) {
      int best = 0, gain = -1;
      for (int q = 0; q < 8; ++q) {
        int g = marginal_utility(seen, q, greedy, n);
        if (g > gain) {
          gain = g;
          best = q;
        }
      }
      greedy.push_back(best);
    }
    int g = utility(seen, greedy, n);
    long violations = 0;
    for (int b = 0; b < 256; ++b) {
      for (int a = b;; a = (a - 1) & b) {
        if (f[a] > f[b]) ++violations;
        for (int x = 0; x < 8; ++x) {
          int ga = f[a | 1 << x] - f[a], gb = f[b | 1 << x] - f[b];
          if (ga < gb) ++violations;
        }
        if (a == 0) break;
      }
    }
    bool pass = g >= (1.0 - std::exp(-1.0)) * opt && violations == 0;
    ok = ok && pass;
    d << name << ": greedy " << g << " vs OPT " << opt << ", " << violations
      << " violations; ";
  }
  r.passed = ok;
  r.detail = d.str();
  return r;
}

inline CheckResult check_scalar_inequalities(std::uint64_t seed = 3) {
  CheckResult r{9, "scalar inequality property tests", false, ""};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = 10000;
  int bad[4] = {0, 0, 0, 0};
  for (int i = 0; i < n; ++i) {
    double c = 100.0 * u(rng) * u(rng);
    double x = c * u(rng);
    if (log_growth_slack(x, c) < -1e-12 * std::max(1.0, c)) ++bad[0];

    double c4 = 1e-3 + 50.0 * u(rng), beta = 5.0 * u(rng), x4 = 40.0 * u(rng) - 20.0;
    if (x4 == -1.0) x4 = 0.0;
    double lhs4 = std::pow(c4 + x4 * x4, -beta);
    if (power_decay_slack(x4, c4, beta) < -1e-12 * std::max(1.0, lhs4)) ++bad[1];

    double c5 = 1.0 + 1e-3 + 10.0 * u(rng), x5 = 20.0 * u(rng) - 10.0, a5 = 20.0 * u(rng) - 10.0;
    if (shifted_square_slack(x5, a5, c5) < -1e-9 * (1.0 + (x5 + a5) * (x5 + a5))) ++bad[2];

    std::vector<double> v(1 + rng() % 32);
    double scale = 0.0;
    for (auto& e : v) {
      e = 20.0 * u(rng) - 10.0;
      scale += e * e;
    }
    if (sum_square_slack(v) < -1e-9 * (1.0 + scale * v.size())) ++bad[3];
  }
  r.passed = bad[0] + bad[1] + bad[2] + bad[3] == 0;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "violations over %d draws each: log-growth %d, power-decay %d, "
                "shifted-square %d, sum-square %d",
                n, bad[0], bad[1], bad[2], bad[3]);
  r.detail = buf;
  return r;
}

// Mean regret over the whole episode is below the mean over its first half.
inline CheckResult check_no_regret_trend(const ExperimentConfig& base) {
  CheckResult r{10, "empirical no-regret trend", false, ""};
  ExperimentConfig c = base;
  c.planners = {"U"};
  c.kernel.sigma_f = 1.0;
  c.confidence.mode = BetaMode::kUnionBound;
  ResultSet res = run_experiments(c);
  int ok = 0;
  std::string bad;
  for (const auto& cell : res.cells) {
    if (!cell.episode || cell.episode->rounds.size() < 2) {
      bad += " " + cell.object + "(short)";
      continue;
    }
    auto reg = cumulative_regret(*cell.episode);
    std::size_t t = reg.size(), h = t / 2;
    double full = static_cast<double>(reg[t - 1]) / t;
    double first = static_cast<double>(reg[h - 1]) / h;
    if (full < first) {
      ++ok;
    } else {
      char buf[96];
      std::snprintf(buf, sizeof buf, " %s(%.2f vs %.2f)", cell.object.c_str(), full, first);
      bad += buf;
    }
  }
  r.passed = ok == static_cast<int>(res.cells.size());
  r.detail = std::to_string(ok) + "/" + std::to_string(res.cells.size()) + " objects";
  if (!bad.empty()) r.detail += " [fail:" + bad + "]";
  return r;
}

inline CheckResult check_determinism(const ExperimentConfig& base,
                                     const std::string& scratch_dir) {
  CheckResult r{11, "determinism and formats", false, ""};
  namespace fs = std::filesystem;
  ExperimentConfig c = base;
  c.planners = {"oracle", "CS", "U", "CS-U"};
  c.objects = {"circle", "flower-3"};
  c.seeds = {1, 2};
  fs::path a = fs::path(scratch_dir) / "run_a", b = fs::path(scratch_dir) / "run_b";
  emit_outputs(run_experiments(c), a.string());
  emit_outputs(run_experiments(c), b.string());
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  bool same = true;
  for (const char* f : {"episodes.csv", "summary.csv", "curves.csv", "config.snapshot"}) {
    same = same && slurp(a / f) == slurp(b / f) && !slurp(a / f).empty();
  }
  auto first_line = [&](const char* f) {
    std::string s = slurp(a / f);
    return s.substr(0, s.find("\r\n"));
  };
  bool headers =
      first_line("episodes.csv") ==
          "planner,object,seed,t,pose,theta,new_points,marginal,oracle_marginal,r_ind,"
          "cum_observed" &&
      first_line("summary.csv") ==
          "scope,planner,object,object_class,seed,count,rec,T,T_ge95,T_tilde,"
          "T_ge95_tilde,r_ind_bar,termination,rank_rec,rank_nbv,error" &&
      first_line("curves.csv") == "planner,object,seed,t,rec,R_ind";
  r.passed = same && headers;
  r.detail = std::string(same ? "outputs byte-identical" : "outputs differ") +
             (headers ? ", headers match" : ", header mismatch");
  return r;
}

// Runs all checks in order, reporting each as it finishes.
inline std::vector<CheckResult> run_acceptance(
    const ExperimentConfig& base, const std::string& scratch_dir,
    const std::function<void(const CheckResult&)>& report = {}) {
  std::vector<CheckResult> out;
  auto add = [&](CheckResult r) {
    if (report) report(r);
    out.push_back(std::move(r));
  };
  auto guarded = [&](int id, const char* name, auto&& fn) {
    try {
      add(fn());
    } catch (const std::exception& e) {
      add({id, name, false, std::string("error: ") + e.what()});
    }
  };
  guarded(1, "oracle identity", [&] { return check_oracle_identity(base); });
  std::optional<ResultSet> cov;
  std::string cov_error;
  try {
    cov = coverage_runs(base);
  } catch (const std::exception& e) {
    cov_error = e.what();
  }
  guarded(2, "confidence-family deficiency", [&] {
    if (!cov) throw Error(cov_error);
    return check_confidence_deficiency(*cov);
  });
  guarded(3, "uncertainty-family completeness", [&] {
    if (!cov) throw Error(cov_error);
    return check_uncertainty_completeness(*cov);
  });
  guarded(4, "kernel worked example", [] { return check_kernel_worked_example(); });
  guarded(5, "periodization cross-validation", [] { return check_periodization(); });
  guarded(6, "GP correctness", [] { return check_gp_correctness(); });
  guarded(7, "information-theory suite", [] { return check_information_theory(); });
  guarded(8, "submodular framework", [&] { return check_submodular(base); });
  guarded(9, "scalar inequality property tests", [] { return check_scalar_inequalities(); });
  guarded(10, "empirical no-regret trend", [&] { return check_no_regret_trend(base); });
  guarded(11, "determinism and formats",
          [&] { return check_determinism(base, scratch_dir); });
  return out;
}

}  // namespace nbv

#endif  // NBV_ACCEPTANCE_HPP_
