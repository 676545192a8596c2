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

// Pose selection rules and the reconstruction episode loop.

#ifndef NBV_PLANNER_HPP_
#define NBV_PLANNER_HPP_

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nbv/camera.hpp"
#include "nbv/errors.hpp"
#include "nbv/gp.hpp"
#include "nbv/objectives.hpp"
#include "nbv/world.hpp"

namespace nbv {

enum class PlannerKind { kGreedy, kTwoPhase, kOracle };

struct PlannerSpec {
  PlannerKind kind = PlannerKind::kGreedy;
  ObjectiveKind first = ObjectiveKind::kCS;
  ObjectiveKind second = ObjectiveKind::kU;

  static PlannerSpec oracle() { return {PlannerKind::kOracle}; }
  static PlannerSpec greedy(ObjectiveKind k) { return {PlannerKind::kGreedy, k}; }
  static PlannerSpec two_phase(ObjectiveKind a, ObjectiveKind b) {
    if (!has_interval(a)) {
      throw ConfigError("first phase objective " + to_string(a) +
                        " has no summation interval");
    }
    return {PlannerKind::kTwoPhase, a, b};
  }

  // "oracle", "CS", or "CS-U" for a two-phase planner.
  std::string label() const {
    switch (kind) {
      case PlannerKind::kOracle:
        return "oracle";
      case PlannerKind::kGreedy:
        return to_string(first);
      case PlannerKind::kTwoPhase:
        return to_string(first) + "-" + to_string(second);
    }
    return "";
  }

  static PlannerSpec parse(const std::string& s) {
    if (s == "oracle") return oracle();
    if (auto k = try_objective_from_string(s)) return greedy(*k);
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] != '-') continue;
      auto a = try_objective_from_string(s.substr(0, i));
      auto b = try_objective_from_string(s.substr(i + 1));
      if (a && b) return two_phase(*a, *b);
    }
    throw ConfigError("unknown planner '" + s + "'");
  }

  bool operator==(const PlannerSpec&) const = default;
};

// Index of the largest score; ties go to the smallest index.
inline int argmax_first(const std::vector<double>& scores) {
  int best = -1;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (std::isnan(scores[i])) continue;
    if (best < 0 || scores[i] > scores[best]) best = static_cast<int>(i);
  }
  if (best < 0) throw NumericalError("all candidate scores are NaN");
  return best;
}

// Candidate indices of a pose grid that fall inside an interval.
inline std::vector<int> poses_in(const AngleInterval& iv,
                                 const std::vector<double>& poses) {
  std::vector<int> out;
  for (std::size_t i = 0; i < poses.size(); ++i) {
    if (iv.contains(poses[i], 1e-12)) out.push_back(static_cast<int>(i));
  }
  return out;
}

template <BoundsField F>
int greedy_decide(ObjectiveKind k, const std::vector<double>& poses,
                  const F& field, const ObjectiveContext& ctx) {
  std::vector<double> scores(poses.size());
  for (std::size_t i = 0; i < poses.size(); ++i) {
    scores[i] = eval_objective(k, poses[i], field, ctx);
  }
  return argmax_first(scores);
}

template <BoundsField F>
int two_phase_decide(ObjectiveKind k1, ObjectiveKind k2,
                     const std::vector<double>& poses, const F& field,
                     const ObjectiveContext& ctx, bool* fell_back = nullptr) {
  int first = greedy_decide(k1, poses, field, ctx);
  AngleInterval iv = objective_interval(k1, poses[first], field, ctx);
  std::vector<int> cand = poses_in(iv, poses);
  if (fell_back != nullptr) *fell_back = cand.empty();
  if (cand.empty()) return first;
  std::vector<double> scores(cand.size());
  for (std::size_t j = 0; j < cand.size(); ++j) {
    scores[j] = eval_objective(k2, poses[cand[j]], field, ctx);
  }
  // Candidates are in grid order, so ties still go to the smallest angle.
  return cand[argmax_first(scores)];
}

// Number of points of a set not yet marked as observed.
inline int count_new(const std::vector<int>& seen, const std::vector<char>& observed) {
  int n = 0;
  for (int i : seen) n += observed[static_cast<std::size_t>(i)] ? 0 : 1;
  return n;
}

inline int oracle_decide(const VisibilityTable& table,
                         const std::vector<char>& observed) {
  std::vector<double> scores(table.seen.size());
  for (std::size_t i = 0; i < table.seen.size(); ++i) {
    scores[i] = count_new(table.seen[i], observed);
  }
  return argmax_first(scores);
}

struct EpisodeSettings {
  FovShape shape;
  double h = 0.1;
  double d_min = 2.0;
  double d_max = 8.0;
  Kernel kernel;
  double sigma_eps = 0.2;
  ConfidenceSchedule schedule;
  int belief_resolution = 512;
  double sum_step = 0.0;  // zero means h / d_max
  VisibilityOptions visibility;

  double effective_sum_step() const { return sum_step > 0.0 ? sum_step : h / d_max; }
  double prior_mean() const { return 0.5 * (d_min + d_max); }
};

// Everything about an object that does not depend on the planner.
struct PreparedObject {
  SurfacePointSet surface;
  PixelGrid grid;
  VisibilityTable table;
};

inline PreparedObject prepare_object(const SurfaceObject& obj,
                                     const EpisodeSettings& s, int pose_count) {
  detail::require(pose_count >= 8, "pose grid needs at least 8 poses");
  PreparedObject p;
  p.surface = discretize(obj, s.h);
  p.grid = PixelGrid(p.surface);
  p.table = build_visibility(p.surface, s.shape, pose_grid(pose_count), s.visibility);
  return p;
}

enum class Termination { kFull, kEarly, kRoundCap };

inline std::string to_string(Termination t) {
  switch (t) {
    case Termination::kFull:
      return "full";
    case Termination::kEarly:
      return "early";
    case Termination::kRoundCap:
      return "round_cap";
  }
  return "";
}

struct RoundRecord {
  int t = 0;
  int pose = 0;
  double theta = 0.0;
  int seen = 0;      // |o(theta_t)|
  int marginal = 0;  // newly observed points
  int oracle_pose = 0;
  double oracle_theta = 0.0;
  int oracle_marginal = 0;
  int r_ind = 0;
  int cum_observed = 0;
};

struct EpisodeRecord {
  std::string planner;
  std::uint64_t seed = 0;
  int surface_size = 0;
  Termination termination = Termination::kRoundCap;
  std::vector<RoundRecord> rounds;
  // Surface point indices measured in each round.
  std::vector<std::vector<int>> batches;
  int fallbacks = 0;  // two-phase rounds with an empty restricted set
};

// Rounds the oracle needs for full reconstruction (or until it stalls).
inline int oracle_rounds(const PreparedObject& obj) {
  std::vector<char> observed(obj.surface.size(), 0);
  int count = 0, rounds = 0;
  int n = static_cast<int>(obj.surface.size());
  while (count < n) {
    int pose = oracle_decide(obj.table, observed);
    int gain = count_new(obj.table.seen[pose], observed);
    if (gain == 0) break;
    for (int i : obj.table.seen[pose]) {
      if (!observed[i]) {
        observed[i] = 1;
        ++count;
      }
    }
    ++rounds;
  }
  return rounds;
}

namespace detail {

inline SurfacePointSet subset(const SurfacePointSet& s, const std::vector<char>& mask) {
  SurfacePointSet out;
  out.h = s.h;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (mask[i]) out.points.push_back(s.points[i]);
  }
  return out;
}

}  // namespace detail

// Pose chosen by a planner at round t given the measured history.
inline int plan_round(const PlannerSpec& spec, const PreparedObject& obj,
                      const EpisodeSettings& s, const GPState& gp,
                      const std::vector<char>& observed, int t,
                      bool* fell_back = nullptr) {
  if (fell_back != nullptr) *fell_back = false;
  if (spec.kind == PlannerKind::kOracle) return oracle_decide(obj.table, observed);

  GriddedBounds field(gp, s.schedule, t, s.belief_resolution);
  ObjectiveContext ctx;
  ctx.shape = s.shape;
  ctx.h = s.h;
  ctx.sum_step = s.effective_sum_step();
  ctx.t = t;
  ctx.schedule = s.schedule;
  ctx.visibility = s.visibility;
  ctx.truth = &obj.surface;
  ctx.truth_grid = &obj.grid;

  auto uses = [&](ObjectiveKind k) {
    return spec.first == k || (spec.kind == PlannerKind::kTwoPhase && spec.second == k);
  };
  std::optional<SurfacePointSet> upper, lower;
  if (uses(ObjectiveKind::kOCU)) {
    upper = bound_curve(field, true, s.shape.d_cam(), s.h);
    ctx.upper_curve = &*upper;
  }
  if (uses(ObjectiveKind::kOCL)) {
    lower = bound_curve(field, false, s.shape.d_cam(), s.h);
    ctx.lower_curve = &*lower;
  }
  std::optional<PixelGrid> measured;
  if (uses(ObjectiveKind::kIOA)) {
    measured.emplace(detail::subset(obj.surface, observed));
    ctx.measured_grid = &*measured;
  }
  if (spec.kind == PlannerKind::kGreedy) {
    return greedy_decide(spec.first, obj.table.poses, field, ctx);
  }
  return two_phase_decide(spec.first, spec.second, obj.table.poses, field, ctx,
                          fell_back);
}

// Runs a reconstruction episode. A negative round_cap means ten times the
// oracle's round count on this object.
inline EpisodeRecord run_episode(const PlannerSpec& spec, const PreparedObject& obj,
                                 const EpisodeSettings& s, std::uint64_t seed,
                                 int round_cap = -1) {
  if (round_cap < 0) round_cap = 10 * std::max(oracle_rounds(obj), 1);
  EpisodeRecord rec;
  rec.planner = spec.label();
  rec.seed = seed;
  int n = static_cast<int>(obj.surface.size());
  rec.surface_size = n;
  std::vector<char> observed(obj.surface.size(), 0);
  int count = 0;
  GPState gp(s.kernel, s.sigma_eps, s.prior_mean());
  NoiseModel noise(s.sigma_eps, seed);

  if (n == 0) {
    rec.termination = Termination::kFull;
    return rec;
  }
  for (int t = 1;; ++t) {
    if (static_cast<int>(rec.rounds.size()) >= round_cap) {
      rec.termination = Termination::kRoundCap;
      break;
    }
    bool fell_back = false;
    int pose = plan_round(spec, obj, s, gp, observed, t, &fell_back);
    const std::vector<int>& seen = obj.table.seen[pose];
    int gain = count_new(seen, observed);
    if (gain == 0) {
      rec.termination = Termination::kEarly;
      break;
    }
    if (fell_back) ++rec.fallbacks;
    int opose = oracle_decide(obj.table, observed);
    int ogain = count_new(obj.table.seen[opose], observed);

    std::vector<double> xs;
    xs.reserve(seen.size());
    for (int i : seen) xs.push_back(obj.surface.points[i].angle);
    std::vector<double> ys = measure(seen, obj.surface, noise);
    gp.update(xs, ys);
    for (int i : seen) {
      if (!observed[i]) {
        observed[i] = 1;
        ++count;
      }
    }
    RoundRecord r;
    r.t = t;
    r.pose = pose;
    r.theta = obj.table.poses[pose];
    r.seen = static_cast<int>(seen.size());
    r.marginal = gain;
    r.oracle_pose = opose;
    r.oracle_theta = obj.table.poses[opose];
    r.oracle_marginal = ogain;
    r.r_ind = ogain - gain;
    r.cum_observed = count;
    rec.rounds.push_back(r);
    rec.batches.push_back(seen);
    if (count == n) {
      rec.termination = Termination::kFull;
      break;
    }
  }
  return rec;
}

}  // namespace nbv

#endif  // NBV_PLANNER_HPP_
