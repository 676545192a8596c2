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

// Experiment configuration, the object x planner x seed grid, and CSV output.

#ifndef NBV_HARNESS_HPP_
#define NBV_HARNESS_HPP_

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "nbv/evaluation.hpp"
#include "nbv/planner.hpp"
#include "nbv/world.hpp"

namespace nbv {

struct ExperimentConfig {
  // world
  double h = 0.1;
  double d_min = 2.0;
  double d_max = 8.0;
  // camera
  double d_cam = 10.0;
  double d_dof = 10.0;
  double alpha_fov_deg = 35.0;
  double sigma_eps = 0.2;
  // gp
  KernelParams kernel;
  // confidence
  ConfidenceSchedule confidence;
  // experiment grid
  std::vector<std::string> planners = {"oracle", "OS",  "OCU", "OCL", "IOA",
                                       "I",      "C",   "CS",  "CSP", "CSW",
                                       "U",      "UP",  "CS-refined", "CS-U"};
  std::string zoo;                   // path; empty selects the built-in zoo
  std::vector<std::string> objects;  // empty selects every zoo object
  std::vector<std::uint64_t> seeds = {1};
  int pose_grid = 360;
  int round_cap_factor = 10;
  int belief_resolution = 512;
  int occlusion_neighborhood = 1;
  int workers = 0;  // zero uses the hardware concurrency

  FovShape shape() const {
    return FovShape(d_cam, d_dof, alpha_fov_deg * kPi / 180.0);
  }

  EpisodeSettings settings() const {
    EpisodeSettings s;
    s.shape = shape();
    s.h = h;
    s.d_min = d_min;
    s.d_max = d_max;
    s.kernel = Kernel(kernel);
    s.sigma_eps = sigma_eps;
    s.schedule = confidence;
    s.belief_resolution = belief_resolution;
    s.visibility.neighborhood = occlusion_neighborhood;
    return s;
  }

  std::vector<PlannerSpec> planner_specs() const {
    std::vector<PlannerSpec> out;
    for (const auto& p : planners) out.push_back(PlannerSpec::parse(p));
    return out;
  }
};

namespace detail {

using nlohmann::json;

inline std::string kernel_base_name(KernelBase b) {
  return b == KernelBase::kRbf ? "rbf" : "matern";
}

inline json config_to_json(const ExperimentConfig& c) {
  json j;
  j["world"] = {{"h", c.h}, {"d_min", c.d_min}, {"d_max", c.d_max}};
  j["camera"] = {{"d_cam", c.d_cam},
                 {"d_dof", c.d_dof},
                 {"alpha_fov_deg", c.alpha_fov_deg},
                 {"sigma_eps", c.sigma_eps}};
  j["gp"] = {{"kernel", kernel_base_name(c.kernel.base)},
             {"sigma_f", c.kernel.sigma_f},
             {"length", c.kernel.length},
             {"nu", c.kernel.nu},
             {"periodization", to_string(c.kernel.periodization)},
             {"kappa", c.kernel.kappa},
             {"c1", c.kernel.c1},
             {"c2", c.kernel.c2}};
  j["confidence"] = {{"mode", to_string(c.confidence.mode)},
                     {"sqrt_beta", c.confidence.sqrt_beta},
                     {"a", c.confidence.a},
                     {"b", c.confidence.b},
                     {"delta", c.confidence.delta}};
  j["planners"] = c.planners;
  j["zoo"] = c.zoo;
  j["objects"] = c.objects;
  j["seeds"] = c.seeds;
  j["pose_grid"] = c.pose_grid;
  j["round_cap_factor"] = c.round_cap_factor;
  j["belief_resolution"] = c.belief_resolution;
  j["occlusion_neighborhood"] = c.occlusion_neighborhood;
  j["workers"] = c.workers;
  return j;
}

inline void reject_unknown(const json& j, const std::string& where,
                           std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError("'" + where + "' must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : keys) ok = ok || it.key() == k;
    if (!ok) {
      std::string name = where.empty() ? it.key() : where + "." + it.key();
      throw ConfigError("unknown config key '" + name + "'");
    }
  }
}

template <class T>
void read_field(const json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->template get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config field '") + key + "' has the wrong type");
  }
}

inline int line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + byte, '\n'));
}

}  // namespace detail

inline void validate(const ExperimentConfig& c) {
  auto need = [](bool ok, const char* field, const std::string& what) {
    if (!ok) throw ConfigError(std::string(field) + ": " + what);
  };
  need(c.h > 0.0, "h", "must be positive");
  need(c.d_min > 0.0, "d_min", "must be positive");
  need(c.d_min < c.d_max, "d_min", "must be smaller than d_max");
  need(c.d_max < c.d_cam, "d_max", "must be smaller than d_cam");
  need(c.d_dof > 0.0, "d_dof", "must be positive");
  need(c.alpha_fov_deg > 0.0 && c.alpha_fov_deg < 180.0, "alpha_fov_deg",
       "must lie in (0, 180)");
  need(c.sigma_eps >= 0.0, "sigma_eps", "must be non-negative");
  need(c.pose_grid >= 8, "pose_grid", "must be at least 8");
  need(c.round_cap_factor >= 1, "round_cap_factor", "must be at least 1");
  need(c.belief_resolution >= 16, "belief_resolution", "must be at least 16");
  need(c.occlusion_neighborhood >= 0, "occlusion_neighborhood", "must be non-negative");
  need(c.workers >= 0, "workers", "must be non-negative");
  need(!c.planners.empty(), "planners", "must not be empty");
  need(!c.seeds.empty(), "seeds", "must not be empty");
  try {
    c.shape();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("camera: ") + e.what());
  }
  try {
    Kernel k(c.kernel);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("gp: ") + e.what());
  }
  try {
    c.confidence.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("confidence: ") + e.what());
  }
  for (const auto& p : c.planners) {
    try {
      PlannerSpec::parse(p);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("planners: ") + e.what());
    }
  }
}

// Parses a JSON config. Missing keys keep their defaults; unknown keys are
// rejected.
inline ExperimentConfig parse_config(const std::string& text) {
  using detail::json;
  using detail::read_field;
  ExperimentConfig c;
  bool blank = std::all_of(text.begin(), text.end(),
                           [](unsigned char ch) { return std::isspace(ch); });
  if (blank) {
    validate(c);
    return c;
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error at line " +
                      std::to_string(detail::line_of(text, e.byte)) + ": " + e.what());
  }
  detail::reject_unknown(j, "", {"world", "camera", "gp", "confidence", "planners",
                                 "zoo", "objects", "seeds", "pose_grid",
                                 "round_cap_factor", "belief_resolution",
                                 "occlusion_neighborhood", "workers"});
  if (auto it = j.find("world"); it != j.end()) {
    detail::reject_unknown(*it, "world", {"h", "d_min", "d_max"});
    read_field(*it, "h", c.h);
    read_field(*it, "d_min", c.d_min);
    read_field(*it, "d_max", c.d_max);
  }
  if (auto it = j.find("camera"); it != j.end()) {
    detail::reject_unknown(*it, "camera", {"d_cam", "d_dof", "alpha_fov_deg", "sigma_eps"});
    read_field(*it, "d_cam", c.d_cam);
    read_field(*it, "d_dof", c.d_dof);
    read_field(*it, "alpha_fov_deg", c.alpha_fov_deg);
    read_field(*it, "sigma_eps", c.sigma_eps);
  }
  if (auto it = j.find("gp"); it != j.end()) {
    detail::reject_unknown(*it, "gp", {"kernel", "sigma_f", "length", "nu",
                                       "periodization", "kappa", "c1", "c2"});
    std::string base = detail::kernel_base_name(c.kernel.base);
    read_field(*it, "kernel", base);
    if (base == "rbf") {
      c.kernel.base = KernelBase::kRbf;
    } else if (base == "matern") {
      c.kernel.base = KernelBase::kMatern;
    } else {
      throw ConfigError("gp.kernel: unknown kernel '" + base + "'");
    }
    read_field(*it, "sigma_f", c.kernel.sigma_f);
    read_field(*it, "length", c.kernel.length);
    read_field(*it, "nu", c.kernel.nu);
    std::string per = to_string(c.kernel.periodization);
    read_field(*it, "periodization", per);
    c.kernel.periodization = periodization_from_string(per);
    read_field(*it, "kappa", c.kernel.kappa);
    read_field(*it, "c1", c.kernel.c1);
    read_field(*it, "c2", c.kernel.c2);
  }
  if (auto it = j.find("confidence"); it != j.end()) {
    detail::reject_unknown(*it, "confidence", {"mode", "sqrt_beta", "a", "b", "delta"});
    std::string mode = to_string(c.confidence.mode);
    read_field(*it, "mode", mode);
    if (mode == "static") {
      c.confidence.mode = BetaMode::kStatic;
    } else if (mode == "union_bound") {
      c.confidence.mode = BetaMode::kUnionBound;
    } else {
      throw ConfigError("confidence.mode: unknown mode '" + mode + "'");
    }
    read_field(*it, "sqrt_beta", c.confidence.sqrt_beta);
    read_field(*it, "a", c.confidence.a);
    read_field(*it, "b", c.confidence.b);
    read_field(*it, "delta", c.confidence.delta);
  }
  read_field(j, "planners", c.planners);
  read_field(j, "zoo", c.zoo);
  read_field(j, "objects", c.objects);
  read_field(j, "seeds", c.seeds);
  read_field(j, "pose_grid", c.pose_grid);
  read_field(j, "round_cap_factor", c.round_cap_factor);
  read_field(j, "belief_resolution", c.belief_resolution);
  read_field(j, "occlusion_neighborhood", c.occlusion_neighborhood);
  read_field(j, "workers", c.workers);
  validate(c);
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

inline std::string dump_config(const ExperimentConfig& c) {
  return detail::config_to_json(c).dump(2) + "\n";
}

inline void save_config(const ExperimentConfig& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file '" + path + "'");
  out << dump_config(c);
}

inline bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return detail::config_to_json(a) == detail::config_to_json(b);
}

// Zoo entries selected by the config, in zoo order.
inline std::vector<ZooEntry> select_objects(const ExperimentConfig& c) {
  Kernel k(c.kernel);
  std::vector<ZooEntry> zoo = c.zoo.empty()
                                  ? parse_zoo(default_zoo_text(), c.d_min, c.d_max, k)
                                  : load_zoo(c.zoo, c.d_min, c.d_max, k);
  if (c.objects.empty()) return zoo;
  std::vector<ZooEntry> out;
  for (const auto& name : c.objects) {
    auto it = std::find_if(zoo.begin(), zoo.end(),
                           [&](const ZooEntry& e) { return e.name == name; });
    if (it == zoo.end()) throw ConfigError("objects: unknown object '" + name + "'");
    out.push_back(*it);
  }
  return out;
}

// Noise seed of an episode. Independent of the planner so that every planner
// on the same object and seed draws from the same stream.
inline std::uint64_t episode_seed(std::uint64_t seed, const std::string& object) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : object) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (h | 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

struct Cell {
  std::string object;
  std::string object_class;
  std::uint64_t seed = 0;
  std::string planner;
  std::optional<EpisodeRecord> episode;
  std::optional<MetricRow> metrics;
  std::string error;
};

// Mean of the metric rows of one planner over a group of objects.
struct AggregateRow {
  std::string scope;  // "class" or "overall"
  std::string group;  // class name, or "all"
  std::string planner;
  int count = 0;
  double rec = 0.0;
  double T = 0.0;
  std::optional<double> T_ge95;
  double T_tilde = 0.0;
  std::optional<double> T_ge95_tilde;
  double r_ind_bar = 0.0;
  int rank_rec = 0;
  int rank_nbv = 0;
};

struct ResultSet {
  ExperimentConfig config;
  std::vector<std::string> objects;
  std::vector<Cell> cells;  // object-major, then seed, then planner
  std::vector<int> rank_rec;  // per cell, within its (object, seed) group
  std::vector<int> rank_nbv;
  std::vector<AggregateRow> aggregates;
};

namespace detail {

template <class T>
std::optional<double> mean_if_all(const std::vector<std::optional<T>>& v) {
  if (v.empty()) return std::nullopt;
  double s = 0.0;
  for (const auto& x : v) {
    if (!x) return std::nullopt;
    s += static_cast<double>(*x);
  }
  return s / static_cast<double>(v.size());
}

inline AggregateRow aggregate(const std::string& scope, const std::string& group,
                              const std::string& planner,
                              const std::vector<const MetricRow*>& rows) {
  AggregateRow a;
  a.scope = scope;
  a.group = group;
  a.planner = planner;
  a.count = static_cast<int>(rows.size());
  if (rows.empty()) return a;
  std::vector<std::optional<int>> t95;
  std::vector<std::optional<double>> t95t;
  for (const MetricRow* r : rows) {
    a.rec += r->rec;
    a.T += r->T;
    a.T_tilde += r->T_tilde;
    a.r_ind_bar += r->r_ind_bar;
    t95.push_back(r->T_ge95);
    t95t.push_back(r->T_ge95_tilde);
  }
  double n = static_cast<double>(rows.size());
  a.rec /= n;
  a.T /= n;
  a.T_tilde /= n;
  a.r_ind_bar /= n;
  a.T_ge95 = mean_if_all(t95);
  a.T_ge95_tilde = mean_if_all(t95t);
  return a;
}

inline void assign_ranks(std::vector<AggregateRow>& rows, std::size_t from,
                         std::size_t to) {
  std::vector<AggregateRow> group(rows.begin() + from, rows.begin() + to);
  auto rr = rank_algorithms(group, RankMode::kRec);
  auto rn = rank_algorithms(group, RankMode::kNbv);
  for (std::size_t i = from; i < to; ++i) {
    rows[i].rank_rec = rr[i - from];
    rows[i].rank_nbv = rn[i - from];
  }
}

}  // namespace detail

inline void compute_aggregates(ResultSet& r) {
  const auto& planners = r.config.planners;
  std::size_t per_group = planners.size();
  r.rank_rec.assign(r.cells.size(), 0);
  r.rank_nbv.assign(r.cells.size(), 0);
  for (std::size_t g = 0; g + per_group <= r.cells.size(); g += per_group) {
    std::vector<MetricRow> rows;
    std::vector<std::size_t> idx;
    for (std::size_t i = g; i < g + per_group; ++i) {
      if (r.cells[i].metrics) {
        rows.push_back(*r.cells[i].metrics);
        idx.push_back(i);
      }
    }
    auto rr = rank_algorithms(rows, RankMode::kRec);
    auto rn = rank_algorithms(rows, RankMode::kNbv);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      r.rank_rec[idx[k]] = rr[k];
      r.rank_nbv[idx[k]] = rn[k];
    }
  }

  std::vector<std::string> classes;
  for (const auto& c : r.cells) {
    if (std::find(classes.begin(), classes.end(), c.object_class) == classes.end()) {
      classes.push_back(c.object_class);
    }
  }
  std::sort(classes.begin(), classes.end());
  r.aggregates.clear();
  auto add_group = [&](const std::string& scope, const std::string& group,
                       auto&& member) {
    std::size_t from = r.aggregates.size();
    for (const auto& p : planners) {
      std::vector<const MetricRow*> rows;
      for (const auto& c : r.cells) {
        if (c.planner == p && c.metrics && member(c)) rows.push_back(&*c.metrics);
      }
      r.aggregates.push_back(detail::aggregate(scope, group, p, rows));
    }
    detail::assign_ranks(r.aggregates, from, r.aggregates.size());
  };
  for (const auto& cls : classes) {
    add_group("class", cls, [&](const Cell& c) { return c.object_class == cls; });
  }
  add_group("overall", "all", [](const Cell&) { return true; });
}

// Runs every (object, seed) pair: the oracle episode first, then each planner.
inline ResultSet run_experiments(const ExperimentConfig& config) {
  validate(config);
  ResultSet result;
  result.config = config;
  std::vector<ZooEntry> zoo = select_objects(config);
  std::vector<PlannerSpec> specs = config.planner_specs();
  EpisodeSettings settings = config.settings();
  for (const auto& z : zoo) result.objects.push_back(z.name);

  std::size_t np = specs.size(), ns = config.seeds.size();
  result.cells.resize(zoo.size() * ns * np);
  for (std::size_t o = 0; o < zoo.size(); ++o) {
    for (std::size_t s = 0; s < ns; ++s) {
      for (std::size_t p = 0; p < np; ++p) {
        Cell& c = result.cells[(o * ns + s) * np + p];
        c.object = zoo[o].name;
        c.object_class = zoo[o].object_class;
        c.seed = config.seeds[s];
        c.planner = config.planners[p];
      }
    }
  }

  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t o; (o = next.fetch_add(1)) < zoo.size();) {
      std::optional<PreparedObject> prepared;
      std::string prep_error;
      try {
        prepared = prepare_object(zoo[o].object, settings, config.pose_grid);
      } catch (const std::exception& e) {
        prep_error = e.what();
      }
      for (std::size_t s = 0; s < ns; ++s) {
        Cell* row = &result.cells[(o * ns + s) * np];
        if (!prepared) {
          for (std::size_t p = 0; p < np; ++p) row[p].error = prep_error;
          continue;
        }
        std::uint64_t seed = episode_seed(config.seeds[s], zoo[o].name);
        int cap = config.round_cap_factor * std::max(oracle_rounds(*prepared), 1);
        std::optional<EpisodeRecord> oracle;
        std::string oracle_error;
        try {
          oracle = run_episode(PlannerSpec::oracle(), *prepared, settings, seed, cap);
        } catch (const std::exception& e) {
          oracle_error = e.what();
        }
        for (std::size_t p = 0; p < np; ++p) {
          Cell& c = row[p];
          try {
            c.episode = specs[p].kind == PlannerKind::kOracle && oracle
                            ? *oracle
                            : run_episode(specs[p], *prepared, settings, seed, cap);
            c.episode->planner = config.planners[p];
            if (!oracle) {
              c.error = "oracle episode failed: " + oracle_error;
              continue;
            }
            c.metrics = compute_metrics(*c.episode, *oracle);
            c.metrics->planner = c.planner;
            c.metrics->object = c.object;
            c.metrics->object_class = c.object_class;
            c.metrics->seed = c.seed;
          } catch (const std::exception& e) {
            c.error = e.what();
          }
        }
      }
    }
  };
  int workers = config.workers > 0
                    ? config.workers
                    : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min<int>(workers, static_cast<int>(std::max<std::size_t>(zoo.size(), 1)));
  std::vector<std::thread> pool;
  for (int i = 1; i < workers; ++i) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  compute_aggregates(result);
  return result;
}

namespace detail {

inline std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

template <class T>
std::string fmt_opt(const std::optional<T>& v) {
  if (!v) return "N/A";
  if constexpr (std::is_integral_v<T>) return std::to_string(*v);
  else return fmt(*v);
}

// Quotes a field when it holds a comma, quote or line break.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << csv_field(fields[i]);
  }
  out << "\r\n";
}

}  // namespace detail

inline const std::vector<std::string>& episodes_header() {
  static const std::vector<std::string> h = {
      "planner", "object", "seed", "t", "pose", "theta", "new_points",
      "marginal", "oracle_marginal", "r_ind", "cum_observed"};
  return h;
}

inline const std::vector<std::string>& summary_header() {
  static const std::vector<std::string> h = {
      "scope",  "planner", "object", "object_class", "seed", "count",
      "rec",    "T",       "T_ge95", "T_tilde",      "T_ge95_tilde",
      "r_ind_bar", "termination", "rank_rec", "rank_nbv", "error"};
  return h;
}

inline const std::vector<std::string>& curves_header() {
  static const std::vector<std::string> h = {"planner", "object", "seed", "t", "rec",
                                             "R_ind"};
  return h;
}

inline void write_episodes_csv(const ResultSet& r, std::ostream& out) {
  detail::write_row(out, episodes_header());
  for (const auto& c : r.cells) {
    if (!c.episode) continue;
    for (const auto& rd : c.episode->rounds) {
      detail::write_row(out, {c.planner, c.object, std::to_string(c.seed),
                              std::to_string(rd.t), std::to_string(rd.pose),
                              detail::fmt(rd.theta), std::to_string(rd.seen),
                              std::to_string(rd.marginal),
                              std::to_string(rd.oracle_marginal),
                              std::to_string(rd.r_ind), std::to_string(rd.cum_observed)});
    }
  }
}

inline void write_summary_csv(const ResultSet& r, std::ostream& out) {
  detail::write_row(out, summary_header());
  for (std::size_t i = 0; i < r.cells.size(); ++i) {
    const Cell& c = r.cells[i];
    if (!c.metrics) {
      detail::write_row(out, {"object", c.planner, c.object, c.object_class,
                              std::to_string(c.seed), "1", "", "", "", "", "", "", "",
                              "", "", c.error});
      continue;
    }
    const MetricRow& m = *c.metrics;
    detail::write_row(out, {"object", c.planner, c.object, c.object_class,
                            std::to_string(c.seed), "1", detail::fmt(m.rec),
                            std::to_string(m.T), detail::fmt_opt(m.T_ge95),
                            detail::fmt(m.T_tilde), detail::fmt_opt(m.T_ge95_tilde),
                            detail::fmt(m.r_ind_bar), to_string(m.termination),
                            std::to_string(r.rank_rec[i]), std::to_string(r.rank_nbv[i]),
                            c.error});
  }
  for (const auto& a : r.aggregates) {
    bool is_class = a.scope == "class";
    detail::write_row(out, {a.scope, a.planner, is_class ? "" : "all",
                            is_class ? a.group : "", "", std::to_string(a.count),
                            detail::fmt(a.rec), detail::fmt(a.T), detail::fmt_opt(a.T_ge95),
                            detail::fmt(a.T_tilde), detail::fmt_opt(a.T_ge95_tilde),
                            detail::fmt(a.r_ind_bar), "", std::to_string(a.rank_rec),
                            std::to_string(a.rank_nbv), ""});
  }
}

// Per-episode series, then per-planner means over all episodes. An episode
// that ended before round t contributes its final values.
inline void write_curves_csv(const ResultSet& r, std::ostream& out) {
  detail::write_row(out, curves_header());
  std::map<std::string, std::vector<const Cell*>> by_planner;
  for (const auto& c : r.cells) {
    if (!c.episode) continue;
    by_planner[c.planner].push_back(&c);
    long total = 0;
    int n = std::max(c.episode->surface_size, 1);
    for (const auto& rd : c.episode->rounds) {
      total += rd.r_ind;
      detail::write_row(out, {c.planner, c.object, std::to_string(c.seed),
                              std::to_string(rd.t),
                              detail::fmt(static_cast<double>(rd.cum_observed) / n),
                              std::to_string(total)});
    }
  }
  for (const auto& p : r.config.planners) {
    auto it = by_planner.find(p);
    if (it == by_planner.end()) continue;
    std::size_t t_max = 0;
    for (const Cell* c : it->second) t_max = std::max(t_max, c->episode->rounds.size());
    std::vector<long> totals(it->second.size(), 0);
    for (std::size_t t = 0; t < t_max; ++t) {
      double rec = 0.0, reg = 0.0;
      for (std::size_t k = 0; k < it->second.size(); ++k) {
        const EpisodeRecord& e = *it->second[k]->episode;
        int n = std::max(e.surface_size, 1);
        if (t < e.rounds.size()) totals[k] += e.rounds[t].r_ind;
        int seen = e.rounds.empty() ? 0
                                    : e.rounds[std::min(t, e.rounds.size() - 1)].cum_observed;
        rec += static_cast<double>(seen) / n;
        reg += static_cast<double>(totals[k]);
      }
      double m = static_cast<double>(it->second.size());
      detail::write_row(out, {p, "mean", "", std::to_string(t + 1), detail::fmt(rec / m),
                              detail::fmt(reg / m)});
    }
  }
}

// Writes episodes.csv, summary.csv, curves.csv and config.snapshot.
inline void emit_outputs(const ResultSet& r, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  auto open = [&](const char* name) {
    fs::path p = fs::path(out_dir) / name;
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error("cannot write '" + p.string() + "'");
    return f;
  };
  {
    auto f = open("episodes.csv");
    write_episodes_csv(r, f);
  }
  {
    auto f = open("summary.csv");
    write_summary_csv(r, f);
  }
  {
    auto f = open("curves.csv");
    write_curves_csv(r, f);
  }
  {
    auto f = open("config.snapshot");
    f << dump_config(r.config);
  }
}

}  // namespace nbv

#endif  // NBV_HARNESS_HPP_
