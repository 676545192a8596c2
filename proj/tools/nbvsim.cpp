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


// Command-line driver: run experiments, single episodes, acceptance checks,
// or list the object zoo.

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nbv/acceptance.hpp"
#include "nbv/harness.hpp"

namespace {

struct Options {
  std::string config;
  std::string out = "out";
  std::string scratch;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> planners;
  std::vector<std::string> objects;
};

nbv::ExperimentConfig resolve(const Options& o) {
  nbv::ExperimentConfig c = o.config.empty() ? nbv::ExperimentConfig{}
                                             : nbv::load_config(o.config);
  if (!o.seeds.empty()) c.seeds = o.seeds;
  if (!o.planners.empty()) c.planners = o.planners;
  if (!o.objects.empty()) c.objects = o.objects;
  nbv::validate(c);
  return c;
}

int cmd_run(const Options& o) {
  nbv::ExperimentConfig c = resolve(o);
  nbv::ResultSet r = nbv::run_experiments(c);
  nbv::emit_outputs(r, o.out);
  int failed = 0;
  for (const auto& cell : r.cells) {
    if (!cell.error.empty()) {
      std::fprintf(stderr, "%s / %s / %llu: %s\n", cell.object.c_str(),
                   cell.planner.c_str(), static_cast<unsigned long long>(cell.seed),
                   cell.error.c_str());
      ++failed;
    }
  }
  std::printf("%zu cells (%d failed), outputs in %s\n", r.cells.size(), failed,
              o.out.c_str());
  for (const auto& a : r.aggregates) {
    if (a.scope != "overall") continue;
    std::printf("%-12s rec %6.2f%%  T~ %7.2f%%  r_ind %6.2f  rank %d/%d\n",
                a.planner.c_str(), 100.0 * a.rec, 100.0 * a.T_tilde, a.r_ind_bar,
                a.rank_rec, a.rank_nbv);
  }
  return 0;
}

int cmd_episode(const Options& o) {
  nbv::ExperimentConfig c = resolve(o);
  if (c.objects.size() != 1 || o.planners.size() != 1) {
    throw nbv::ConfigError("episode needs exactly one --object and one --planner");
  }
  auto zoo = nbv::select_objects(c);
  nbv::EpisodeSettings s = c.settings();
  nbv::PreparedObject p = nbv::prepare_object(zoo[0].object, s, c.pose_grid);
  std::uint64_t seed = nbv::episode_seed(c.seeds.front(), zoo[0].name);
  int cap = c.round_cap_factor * std::max(nbv::oracle_rounds(p), 1);
  nbv::EpisodeRecord e =
      nbv::run_episode(nbv::PlannerSpec::parse(o.planners[0]), p, s, seed, cap);
  std::printf("object %s (%zu surface points), planner %s\n", zoo[0].name.c_str(),
              p.surface.size(), o.planners[0].c_str());
  std::printf("%4s %9s %6s %6s %8s %8s %6s %10s\n", "t", "theta", "seen", "new",
              "oracle", "r_ind", "R_ind", "observed");
  long total = 0;
  for (const auto& r : e.rounds) {
    total += r.r_ind;
    std::printf("%4d %9.4f %6d %6d %8d %8d %6ld %10d\n", r.t, r.theta, r.seen,
                r.marginal, r.oracle_marginal, r.r_ind, total, r.cum_observed);
  }
  int seen = e.rounds.empty() ? 0 : e.rounds.back().cum_observed;
  std::printf("termination %s, rec %.4f\n", nbv::to_string(e.termination).c_str(),
              e.surface_size ? static_cast<double>(seen) / e.surface_size : 1.0);
  return 0;
}

int cmd_check(const Options& o) {
  nbv::ExperimentConfig c = resolve(o);
  std::string scratch = o.scratch.empty()
                            ? (std::filesystem::temp_directory_path() / "nbv_check").string()
                            : o.scratch;
  bool ok = true;
  nbv::run_acceptance(c, scratch, [&](const nbv::CheckResult& r) {
    std::printf("%s criterion %d (%s): %s\n", r.passed ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.detail.c_str());
    std::fflush(stdout);
    ok = ok && r.passed;
  });
  return ok ? 0 : 2;
}

int cmd_zoo(const Options& o) {
  nbv::ExperimentConfig c = resolve(o);
  for (const auto& z : nbv::select_objects(c)) {
    nbv::SurfacePointSet s = nbv::discretize(z.object, c.h);
    std::printf("%-16s %-8s %zu points\n", z.name.c_str(), z.object_class.c_str(),
                s.size());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulated next-best-view planning with Gaussian-process beliefs"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seeds, "noise seed (repeatable)");
    sub->add_option("--planner", o.planners, "planner label (repeatable)");
    sub->add_option("--object", o.objects, "zoo object name (repeatable)");
  };
  auto* run = app.add_subcommand("run", "run the object x planner x seed grid");
  add_common(run);
  run->add_option("--out", o.out, "output directory");
  auto* episode = app.add_subcommand("episode", "run one episode with a per-round log");
  add_common(episode);
  auto* check = app.add_subcommand("check", "run the acceptance checks");
  add_common(check);
  check->add_option("--out", o.scratch, "scratch directory");
  auto* zoo = app.add_subcommand("zoo", "list the object zoo");
  add_common(zoo);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  try {
    if (*run) return cmd_run(o);
    if (*episode) return cmd_episode(o);
    if (*check) return cmd_check(o);
    if (*zoo) return cmd_zoo(o);
  } catch (const nbv::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
