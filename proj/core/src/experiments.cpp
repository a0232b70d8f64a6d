#include "neurohjr/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "neurohjr/collocation.hpp"
#include "neurohjr/manifest.hpp"
#include "neurohjr/rng.hpp"

namespace neurohjr {

Environment random_environment(const EnvTemplate& tpl, std::uint64_t seed) {
  Rng rng(mix_seed(seed, 0xe17));
  const double rd = tpl.obstacle_radius + tpl.safety_margin;
  const double keep_out = rd + tpl.placement_clearance;
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::vector<Obstacle> obstacles;
    obstacles.reserve(tpl.obstacle_count);
    bool ok = true;
    for (int k = 0; k < tpl.obstacle_count; ++k) {
      bool placed = false;
      for (int draw = 0; draw < 1000; ++draw) {
        Position c{rng.uniform(tpl.bounds.lo.x, tpl.bounds.hi.x),
                   rng.uniform(tpl.bounds.lo.y, tpl.bounds.hi.y)};
        if (distance(c, tpl.start) < keep_out) continue;
        if (distance(c, tpl.goal) < keep_out) continue;
        obstacles.push_back({c, tpl.obstacle_radius});
        placed = true;
        break;
      }
      if (!placed) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    return Environment(tpl.bounds, tpl.start, tpl.goal, std::move(obstacles),
                       tpl.safety_margin, tpl.goal_threshold);
  }
  throw SamplingError("random_environment: placement retries exhausted");
}

void SolveSetup::validate() const {
  if (!(spacing > 0.0)) throw std::invalid_argument("solve: spacing must be > 0");
  if (!(cfl > 0.0) || cfl > 1.0) {
    throw std::invalid_argument("solve: cfl must be in (0, 1]");
  }
  if (horizon_forward < 0.0 || horizon_backward < 0.0) {
    throw std::invalid_argument("solve: horizons must be >= 0");
  }
  if (!(alpha.ax >= 1.0) || !(alpha.ay >= 1.0)) {
    throw std::invalid_argument("solve: dissipation must dominate |dH/dp| = 1");
  }
}

SolvedFields solve_fields(const Environment& env, const SolveSetup& setup) {
  setup.validate();
  const Grid2D grid = Grid2D::covering(env.bounds(), setup.spacing);
  const double dt = setup.dt();
  SolvedFields out{
      solve(init_forward(env, grid), setup.horizon_forward, dt, setup.alpha),
      solve(init_backward(env, grid), setup.horizon_backward, dt, setup.alpha),
      ValueField(grid)};
  out.composite = composite_value(out.forward, out.backward);
  return out;
}

EpisodeSummary summarize(int run_id, const std::string& controller,
                         const EpisodeResult& ep) {
  EpisodeSummary s;
  s.run_id = run_id;
  s.controller = controller;
  s.travel_time = ep.travel_time;
  s.path_length = ep.path_length;
  s.min_clearance = ep.min_clearance;
  s.reached_goal = ep.reached_goal;
  s.compute_time = ep.control_compute_time;
  s.resolve_time = ep.resolve_compute_time;
  s.resolve_count = ep.resolve_count;
  s.control_steps = ep.control_steps;
  return s;
}

namespace {

const char* controller_name(ControllerKind kind) {
  return kind == ControllerKind::kNeuroHjr ? "neurohjr" : "classical";
}

EpisodeResult run_side(const Environment& env, const SimConfig& cfg,
                       const SolvedFields& fields, const SolveSetup& solver,
                       const TrainConfig& training, std::uint64_t run_seed) {
  if (cfg.controller == ControllerKind::kNeuroHjr) {
    TrainConfig tc = training;
    tc.seed = mix_seed(training.seed, run_seed);
    TrainResult tr = train(env, fields.composite, tc);
    NeuroResources res{std::move(tr.params), InputScaler{env.bounds()}};
    return run_episode(env, cfg, res);
  }
  ClassicalResources res{fields.forward, fields.composite,
                         solver.horizon_backward, solver.dt(), solver.alpha};
  return run_episode(env, cfg, res);
}

}  // namespace

ComparisonResult run_monte_carlo(const EnvTemplate& tpl, int n_runs,
                                 std::uint64_t placement_seed,
                                 const SolveSetup& solver,
                                 const TrainConfig& training,
                                 const SimConfig& first,
                                 const SimConfig& second) {
  if (n_runs < 1) {
    throw std::invalid_argument("run_monte_carlo: n_runs must be >= 1");
  }
  ComparisonResult out;
  out.runs.reserve(n_runs);

  double step_time_first = 0.0;
  long steps_first = 0;
  double resolve_time_second = 0.0;
  long resolves_second = 0;

  for (int run = 0; run < n_runs; ++run) {
    const Environment env =
        random_environment(tpl, mix_seed(placement_seed, run));
    const SolvedFields fields = solve_fields(env, solver);

    SimConfig cfg_a = first;
    SimConfig cfg_b = second;
    cfg_a.seed = mix_seed(first.seed, 1000 + run);
    cfg_b.seed = mix_seed(second.seed, 1000 + run);

    const EpisodeResult ep_a =
        run_side(env, cfg_a, fields, solver, training, run);
    const EpisodeResult ep_b =
        run_side(env, cfg_b, fields, solver, training, run);

    ComparisonRun row;
    row.run_id = run;
    row.first = summarize(run, controller_name(cfg_a.controller), ep_a);
    row.second = summarize(run, controller_name(cfg_b.controller), ep_b);
    out.runs.push_back(row);

    step_time_first += ep_a.control_compute_time;
    steps_first += ep_a.control_steps;
    resolve_time_second += ep_b.resolve_compute_time;
    resolves_second += ep_b.resolve_count;
  }

  const double inv = 1.0 / n_runs;
  for (const ComparisonRun& r : out.runs) {
    out.mean_travel_first += r.first.travel_time * inv;
    out.mean_travel_second += r.second.travel_time * inv;
    out.mean_path_first += r.first.path_length * inv;
    out.mean_path_second += r.second.path_length * inv;
    if (r.second.travel_time > 0.0) {
      out.travel_reduction_pct +=
          (r.second.travel_time - r.first.travel_time) / r.second.travel_time *
          100.0 * inv;
    }
    if (r.second.path_length > 0.0) {
      out.path_efficiency_pct +=
          (r.second.path_length - r.first.path_length) / r.second.path_length *
          100.0 * inv;
    }
    const double radius = tpl.obstacle_radius;
    if (r.first.min_clearance <= radius) out.safety_violations_first += 1;
    if (r.second.min_clearance <= radius) out.safety_violations_second += 1;
  }
  out.mean_first_step_compute =
      steps_first > 0 ? step_time_first / steps_first : 0.0;
  out.mean_second_resolve_compute =
      resolves_second > 0 ? resolve_time_second / resolves_second : 0.0;
  return out;
}

std::vector<AblationRow> run_ablation(const Environment& env,
                                      std::span<const double> radii,
                                      const SimConfig& base,
                                      const NeuroResources& res) {
  if (radii.empty()) {
    throw std::invalid_argument("run_ablation: radii list empty");
  }
  std::vector<AblationRow> rows;
  rows.reserve(radii.size());
  for (double rho : radii) {
    SimConfig cfg = base;
    cfg.controller = ControllerKind::kNeuroHjr;
    cfg.sensor_radius = rho;
    const EpisodeResult ep = run_episode(env, cfg, res);
    rows.push_back({rho, ep.travel_time, ep.path_length, ep.min_clearance,
                    ep.reached_goal});
  }
  return rows;
}

namespace {
void append_summary_row(std::ostringstream& out, const EpisodeSummary& s) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d,%s,%.17g,%.17g,%.17g,%d,%.17g\n",
                s.run_id, s.controller.c_str(), s.travel_time, s.path_length,
                s.min_clearance, s.reached_goal ? 1 : 0, s.compute_time);
  out << buf;
}
}  // namespace

void write_comparison_csv(const std::string& path, const ComparisonResult& r) {
  std::ostringstream out;
  out << "run_id,controller,travel_time_s,path_length_m,min_clearance_m,"
         "reached_goal,compute_time_s\n";
  for (const ComparisonRun& run : r.runs) {
    append_summary_row(out, run.first);
    append_summary_row(out, run.second);
  }
  write_file_atomic(path, out.str());
}

void write_comparison_summary_csv(const std::string& path,
                                  const ComparisonResult& r) {
  std::ostringstream out;
  out << "metric,first,second\n";
  char buf[200];
  std::snprintf(buf, sizeof buf, "mean_travel_time_s,%.17g,%.17g\n",
                r.mean_travel_first, r.mean_travel_second);
  out << buf;
  std::snprintf(buf, sizeof buf, "mean_path_length_m,%.17g,%.17g\n",
                r.mean_path_first, r.mean_path_second);
  out << buf;
  std::snprintf(buf, sizeof buf, "safety_violations,%d,%d\n",
                r.safety_violations_first, r.safety_violations_second);
  out << buf;
  std::snprintf(buf, sizeof buf, "mean_travel_time_reduction_pct,%.17g,\n",
                r.travel_reduction_pct);
  out << buf;
  std::snprintf(buf, sizeof buf, "mean_path_efficiency_pct,%.17g,\n",
                r.path_efficiency_pct);
  out << buf;
  std::snprintf(buf, sizeof buf, "mean_first_step_compute_s,%.17g,\n",
                r.mean_first_step_compute);
  out << buf;
  std::snprintf(buf, sizeof buf, "mean_second_resolve_compute_s,%.17g,\n",
                r.mean_second_resolve_compute);
  out << buf;
  write_file_atomic(path, out.str());
}

void write_ablation_csv(const std::string& path,
                        std::span<const AblationRow> rows) {
  std::ostringstream out;
  out << "sensor_radius_m,travel_time_s,path_length_m,min_clearance_m,"
         "reached_goal\n";
  char buf[200];
  for (const AblationRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%d\n",
                  r.sensor_radius, r.travel_time, r.path_length,
                  r.min_clearance, r.reached_goal ? 1 : 0);
    out << buf;
  }
  write_file_atomic(path, out.str());
}

void write_episode_summary_csv(const std::string& path,
                               std::span<const EpisodeSummary> rows) {
  std::ostringstream out;
  out << "run_id,controller,travel_time_s,path_length_m,min_clearance_m,"
         "reached_goal,compute_time_s\n";
  for (const EpisodeSummary& s : rows) append_summary_row(out, s);
  write_file_atomic(path, out.str());
}

}  // namespace neurohjr
