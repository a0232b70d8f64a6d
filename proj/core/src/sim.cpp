#include "neurohjr/sim.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "neurohjr/collocation.hpp"
#include "neurohjr/manifest.hpp"
#include "neurohjr/rng.hpp"

namespace neurohjr {

void SimConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("sim: dt must be > 0");
  if (!(sensor_radius > 0.0)) {
    throw std::invalid_argument("sim: sensor_radius must be > 0");
  }
  if (!(max_episode_time > dt)) {
    throw std::invalid_argument("sim: max_episode_time must exceed dt");
  }
  if (start_jitter < 0.0) {
    throw std::invalid_argument("sim: start_jitter must be >= 0");
  }
}

Position step(Position p, Control u, double dt, const Bounds& bounds) {
  return bounds.clamp({p.x + u.ux * dt, p.y + u.uy * dt});
}

std::vector<Obstacle> sense(Position p, const Environment& env, double radius) {
  std::vector<Obstacle> out;
  for (const Obstacle& o : env.obstacles()) {
    if (distance(p, o.center) <= radius) out.push_back(o);
  }
  return out;
}

namespace {

double point_segment_distance(Position q, Position a, Position b) {
  const double abx = b.x - a.x;
  const double aby = b.y - a.y;
  const double len2 = abx * abx + aby * aby;
  if (len2 == 0.0) return distance(q, a);
  double s = ((q.x - a.x) * abx + (q.y - a.y) * aby) / len2;
  s = std::min(1.0, std::max(0.0, s));
  return distance(q, {a.x + s * abx, a.y + s * aby});
}

double nearest_center_distance(Position p, const Environment& env) {
  const auto near = nearest_obstacle(p, env);
  return near ? near->center_distance
              : std::numeric_limits<double>::infinity();
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Position jittered_start(const Environment& env, const SimConfig& cfg) {
  if (cfg.start_jitter <= 0.0) return env.start();
  Rng rng(mix_seed(cfg.seed, 0x5742));
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Position p{env.start().x + rng.uniform(-cfg.start_jitter, cfg.start_jitter),
               env.start().y + rng.uniform(-cfg.start_jitter, cfg.start_jitter)};
    if (env.bounds().contains(p) && !in_unsafe_region(p, env)) return p;
  }
  throw SamplingError("run_episode: could not place a safe jittered start");
}

/// Shared episode loop; `control` computes the AVOID-mode command and
/// `on_avoid_entry` runs on each NOMINAL -> AVOID transition (classical
/// re-solve hook). Both are timed into control_compute_time.
template <typename AvoidControl, typename OnAvoidEntry>
EpisodeResult episode_loop(const Environment& env, const SimConfig& cfg,
                           AvoidControl&& control,
                           OnAvoidEntry&& on_avoid_entry) {
  cfg.validate();
  EpisodeResult ep;
  Position p = jittered_start(env, cfg);
  Mode mode = Mode::kNominal;
  double compute = 0.0;
  long k = 0;
  double t = 0.0;
  bool reached = false;

  for (;;) {
    t = static_cast<double>(k) * cfg.dt;
    if (distance(p, env.goal()) < env.goal_threshold()) {
      reached = true;
      break;
    }
    if (t >= cfg.max_episode_time - 1e-12) break;

    const auto sensed = sense(p, env, cfg.sensor_radius);
    const Mode next_mode =
        select_mode(p, env, sensed, mode, cfg.sensor_radius);
    if (next_mode == Mode::kAvoid && mode == Mode::kNominal) {
      const auto t0 = Clock::now();
      on_avoid_entry();
      const double dt_solve = seconds_since(t0);
      compute += dt_solve;
      ep.resolve_compute_time += dt_solve;
      ep.resolve_count += 1;
    }
    mode = next_mode;

    const auto t0 = Clock::now();
    const Control u = (mode == Mode::kNominal) ? nominal_control(p, env)
                                               : control(p);
    compute += seconds_since(t0);
    ep.control_steps += 1;

    ep.trajectory.push_back(
        {t, p, u, mode, nearest_center_distance(p, env)});
    const Position next = step(p, u, cfg.dt, env.bounds());
    ep.path_length += distance(p, next);
    p = next;
    ++k;
  }
  ep.trajectory.push_back({t, p, Control{}, mode,
                           nearest_center_distance(p, env)});
  ep.reached_goal = reached;
  ep.control_compute_time = compute;
  ep.travel_time =
      t + (cfg.latency == LatencyModel::kMeasured ? compute : 0.0);
  ep.min_clearance = std::numeric_limits<double>::infinity();
  for (const auto& s : ep.trajectory) {
    ep.min_clearance = std::min(ep.min_clearance, s.min_center_distance);
  }
  return ep;
}

}  // namespace

Mode select_mode(Position p, const Environment& env,
                 std::span<const Obstacle> sensed, Mode /*current*/,
                 double sensor_radius) {
  const double d_goal = distance(p, env.goal());
  if (d_goal < 1e-12) return Mode::kNominal;
  const Vec2 dir = goal_unit_vector(p, env);
  const double ahead = std::min(sensor_radius, d_goal);
  const Position end{p.x + dir.x * ahead, p.y + dir.y * ahead};
  for (const Obstacle& o : sensed) {
    const double rd = o.radius + env.safety_margin();
    if (point_segment_distance(o.center, p, end) <= rd) return Mode::kAvoid;
  }
  return Mode::kNominal;
}

Control nominal_control(Position p, const Environment& env) {
  const Vec2 dir = goal_unit_vector(p, env);
  return {dir.x, dir.y};
}

Control neuro_control(const MlpParameters& params, const InputScaler& scaler,
                      Position p) {
  return forward(params, scaler.normalize(p)).u;
}

EpisodeResult run_episode(const Environment& env, const SimConfig& cfg,
                          const NeuroResources& res) {
  return episode_loop(
      env, cfg,
      [&](Position p) { return neuro_control(res.params, res.scaler, p); },
      [] {});
}

EpisodeResult run_episode(const Environment& env, const SimConfig& cfg,
                          const ClassicalResources& res) {
  ValueField composite = res.composite;
  auto resolve = [&] {
    if (cfg.latency != LatencyModel::kMeasured) return;
    // The environment is static, so the re-solved field equals the cached
    // one; what matters is paying the solver cost at each activation.
    ValueField vb = solve(init_backward(env, res.forward_field.grid()),
                          res.backward_horizon, res.solve_dt, res.alpha);
    composite = composite_value(res.forward_field, vb);
  };
  return episode_loop(
      env, cfg, [&](Position p) { return classical_control(composite, p); },
      resolve);
}

void write_trajectory_csv(const std::string& path, const EpisodeResult& ep) {
  std::ostringstream out;
  out << "t,px,py,ux,uy,mode,min_center_distance\n";
  char buf[200];
  for (const TrajectorySample& s : ep.trajectory) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%s,%.17g\n",
                  s.t, s.p.x, s.p.y, s.u.ux, s.u.uy,
                  s.mode == Mode::kNominal ? "nominal" : "avoid",
                  s.min_center_distance);
    out << buf;
  }
  write_file_atomic(path, out.str());
}

}  // namespace neurohjr
