#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "neurohjr/environment.hpp"
#include "neurohjr/hjb.hpp"
#include "neurohjr/mlp.hpp"

namespace neurohjr {

enum class ControllerKind { kNeuroHjr, kClassical };
enum class LatencyModel { kNone, kMeasured };
enum class Mode { kNominal, kAvoid };

struct SimConfig {
  double dt = 0.1;
  double sensor_radius = 5.0;
  double max_episode_time = 300.0;
  ControllerKind controller = ControllerKind::kNeuroHjr;
  LatencyModel latency = LatencyModel::kNone;
  std::uint64_t seed = 0;
  /// Half-width of the square from which the episode start is drawn around
  /// env.start (0 disables the jitter and the seed has no kinematic effect).
  double start_jitter = 0.0;

  void validate() const;
};

struct TrajectorySample {
  double t = 0.0;
  Position p;
  Control u;
  Mode mode = Mode::kNominal;
  double min_center_distance = 0.0;  // to the nearest obstacle center
};

struct EpisodeResult {
  std::vector<TrajectorySample> trajectory;
  bool reached_goal = false;
  double travel_time = 0.0;   // kinematic time, plus compute time when measured
  double path_length = 0.0;
  double min_clearance = 0.0;  // min over samples of nearest-center distance
  double control_compute_time = 0.0;
  // Compute-cost details behind control_compute_time. resolve_count counts
  // NOMINAL -> AVOID activations; resolve_compute_time is nonzero only for
  // the classical controller with measured latency.
  double resolve_compute_time = 0.0;
  int resolve_count = 0;
  int control_steps = 0;
};

/// Explicit Euler step p + u*dt, clamped to the workspace.
Position step(Position p, Control u, double dt, const Bounds& bounds);

/// Obstacles whose center lies within `radius` of p, in index order.
std::vector<Obstacle> sense(Position p, const Environment& env, double radius);

/// AVOID iff some sensed obstacle's inflated disk intersects the straight
/// segment from p toward the goal, truncated at `sensor_radius` ahead.
Mode select_mode(Position p, const Environment& env,
                 std::span<const Obstacle> sensed, Mode current,
                 double sensor_radius);

/// Unit vector toward the goal at 1 m/s.
Control nominal_control(Position p, const Environment& env);

/// Control head of the network evaluated at p.
Control neuro_control(const MlpParameters& params, const InputScaler& scaler,
                      Position p);

struct NeuroResources {
  MlpParameters params;
  InputScaler scaler;
};

/// Classical controller state: the frozen forward field plus the recipe for
/// re-solving the backward field, which happens on every NOMINAL -> AVOID
/// transition when latency is measured (the field is identical each time;
/// the point is the measured cost).
struct ClassicalResources {
  ValueField forward_field;
  ValueField composite;
  double backward_horizon = 3.0;
  double solve_dt = 0.05;
  Dissipation alpha;
};

EpisodeResult run_episode(const Environment& env, const SimConfig& cfg,
                          const NeuroResources& res);
EpisodeResult run_episode(const Environment& env, const SimConfig& cfg,
                          const ClassicalResources& res);

/// Trajectory CSV: t,px,py,ux,uy,mode,min_center_distance.
void write_trajectory_csv(const std::string& path, const EpisodeResult& ep);

}  // namespace neurohjr
