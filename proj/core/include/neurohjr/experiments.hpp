#pragma once

#include <span>
#include <string>
#include <vector>

#include "neurohjr/sim.hpp"
#include "neurohjr/trainer.hpp"

namespace neurohjr {

/// Workspace recipe for randomized environments.
struct EnvTemplate {
  Bounds bounds{{0.0, 0.0}, {45.0, 45.0}};
  Position start{1.0, 1.0};
  Position goal{40.0, 40.0};
  int obstacle_count = 10;
  double obstacle_radius = 2.0;
  double safety_margin = 1.0;
  double goal_threshold = 0.5;
  /// Required clearance of start/goal beyond the inflated radius.
  double placement_clearance = 2.0;
};

/// Uniformly placed obstacles, re-drawn until start and goal keep
/// placement_clearance beyond every inflated disk. Throws SamplingError
/// after a bounded number of retries.
Environment random_environment(const EnvTemplate& tpl, std::uint64_t seed);

/// Grid solver settings shared by the oracle and the classical baseline.
struct SolveSetup {
  double spacing = 0.25;
  double cfl = 0.4;
  double horizon_forward = 90.0;
  double horizon_backward = 3.0;
  Dissipation alpha;

  double dt() const { return cfl * spacing / (alpha.ax + alpha.ay); }
  void validate() const;
};

struct SolvedFields {
  ValueField forward;
  ValueField backward;
  ValueField composite;
};

SolvedFields solve_fields(const Environment& env, const SolveSetup& setup);

struct EpisodeSummary {
  int run_id = 0;
  std::string controller;
  double travel_time = 0.0;
  double path_length = 0.0;
  double min_clearance = 0.0;
  bool reached_goal = false;
  double compute_time = 0.0;
  double resolve_time = 0.0;
  int resolve_count = 0;
  int control_steps = 0;
};

EpisodeSummary summarize(int run_id, const std::string& controller,
                         const EpisodeResult& ep);

struct ComparisonRun {
  int run_id = 0;
  EpisodeSummary first;
  EpisodeSummary second;
};

struct ComparisonResult {
  std::vector<ComparisonRun> runs;
  double mean_travel_first = 0.0;
  double mean_travel_second = 0.0;
  double mean_path_first = 0.0;
  double mean_path_second = 0.0;
  /// Mean over runs of (second - first)/second * 100.
  double travel_reduction_pct = 0.0;
  double path_efficiency_pct = 0.0;
  int safety_violations_first = 0;   // min clearance <= obstacle radius
  int safety_violations_second = 0;
  double mean_first_step_compute = 0.0;     // per control step, seconds
  double mean_second_resolve_compute = 0.0; // per re-solve activation, seconds
};

/// Generates n_runs random environments, prepares each side's controller
/// resources (training a fresh network per environment when a side is
/// NeuroHJR), runs one episode per side per environment and aggregates.
ComparisonResult run_monte_carlo(const EnvTemplate& tpl, int n_runs,
                                 std::uint64_t placement_seed,
                                 const SolveSetup& solver,
                                 const TrainConfig& training,
                                 const SimConfig& first,
                                 const SimConfig& second);

struct AblationRow {
  double sensor_radius = 0.0;
  double travel_time = 0.0;
  double path_length = 0.0;
  double min_clearance = 0.0;
  bool reached_goal = false;
};

/// Same environment and checkpoint, one NeuroHJR episode per radius; rows
/// keep the input order.
std::vector<AblationRow> run_ablation(const Environment& env,
                                      std::span<const double> radii,
                                      const SimConfig& base,
                                      const NeuroResources& res);

void write_comparison_csv(const std::string& path, const ComparisonResult& r);
void write_comparison_summary_csv(const std::string& path,
                                  const ComparisonResult& r);
void write_ablation_csv(const std::string& path,
                        std::span<const AblationRow> rows);
void write_episode_summary_csv(const std::string& path,
                               std::span<const EpisodeSummary> rows);

}  // namespace neurohjr
