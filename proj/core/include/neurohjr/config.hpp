#pragma once

#include <string>
#include <vector>

#include "neurohjr/experiments.hpp"

namespace neurohjr {

/// Configuration file problem; message carries "file:line:".
struct ConfigError : std::runtime_error {
  int line = 0;
  ConfigError(const std::string& msg, int line_no)
      : std::runtime_error(msg), line(line_no) {}
};

/// Environment section: either an explicit obstacle list or a random
/// placement recipe.
struct EnvironmentSpec {
  Bounds bounds{{0.0, 0.0}, {45.0, 45.0}};
  Position start{1.0, 1.0};
  Position goal{40.0, 40.0};
  double safety_margin = 1.0;
  double goal_threshold = 0.5;
  std::vector<Obstacle> obstacles;
  int random_obstacles = 0;
  double obstacle_radius = 2.0;
  std::uint64_t placement_seed = 1;
  double placement_clearance = 2.0;

  EnvTemplate as_template() const;
  /// Builds the environment (drawing random obstacles when configured).
  Environment realize() const;
};

/// Full experiment configuration. Sections: [environment], [grid],
/// [training], [simulation], [compare], [ablation].
struct ExperimentConfig {
  EnvironmentSpec environment;
  SolveSetup grid;
  TrainConfig training;
  std::string composite_field_path;  // optional pre-solved oracle
  SimConfig simulation;
  int episodes = 1;
  std::string checkpoint_path;
  int compare_runs = 10;
  std::vector<double> ablation_radii{3.0, 5.0, 7.0};

  /// Canonical dump with all defaults applied; embedded in run manifests.
  std::string resolved_text() const;
};

/// Parses the INI-style format: [section] headers, key = value lines,
/// '#'/';' comments. Unknown sections or keys are rejected with the line
/// number, as are malformed values.
ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& name);
ExperimentConfig parse_config_file(const std::string& path);

}  // namespace neurohjr
