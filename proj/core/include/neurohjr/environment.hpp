#pragma once

#include <optional>
#include <vector>

#include "neurohjr/geometry.hpp"

namespace neurohjr {

/// Circular obstacle (cylinder seen from above).
struct Obstacle {
  Position center;
  double radius = 0.0;
};

/// Workspace description shared by the solver, trainer and simulator.
///
/// Construction validates the invariants and throws std::invalid_argument on
/// violation: positive radii, centers inside the bounds, and start/goal
/// strictly outside every inflated disk of radius R + delta. Obstacles may
/// overlap each other.
class Environment {
 public:
  Environment(Bounds bounds, Position start, Position goal,
              std::vector<Obstacle> obstacles, double safety_margin,
              double goal_threshold);

  const Bounds& bounds() const { return bounds_; }
  Position start() const { return start_; }
  Position goal() const { return goal_; }
  const std::vector<Obstacle>& obstacles() const { return obstacles_; }
  double safety_margin() const { return safety_margin_; }
  double goal_threshold() const { return goal_threshold_; }

  /// Radius of the unsafe disk around obstacle i: R + delta.
  double unsafe_radius(std::size_t i) const {
    return obstacles_[i].radius + safety_margin_;
  }

 private:
  Bounds bounds_;
  Position start_;
  Position goal_;
  std::vector<Obstacle> obstacles_;
  double safety_margin_ = 0.0;
  double goal_threshold_ = 0.0;
};

struct NearestObstacle {
  std::size_t index = 0;
  Obstacle obstacle;
  double center_distance = 0.0;  // distance to the obstacle center
};

/// Obstacle whose center is closest to p; ties break toward the lowest index.
/// Empty obstacle list yields nullopt.
std::optional<NearestObstacle> nearest_obstacle(Position p,
                                                const Environment& env);

/// True iff p lies strictly inside some inflated disk (d < R + delta).
/// Points exactly on the inflated boundary count as safe.
bool in_unsafe_region(Position p, const Environment& env);

/// Unit vector from p toward the goal. Throws std::domain_error when p is
/// within 1e-9 of the goal.
Vec2 goal_unit_vector(Position p, const Environment& env);

}  // namespace neurohjr
