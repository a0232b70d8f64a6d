#include "neurohjr/environment.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace neurohjr {

Environment::Environment(Bounds bounds, Position start, Position goal,
                         std::vector<Obstacle> obstacles, double safety_margin,
                         double goal_threshold)
    : bounds_(bounds),
      start_(start),
      goal_(goal),
      obstacles_(std::move(obstacles)),
      safety_margin_(safety_margin),
      goal_threshold_(goal_threshold) {
  if (!(bounds_.width() > 0.0) || !(bounds_.height() > 0.0)) {
    throw std::invalid_argument("environment: bounds must have positive extent");
  }
  if (!is_finite(start_) || !is_finite(goal_)) {
    throw std::invalid_argument("environment: non-finite start or goal");
  }
  if (!bounds_.contains(start_) || !bounds_.contains(goal_)) {
    throw std::invalid_argument("environment: start/goal outside bounds");
  }
  if (!(goal_threshold_ > 0.0)) {
    throw std::invalid_argument("environment: goal_threshold must be > 0");
  }
  if (safety_margin_ < 0.0 || !std::isfinite(safety_margin_)) {
    throw std::invalid_argument("environment: invalid safety margin");
  }
  for (std::size_t i = 0; i < obstacles_.size(); ++i) {
    const Obstacle& o = obstacles_[i];
    if (!(o.radius > 0.0) || !std::isfinite(o.radius)) {
      throw std::invalid_argument("environment: obstacle " + std::to_string(i) +
                                  " has non-positive radius");
    }
    if (!bounds_.contains(o.center)) {
      throw std::invalid_argument("environment: obstacle " + std::to_string(i) +
                                  " center outside bounds");
    }
    const double rd = o.radius + safety_margin_;
    if (distance(start_, o.center) < rd) {
      throw std::invalid_argument("environment: start inside inflated disk of obstacle " +
                                  std::to_string(i));
    }
    if (distance(goal_, o.center) < rd) {
      throw std::invalid_argument("environment: goal inside inflated disk of obstacle " +
                                  std::to_string(i));
    }
  }
}

std::optional<NearestObstacle> nearest_obstacle(Position p,
                                                const Environment& env) {
  const auto& obs = env.obstacles();
  if (obs.empty()) return std::nullopt;
  NearestObstacle best{0, obs[0], distance(p, obs[0].center)};
  for (std::size_t i = 1; i < obs.size(); ++i) {
    const double d = distance(p, obs[i].center);
    if (d < best.center_distance) {
      best = NearestObstacle{i, obs[i], d};
    }
  }
  return best;
}

bool in_unsafe_region(Position p, const Environment& env) {
  const auto& obs = env.obstacles();
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (distance(p, obs[i].center) < env.unsafe_radius(i)) return true;
  }
  return false;
}

Vec2 goal_unit_vector(Position p, const Environment& env) {
  const double dx = env.goal().x - p.x;
  const double dy = env.goal().y - p.y;
  const double norm = std::hypot(dx, dy);
  if (norm < 1e-9) {
    throw std::domain_error("goal_unit_vector: point coincides with goal");
  }
  return {dx / norm, dy / norm};
}

}  // namespace neurohjr
