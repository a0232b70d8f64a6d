#pragma once

#include <cmath>
#include <stdexcept>

namespace neurohjr {

/// Planar position in meters.
struct Position {
  double x = 0.0;
  double y = 0.0;
};

/// Velocity command in meters/second. Components live in the box [-1, 1].
struct Control {
  double ux = 0.0;
  double uy = 0.0;
};

/// Direction / gradient pair (dimensionless or field units per meter).
struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Axis-aligned workspace rectangle.
struct Bounds {
  Position lo;
  Position hi;

  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }
  bool contains(Position p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
  }
  Position clamp(Position p) const {
    return {std::min(std::max(p.x, lo.x), hi.x),
            std::min(std::max(p.y, lo.y), hi.y)};
  }
};

inline double distance(Position p, Position q) {
  return std::hypot(p.x - q.x, p.y - q.y);
}

inline bool is_finite(Position p) {
  return std::isfinite(p.x) && std::isfinite(p.y);
}

}  // namespace neurohjr
