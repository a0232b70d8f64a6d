#pragma once

#include <string>
#include <vector>

#include "neurohjr/geometry.hpp"

namespace neurohjr {

/// Uniform 2D node grid. Node (i, j) sits at origin + (i*h, j*h).
struct Grid2D {
  Position origin;
  double spacing = 1.0;
  int nx = 0;
  int ny = 0;

  /// Smallest grid with this spacing whose node extent covers the bounds.
  static Grid2D covering(const Bounds& bounds, double spacing);

  double x(int i) const { return origin.x + spacing * i; }
  double y(int j) const { return origin.y + spacing * j; }
  Position node(int i, int j) const { return {x(i), y(j)}; }
  int index(int i, int j) const { return i + nx * j; }
  int size() const { return nx * ny; }
  double max_x() const { return x(nx - 1); }
  double max_y() const { return y(ny - 1); }
  bool contains(Position p) const {
    return p.x >= origin.x && p.x <= max_x() && p.y >= origin.y &&
           p.y <= max_y();
  }
  bool same_layout(const Grid2D& o) const {
    return nx == o.nx && ny == o.ny && spacing == o.spacing &&
           origin.x == o.origin.x && origin.y == o.origin.y;
  }
};

/// Scalar function sampled on a Grid2D, tagged with the solve horizon.
class ValueField {
 public:
  ValueField(Grid2D grid, double time_label = 0.0)
      : grid_(grid), time_label_(time_label),
        values_(static_cast<std::size_t>(grid.size()), 0.0) {}

  const Grid2D& grid() const { return grid_; }
  double time_label() const { return time_label_; }
  void set_time_label(double t) { time_label_ = t; }

  double at(int i, int j) const { return values_[grid_.index(i, j)]; }
  double& at(int i, int j) { return values_[grid_.index(i, j)]; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

 private:
  Grid2D grid_;
  double time_label_;
  std::vector<double> values_;
};

/// Bilinear interpolation; exact at nodes. Throws std::out_of_range when p
/// falls outside the node extent.
double sample_value(const ValueField& v, Position p);

/// Plain-text matrix export: header (nx ny / origin / spacing / time_label),
/// then ny rows of nx values. Doubles are printed with %.17g so a round-trip
/// reproduces them exactly.
void save_value_field(const ValueField& v, const std::string& path);
ValueField load_value_field(const std::string& path);

}  // namespace neurohjr
