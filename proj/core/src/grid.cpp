#include "neurohjr/grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "neurohjr/manifest.hpp"

namespace neurohjr {

Grid2D Grid2D::covering(const Bounds& bounds, double spacing) {
  if (!(spacing > 0.0)) {
    throw std::invalid_argument("grid: spacing must be > 0");
  }
  auto count = [spacing](double extent) {
    // Exact multiples (within rounding slack) keep the node on the far edge.
    const double cells = extent / spacing;
    int n = static_cast<int>(std::ceil(cells - 1e-9)) + 1;
    return n < 3 ? 3 : n;
  };
  Grid2D g;
  g.origin = bounds.lo;
  g.spacing = spacing;
  g.nx = count(bounds.width());
  g.ny = count(bounds.height());
  return g;
}

double sample_value(const ValueField& v, Position p) {
  const Grid2D& g = v.grid();
  if (!g.contains(p)) {
    throw std::out_of_range("sample_value: position outside grid extent");
  }
  double fx = (p.x - g.origin.x) / g.spacing;
  double fy = (p.y - g.origin.y) / g.spacing;
  int i = static_cast<int>(fx);
  int j = static_cast<int>(fy);
  if (i > g.nx - 2) i = g.nx - 2;
  if (j > g.ny - 2) j = g.ny - 2;
  const double tx = fx - i;
  const double ty = fy - j;
  const double v00 = v.at(i, j);
  const double v10 = v.at(i + 1, j);
  const double v01 = v.at(i, j + 1);
  const double v11 = v.at(i + 1, j + 1);
  return (1.0 - tx) * (1.0 - ty) * v00 + tx * (1.0 - ty) * v10 +
         (1.0 - tx) * ty * v01 + tx * ty * v11;
}

namespace {
std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}
}  // namespace

void save_value_field(const ValueField& v, const std::string& path) {
  const Grid2D& g = v.grid();
  std::ostringstream out;
  out << g.nx << ' ' << g.ny << '\n';
  out << fmt_double(g.origin.x) << ' ' << fmt_double(g.origin.y) << '\n';
  out << fmt_double(g.spacing) << '\n';
  out << fmt_double(v.time_label()) << '\n';
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (i) out << ' ';
      out << fmt_double(v.at(i, j));
    }
    out << '\n';
  }
  write_file_atomic(path, out.str());
}

ValueField load_value_field(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("value field: cannot open " + path);
  }
  Grid2D g;
  double time_label = 0.0;
  if (!(in >> g.nx >> g.ny >> g.origin.x >> g.origin.y >> g.spacing >>
        time_label)) {
    throw std::runtime_error("value field: malformed header in " + path);
  }
  if (g.nx < 3 || g.ny < 3 || !(g.spacing > 0.0)) {
    throw std::runtime_error("value field: invalid dimensions in " + path);
  }
  ValueField v(g, time_label);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (!(in >> v.at(i, j))) {
        throw std::runtime_error("value field: truncated data in " + path);
      }
    }
  }
  return v;
}

}  // namespace neurohjr
