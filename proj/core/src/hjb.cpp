#include "neurohjr/hjb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace neurohjr {

ValueField init_forward(const Environment& env, const Grid2D& grid) {
  if (!grid.contains(env.start())) {
    throw std::invalid_argument("init_forward: grid does not cover the start");
  }
  ValueField v(grid, 0.0);
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      v.at(i, j) = distance(grid.node(i, j), env.start());
    }
  }
  return v;
}

ValueField init_backward(const Environment& env, const Grid2D& grid) {
  ValueField v(grid, 0.0);
  const auto& obstacles = env.obstacles();
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const Position p = grid.node(i, j);
      double sd = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < obstacles.size(); ++k) {
        sd = std::min(sd, distance(p, obstacles[k].center) - env.unsafe_radius(k));
      }
      v.at(i, j) = std::isfinite(sd) ? sd : 0.0;
    }
  }
  return v;
}

ValueField lax_friedrichs_step(const ValueField& v, double dt,
                               Dissipation alpha) {
  const Grid2D& g = v.grid();
  const double h = g.spacing;
  if (dt < 0.0 || !std::isfinite(dt)) {
    throw std::invalid_argument("lax_friedrichs_step: invalid dt");
  }
  if (dt > h / (alpha.ax + alpha.ay) * (1.0 + 1e-12)) {
    throw CflError("lax_friedrichs_step: dt violates the CFL bound h/(ax+ay)");
  }
  ValueField out(g, v.time_label() + dt);
  const int nx = g.nx;
  const int ny = g.ny;
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double c = v.at(i, j);
      // One-sided differences at the boundary: the missing side copies the
      // available one, so the average is one-sided and the dissipation term
      // vanishes along that axis.
      double dxm, dxp;
      if (i == 0) {
        dxm = dxp = (v.at(i + 1, j) - c) / h;
      } else if (i == nx - 1) {
        dxm = dxp = (c - v.at(i - 1, j)) / h;
      } else {
        dxm = (c - v.at(i - 1, j)) / h;
        dxp = (v.at(i + 1, j) - c) / h;
      }
      double dym, dyp;
      if (j == 0) {
        dym = dyp = (v.at(i, j + 1) - c) / h;
      } else if (j == ny - 1) {
        dym = dyp = (c - v.at(i, j - 1)) / h;
      } else {
        dym = (c - v.at(i, j - 1)) / h;
        dyp = (v.at(i, j + 1) - c) / h;
      }
      const double numerical_h = hamiltonian(0.5 * (dxp + dxm),
                                             0.5 * (dyp + dym)) -
                                 alpha.ax * 0.5 * (dxp - dxm) -
                                 alpha.ay * 0.5 * (dyp - dym);
      out.at(i, j) = c - dt * numerical_h;
    }
  }
  return out;
}

ValueField solve(const ValueField& v0, double horizon, double dt,
                 Dissipation alpha) {
  if (horizon < 0.0 || !std::isfinite(horizon)) {
    throw std::invalid_argument("solve: invalid horizon");
  }
  const int steps =
      (horizon == 0.0) ? 0
                       : static_cast<int>(std::ceil(horizon / dt - 1e-12));
  // March the negated field: stepping -V with the literal scheme is the
  // standard Lax-Friedrichs march of V_t + |grad V|_1 = 0, under which
  // zero-sublevel sets grow monotonically with horizon.
  ValueField u(v0.grid(), 0.0);
  const std::size_t n = u.values().size();
  for (std::size_t k = 0; k < n; ++k) u.values()[k] = -v0.values()[k];
  for (int s = 0; s < steps; ++s) {
    u = lax_friedrichs_step(u, dt, alpha);
  }
  ValueField out(v0.grid(), horizon);
  for (std::size_t k = 0; k < n; ++k) out.values()[k] = -u.values()[k];
  return out;
}

ValueField composite_value(const ValueField& vf, const ValueField& vb) {
  if (!vf.grid().same_layout(vb.grid())) {
    throw std::invalid_argument("composite_value: grid mismatch");
  }
  ValueField out(vf.grid(), std::max(vf.time_label(), vb.time_label()));
  const std::size_t n = out.values().size();
  for (std::size_t k = 0; k < n; ++k) {
    out.values()[k] = std::max(vf.values()[k], -vb.values()[k]);
  }
  return out;
}

Control classical_control(const ValueField& v, Position p) {
  const Grid2D& g = v.grid();
  if (!g.contains(p)) {
    throw std::out_of_range("classical_control: position outside grid");
  }
  const double h = g.spacing;
  auto clamp_x = [&](double x) {
    return std::min(std::max(x, g.origin.x), g.max_x());
  };
  auto clamp_y = [&](double y) {
    return std::min(std::max(y, g.origin.y), g.max_y());
  };
  const double xp = clamp_x(p.x + h), xm = clamp_x(p.x - h);
  const double yp = clamp_y(p.y + h), ym = clamp_y(p.y - h);
  const double gx =
      (sample_value(v, {xp, p.y}) - sample_value(v, {xm, p.y})) / (xp - xm);
  const double gy =
      (sample_value(v, {p.x, yp}) - sample_value(v, {p.x, ym})) / (yp - ym);
  constexpr double kDeadBand = 1e-9;
  Control u;
  u.ux = (std::abs(gx) < kDeadBand) ? 0.0 : (gx > 0.0 ? -1.0 : 1.0);
  u.uy = (std::abs(gy) < kDeadBand) ? 0.0 : (gy > 0.0 ? -1.0 : 1.0);
  return u;
}

}  // namespace neurohjr
