#pragma once

#include "neurohjr/environment.hpp"
#include "neurohjr/grid.hpp"

namespace neurohjr {

/// Thrown when the explicit scheme's timestep bound is violated.
struct CflError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// min over the control box [-1,1]^2 of grad . u, in closed form.
inline double hamiltonian(double gx, double gy) {
  return -(std::abs(gx) + std::abs(gy));
}

/// Per-axis Lax-Friedrichs dissipation coefficients. The Hamiltonian's
/// Lipschitz constant is 1 per axis, so (1, 1) is the default.
struct Dissipation {
  double ax = 1.0;
  double ay = 1.0;
};

/// Distance from every node to the initial point set {start}.
ValueField init_forward(const Environment& env, const Grid2D& grid);

/// Signed distance from every node to the union of inflated obstacle disks
/// (radius R + delta); negative inside.
ValueField init_backward(const Environment& env, const Grid2D& grid);

/// One explicit step of V_t + H(grad V) = 0:
///   V <- V - dt * [ H((D+x+D-x)/2, (D+y+D-y)/2)
///                   - ax*(D+x-D-x)/2 - ay*(D+y-D-y)/2 ]
/// with one-sided differences at boundary nodes. Throws CflError when
/// dt > h / (ax + ay).
ValueField lax_friedrichs_step(const ValueField& v, double dt,
                               Dissipation alpha = {});

/// Marches ceil(horizon/dt) Lax-Friedrichs steps and fixes the sign
/// convention so the zero-sublevel set grows monotonically with horizon:
/// the negated field is stepped and negated back, which is the standard
/// march of V_t + |grad V|_1 = 0. time_label of the result is `horizon`.
ValueField solve(const ValueField& v0, double horizon, double dt,
                 Dissipation alpha = {});

/// Nodewise max(vf, -vb). Throws std::invalid_argument on grid mismatch.
ValueField composite_value(const ValueField& vf, const ValueField& vb);

/// Bang-bang descent of the value field: u_i = -sign(dV/dx_i) from a
/// central-difference gradient built from interpolated samples at p +- h per
/// axis (probes clamped to the grid extent near edges, with the difference
/// normalized by the actual probe separation). Components whose gradient
/// magnitude is below 1e-9 command zero.
Control classical_control(const ValueField& v, Position p);

}  // namespace neurohjr
