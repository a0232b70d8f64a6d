#pragma once

#include <span>
#include <stdexcept>

#include "neurohjr/environment.hpp"
#include "neurohjr/mlp.hpp"

namespace neurohjr {

/// Signals a non-finite loss or gradient (training blow-up).
struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Which residual enters the PDE loss: the network's predicted control
/// (the default formulation) or the closed-form box minimizer
/// -(|dV/dPx| + |dV/dPy|), which removes the u = 0 trivial zero.
enum class ResidualMode { kPredictedControl, kAnalyticHamiltonian };

struct LossWeights {
  double pde = 1.0;
  double value = 1.0;
  double obstacle = 1.0;
  double goal = 1.0;
};

/// Unweighted component means; total is the weighted sum.
struct LossBreakdown {
  double pde = 0.0;
  double value = 0.0;
  double obstacle = 0.0;
  double goal = 0.0;
  double total = 0.0;
};

// Exact-unit cores (shared by the batched losses and their tests).
inline double pde_residual(Vec2 grad, Control u) {
  return grad.x * u.ux + grad.y * u.uy;
}
inline double obstacle_penalty(double center_distance, double unsafe_radius) {
  const double gap = unsafe_radius - center_distance;
  return gap > 0.0 ? gap * gap : 0.0;
}
inline double goal_alignment(Control u, Vec2 goal_dir) {
  return u.ux * goal_dir.x + u.uy * goal_dir.y;
}

/// Mean squared HJB residual over the points.
double loss_pde(const MlpParameters& params, const InputScaler& scaler,
                std::span<const Position> points, ResidualMode mode);

/// Mean squared error between the value head and the oracle targets.
double loss_value(const MlpParameters& params, const InputScaler& scaler,
                  std::span<const Position> points,
                  std::span<const double> targets);

/// Mean hinge penalty max(0, R_d - d)^2 against the nearest obstacle center.
/// Depends on the points only, not on the network.
double loss_obstacle(std::span<const Position> points, const Environment& env);

/// Negative mean alignment of the predicted control with the goal direction.
double loss_goal(const MlpParameters& params, const InputScaler& scaler,
                 std::span<const Position> points, const Environment& env);

struct LossGradients {
  MlpParameters grads;  // dL_total/dtheta
  LossBreakdown losses;
};

/// Gradients of the weighted total loss with respect to every parameter.
///
/// The value and goal terms use standard reverse-mode through the heads. The
/// PDE term depends on dV/dP, so its parameter gradient backpropagates
/// through the input-gradient computation itself (the gradient pass is part
/// of the differentiated graph). The obstacle term is control-independent
/// and contributes no gradient.
///
/// Points are processed in fixed-size blocks whose partial sums are reduced
/// in block order, so results are bit-identical for any thread count.
LossGradients loss_param_gradients(const MlpParameters& params,
                                   const InputScaler& scaler,
                                   const Environment& env,
                                   std::span<const Position> points,
                                   std::span<const double> targets,
                                   LossWeights weights, ResidualMode mode);

}  // namespace neurohjr
