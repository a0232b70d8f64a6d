#include "neurohjr/loss.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "neurohjr/hjb.hpp"

namespace neurohjr {

namespace {

double sign_or_zero(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

/// Forward pass plus the dV/dn reverse chain, keeping every intermediate the
/// parameter backward needs.
struct PointScratch {
  ForwardTrace tr;
  std::array<double, kWidth> q1, q2, q3;      // tanh' per trunk layer
  std::array<double, kWidth> t3, s2, t2, s1, t1;
  Vec2 gn;  // dV/dn
};

void forward_with_input_grad(const MlpParameters& P, Vec2 n, PointScratch& pt) {
  forward(P, n, &pt.tr);
  for (int i = 0; i < kWidth; ++i) {
    pt.q1[i] = 1.0 - pt.tr.a1[i] * pt.tr.a1[i];
    pt.q2[i] = 1.0 - pt.tr.a2[i] * pt.tr.a2[i];
    pt.q3[i] = 1.0 - pt.tr.a3[i] * pt.tr.a3[i];
  }
  const double* wv = P.wv.row(0);
  for (int i = 0; i < kWidth; ++i) pt.t3[i] = pt.q3[i] * wv[i];
  pt.s2.fill(0.0);
  for (int i = 0; i < kWidth; ++i) {
    const double* w = P.w3.row(i);
    const double ti = pt.t3[i];
    for (int j = 0; j < kWidth; ++j) pt.s2[j] += w[j] * ti;
  }
  for (int j = 0; j < kWidth; ++j) pt.t2[j] = pt.q2[j] * pt.s2[j];
  pt.s1.fill(0.0);
  for (int i = 0; i < kWidth; ++i) {
    const double* w = P.w2.row(i);
    const double ti = pt.t2[i];
    for (int j = 0; j < kWidth; ++j) pt.s1[j] += w[j] * ti;
  }
  for (int j = 0; j < kWidth; ++j) pt.t1[j] = pt.q1[j] * pt.s1[j];
  pt.gn = {0.0, 0.0};
  for (int i = 0; i < kWidth; ++i) {
    const double* w = P.w1.row(i);
    pt.gn.x += w[0] * pt.t1[i];
    pt.gn.y += w[1] * pt.t1[i];
  }
}

/// Accumulates one point's contribution to dL/dtheta given the output seeds:
/// v_bar on the value head, u_bar on the control head, g_bar on the raw
/// input gradient. g_bar drives the second-order path through the gradient
/// computation.
void accumulate_point(const MlpParameters& P, Vec2 chain,
                      const PointScratch& pt, double v_bar, Vec2 u_bar,
                      Vec2 g_bar, MlpParameters& G) {
  const bool grad_path = (g_bar.x != 0.0) || (g_bar.y != 0.0);
  std::array<double, kWidth> q1b{}, q2b{}, q3b{};
  const double* wv = P.wv.row(0);
  double* gwv = G.wv.row(0);

  if (grad_path) {
    const double gnb_x = chain.x * g_bar.x;
    const double gnb_y = chain.y * g_bar.y;
    // gn = W1^T t1
    std::array<double, kWidth> t1b;
    for (int i = 0; i < kWidth; ++i) {
      const double* w = P.w1.row(i);
      t1b[i] = w[0] * gnb_x + w[1] * gnb_y;
      double* gw = G.w1.row(i);
      gw[0] += gnb_x * pt.t1[i];
      gw[1] += gnb_y * pt.t1[i];
    }
    // t1 = q1 .* s1
    std::array<double, kWidth> s1b;
    for (int j = 0; j < kWidth; ++j) {
      q1b[j] = pt.s1[j] * t1b[j];
      s1b[j] = pt.q1[j] * t1b[j];
    }
    // s1 = W2^T t2
    std::array<double, kWidth> t2b;
    for (int i = 0; i < kWidth; ++i) {
      const double* w = P.w2.row(i);
      double* gw = G.w2.row(i);
      const double t2i = pt.t2[i];
      double acc = 0.0;
      for (int j = 0; j < kWidth; ++j) {
        acc += w[j] * s1b[j];
        gw[j] += s1b[j] * t2i;
      }
      t2b[i] = acc;
    }
    // t2 = q2 .* s2
    std::array<double, kWidth> s2b;
    for (int j = 0; j < kWidth; ++j) {
      q2b[j] = pt.s2[j] * t2b[j];
      s2b[j] = pt.q2[j] * t2b[j];
    }
    // s2 = W3^T t3
    std::array<double, kWidth> t3b;
    for (int i = 0; i < kWidth; ++i) {
      const double* w = P.w3.row(i);
      double* gw = G.w3.row(i);
      const double t3i = pt.t3[i];
      double acc = 0.0;
      for (int j = 0; j < kWidth; ++j) {
        acc += w[j] * s2b[j];
        gw[j] += s2b[j] * t3i;
      }
      t3b[i] = acc;
    }
    // t3 = q3 .* wv
    for (int i = 0; i < kWidth; ++i) {
      q3b[i] = wv[i] * t3b[i];
      gwv[i] += pt.q3[i] * t3b[i];
    }
  }

  // Value head: V = wv . a3 + bv
  std::array<double, kWidth> a3b;
  for (int i = 0; i < kWidth; ++i) {
    gwv[i] += v_bar * pt.tr.a3[i];
    a3b[i] = v_bar * wv[i];
  }
  G.bv += v_bar;

  // Control head: u = tanh(Wc a3 + bc)
  for (int k = 0; k < kControlDim; ++k) {
    const double ub = (k == 0) ? u_bar.x : u_bar.y;
    const double zcb = (1.0 - pt.tr.u[k] * pt.tr.u[k]) * ub;
    if (zcb != 0.0) {
      const double* w = P.wc.row(k);
      double* gw = G.wc.row(k);
      for (int i = 0; i < kWidth; ++i) {
        gw[i] += zcb * pt.tr.a3[i];
        a3b[i] += w[i] * zcb;
      }
      G.bc[k] += zcb;
    }
  }

  // Trunk, with the q-adjoint injections from the gradient pass.
  std::array<double, kWidth> zb, a2b{}, a1b{};
  for (int i = 0; i < kWidth; ++i) {
    a3b[i] += -2.0 * pt.tr.a3[i] * q3b[i];
    zb[i] = pt.q3[i] * a3b[i];
  }
  for (int i = 0; i < kWidth; ++i) {
    const double* w = P.w3.row(i);
    double* gw = G.w3.row(i);
    const double z = zb[i];
    G.b3[i] += z;
    for (int j = 0; j < kWidth; ++j) {
      gw[j] += z * pt.tr.a2[j];
      a2b[j] += w[j] * z;
    }
  }
  for (int i = 0; i < kWidth; ++i) {
    a2b[i] += -2.0 * pt.tr.a2[i] * q2b[i];
    zb[i] = pt.q2[i] * a2b[i];
  }
  for (int i = 0; i < kWidth; ++i) {
    const double* w = P.w2.row(i);
    double* gw = G.w2.row(i);
    const double z = zb[i];
    G.b2[i] += z;
    for (int j = 0; j < kWidth; ++j) {
      gw[j] += z * pt.tr.a1[j];
      a1b[j] += w[j] * z;
    }
  }
  for (int i = 0; i < kWidth; ++i) {
    a1b[i] += -2.0 * pt.tr.a1[i] * q1b[i];
    const double z = pt.q1[i] * a1b[i];
    G.b1[i] += z;
    double* gw = G.w1.row(i);
    gw[0] += z * pt.tr.input.x;
    gw[1] += z * pt.tr.input.y;
  }
}

void add_bundle(MlpParameters& dst, const MlpParameters& src) {
  auto it = [&](double* d, const double* s, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) d[k] += s[k];
  };
  it(dst.w1.a.data(), src.w1.a.data(), dst.w1.a.size());
  it(dst.b1.data(), src.b1.data(), dst.b1.size());
  it(dst.w2.a.data(), src.w2.a.data(), dst.w2.a.size());
  it(dst.b2.data(), src.b2.data(), dst.b2.size());
  it(dst.w3.a.data(), src.w3.a.data(), dst.w3.a.size());
  it(dst.b3.data(), src.b3.data(), dst.b3.size());
  it(dst.wc.a.data(), src.wc.a.data(), dst.wc.a.size());
  it(dst.bc.data(), src.bc.data(), dst.bc.size());
  it(dst.wv.a.data(), src.wv.a.data(), dst.wv.a.size());
  dst.bv += src.bv;
}

}  // namespace

double loss_pde(const MlpParameters& params, const InputScaler& scaler,
                std::span<const Position> points, ResidualMode mode) {
  if (points.empty()) throw std::invalid_argument("loss_pde: empty batch");
  const Vec2 chain = scaler.chain();
  double sum = 0.0;
  for (const Position& p : points) {
    PointScratch pt;
    forward_with_input_grad(params, scaler.normalize(p), pt);
    const Vec2 g{pt.gn.x * chain.x, pt.gn.y * chain.y};
    double r;
    if (mode == ResidualMode::kPredictedControl) {
      r = pde_residual(g, {pt.tr.u[0], pt.tr.u[1]});
    } else {
      r = hamiltonian(g.x, g.y);
    }
    sum += r * r;
  }
  return sum / static_cast<double>(points.size());
}

double loss_value(const MlpParameters& params, const InputScaler& scaler,
                  std::span<const Position> points,
                  std::span<const double> targets) {
  if (points.size() != targets.size()) {
    throw std::invalid_argument("loss_value: point/target count mismatch");
  }
  if (points.empty()) throw std::invalid_argument("loss_value: empty batch");
  double sum = 0.0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const NetOutput out = forward(params, scaler.normalize(points[k]));
    const double e = out.value - targets[k];
    sum += e * e;
  }
  return sum / static_cast<double>(points.size());
}

double loss_obstacle(std::span<const Position> points, const Environment& env) {
  if (points.empty()) throw std::invalid_argument("loss_obstacle: empty batch");
  if (env.obstacles().empty()) return 0.0;
  double sum = 0.0;
  for (const Position& p : points) {
    const auto near = nearest_obstacle(p, env);
    sum += obstacle_penalty(near->center_distance, near->obstacle.radius +
                                                       env.safety_margin());
  }
  return sum / static_cast<double>(points.size());
}

double loss_goal(const MlpParameters& params, const InputScaler& scaler,
                 std::span<const Position> points, const Environment& env) {
  if (points.empty()) throw std::invalid_argument("loss_goal: empty batch");
  double sum = 0.0;
  for (const Position& p : points) {
    const Vec2 dir = goal_unit_vector(p, env);
    const NetOutput out = forward(params, scaler.normalize(p));
    sum += goal_alignment(out.u, dir);
  }
  return -sum / static_cast<double>(points.size());
}

LossGradients loss_param_gradients(const MlpParameters& params,
                                   const InputScaler& scaler,
                                   const Environment& env,
                                   std::span<const Position> points,
                                   std::span<const double> targets,
                                   LossWeights weights, ResidualMode mode) {
  if (points.empty()) {
    throw std::invalid_argument("loss_param_gradients: empty batch");
  }
  if (targets.size() != points.size()) {
    throw std::invalid_argument("loss_param_gradients: target count mismatch");
  }
  const int n = static_cast<int>(points.size());
  const double inv_n = 1.0 / n;
  const Vec2 chain = scaler.chain();
  const bool has_obstacles = !env.obstacles().empty();

  constexpr int kBlock = 64;
  const int n_blocks = (n + kBlock - 1) / kBlock;
  std::vector<MlpParameters> block_grads(n_blocks);
  struct Sums {
    double pde = 0.0, value = 0.0, obstacle = 0.0, goal = 0.0;
  };
  std::vector<Sums> block_sums(n_blocks);

#pragma omp parallel for schedule(static)
  for (int b = 0; b < n_blocks; ++b) {
    MlpParameters& G = block_grads[b];
    Sums& S = block_sums[b];
    PointScratch pt;
    const int lo = b * kBlock;
    const int hi = std::min(n, lo + kBlock);
    for (int k = lo; k < hi; ++k) {
      const Position& p = points[k];
      forward_with_input_grad(params, scaler.normalize(p), pt);
      const Vec2 g{pt.gn.x * chain.x, pt.gn.y * chain.y};
      const Control u{pt.tr.u[0], pt.tr.u[1]};

      double r;
      Vec2 g_bar{0.0, 0.0};
      Vec2 u_bar{0.0, 0.0};
      if (mode == ResidualMode::kPredictedControl) {
        r = pde_residual(g, u);
        const double rb = weights.pde * 2.0 * r * inv_n;
        g_bar = {rb * u.ux, rb * u.uy};
        u_bar = {rb * g.x, rb * g.y};
      } else {
        r = hamiltonian(g.x, g.y);
        const double rb = weights.pde * 2.0 * r * inv_n;
        g_bar = {-rb * sign_or_zero(g.x), -rb * sign_or_zero(g.y)};
      }
      S.pde += r * r;

      const double err = pt.tr.value - targets[k];
      S.value += err * err;
      const double v_bar = weights.value * 2.0 * err * inv_n;

      if (has_obstacles) {
        const auto near = nearest_obstacle(p, env);
        S.obstacle += obstacle_penalty(
            near->center_distance, near->obstacle.radius + env.safety_margin());
      }

      // Goal term is evaluated only when weighted, so zero-weight runs never
      // trip the degenerate-point check.
      if (weights.goal != 0.0) {
        const Vec2 dir = goal_unit_vector(p, env);
        S.goal += -goal_alignment(u, dir);
        u_bar.x += weights.goal * (-dir.x) * inv_n;
        u_bar.y += weights.goal * (-dir.y) * inv_n;
      }

      accumulate_point(params, chain, pt, v_bar, u_bar, g_bar, G);
    }
  }

  LossGradients out;
  for (int b = 0; b < n_blocks; ++b) add_bundle(out.grads, block_grads[b]);

  double pde = 0.0, value = 0.0, obstacle = 0.0, goal = 0.0;
  for (const Sums& s : block_sums) {
    pde += s.pde;
    value += s.value;
    obstacle += s.obstacle;
    goal += s.goal;
  }
  out.losses.pde = pde * inv_n;
  out.losses.value = value * inv_n;
  out.losses.obstacle = obstacle * inv_n;
  out.losses.goal = goal * inv_n;
  out.losses.total = weights.pde * out.losses.pde +
                     weights.value * out.losses.value +
                     weights.obstacle * out.losses.obstacle +
                     weights.goal * out.losses.goal;
  if (!std::isfinite(out.losses.total) || !out.grads.all_finite()) {
    throw DivergenceError("loss_param_gradients: non-finite loss or gradient");
  }
  return out;
}

}  // namespace neurohjr
