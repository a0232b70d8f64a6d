#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "neurohjr/geometry.hpp"

namespace neurohjr {

// Fixed topology: 2 inputs -> 3 tanh layers of 128 -> tanh control head (2)
//                                                  -> linear value head (1).
inline constexpr int kInputDim = 2;
inline constexpr int kWidth = 128;
inline constexpr int kControlDim = 2;

/// Dense row-major matrix, minimal on purpose: the network topology is fixed
/// and every hot loop is written out explicitly.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}
  double& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
  const double* row(int r) const { return a.data() + static_cast<std::size_t>(r) * cols; }
  double* row(int r) { return a.data() + static_cast<std::size_t>(r) * cols; }
};

/// All weights and biases. Also reused, zero-filled, as the container for
/// parameter gradients and Adam moment accumulators (identical shapes).
struct MlpParameters {
  Matrix w1{kWidth, kInputDim};
  std::vector<double> b1 = std::vector<double>(kWidth, 0.0);
  Matrix w2{kWidth, kWidth};
  std::vector<double> b2 = std::vector<double>(kWidth, 0.0);
  Matrix w3{kWidth, kWidth};
  std::vector<double> b3 = std::vector<double>(kWidth, 0.0);
  Matrix wc{kControlDim, kWidth};
  std::vector<double> bc = std::vector<double>(kControlDim, 0.0);
  Matrix wv{1, kWidth};
  double bv = 0.0;

  /// Visits every tensor as a flat span, in the documented checkpoint order:
  /// trunk layers in order (weights row-major, then biases), control head,
  /// value head.
  template <typename F>
  void for_each_tensor(F&& f) {
    f("w1", w1.a.data(), w1.a.size());
    f("b1", b1.data(), b1.size());
    f("w2", w2.a.data(), w2.a.size());
    f("b2", b2.data(), b2.size());
    f("w3", w3.a.data(), w3.a.size());
    f("b3", b3.data(), b3.size());
    f("wc", wc.a.data(), wc.a.size());
    f("bc", bc.data(), bc.size());
    f("wv", wv.a.data(), wv.a.size());
    f("bv", &bv, 1);
  }
  template <typename F>
  void for_each_tensor(F&& f) const {
    const_cast<MlpParameters*>(this)->for_each_tensor(
        [&](const char* n, double* p, std::size_t s) { f(n, p, s); });
  }

  std::size_t parameter_count() const;
  void fill(double value);
  bool all_finite() const;
};

/// Affine map from workspace coordinates onto [-1, 1]^2. The chain factors
/// convert gradients from normalized space back to per-meter units.
struct InputScaler {
  Bounds bounds;

  Vec2 normalize(Position p) const {
    return {2.0 * (p.x - bounds.lo.x) / bounds.width() - 1.0,
            2.0 * (p.y - bounds.lo.y) / bounds.height() - 1.0};
  }
  Vec2 chain() const { return {2.0 / bounds.width(), 2.0 / bounds.height()}; }
};

/// Per-point activations recorded by the forward pass; the reverse passes
/// consume them.
struct ForwardTrace {
  Vec2 input;  // normalized
  std::array<double, kWidth> a1, a2, a3;
  std::array<double, kControlDim> u;
  double value = 0.0;
};

struct NetOutput {
  Control u;
  double value = 0.0;
};

/// Glorot-uniform weights (+-sqrt(6/(fan_in+fan_out))), zero biases.
/// Deterministic for a given seed.
MlpParameters init_params(std::uint64_t seed);

/// Forward pass on a normalized input. Throws std::invalid_argument on
/// non-finite input.
NetOutput forward(const MlpParameters& params, Vec2 normalized,
                  ForwardTrace* trace = nullptr);

/// Convenience batch evaluation; identical to per-point forward.
std::vector<NetOutput> forward_batch(const MlpParameters& params,
                                     const std::vector<Vec2>& normalized);

/// dV/dn: exact gradient of the value head w.r.t. the normalized inputs,
/// by reverse accumulation through the trunk.
Vec2 input_gradient_normalized(const MlpParameters& params,
                               const ForwardTrace& trace);

/// dV/dp in value-units per meter of raw position (chain factor applied).
Vec2 input_gradient(const MlpParameters& params, const InputScaler& scaler,
                    Position p);

}  // namespace neurohjr
