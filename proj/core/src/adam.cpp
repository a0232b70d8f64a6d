#include "neurohjr/adam.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace neurohjr {

void adam_update(MlpParameters& params, const MlpParameters& grads,
                 AdamState& state, double lr) {
  if (lr < 0.0 || !std::isfinite(lr)) {
    throw std::invalid_argument("adam_update: invalid learning rate");
  }
  state.step += 1;
  const double b1 = state.cfg.beta1;
  const double b2 = state.cfg.beta2;
  const double eps = state.cfg.epsilon;
  const double m_corr = 1.0 - std::pow(b1, static_cast<double>(state.step));
  const double v_corr = 1.0 - std::pow(b2, static_cast<double>(state.step));

  struct Triple {
    double* p;
    double* m;
    double* v;
    const double* g;
    std::size_t n;
  };
  // Walk the tensors of all four bundles in lockstep; the visitor order is
  // identical by construction.
  std::array<Triple, 10> slots;
  std::size_t idx = 0;
  params.for_each_tensor([&](const char*, double* p, std::size_t n) {
    slots[idx].p = p;
    slots[idx].n = n;
    ++idx;
  });
  idx = 0;
  state.m.for_each_tensor([&](const char*, double* p, std::size_t n) {
    if (slots[idx].n != n) throw std::invalid_argument("adam_update: shape mismatch");
    slots[idx++].m = p;
  });
  idx = 0;
  state.v.for_each_tensor([&](const char*, double* p, std::size_t n) {
    if (slots[idx].n != n) throw std::invalid_argument("adam_update: shape mismatch");
    slots[idx++].v = p;
  });
  idx = 0;
  grads.for_each_tensor([&](const char*, const double* p, std::size_t n) {
    if (slots[idx].n != n) throw std::invalid_argument("adam_update: shape mismatch");
    slots[idx++].g = p;
  });

  for (const Triple& t : slots) {
    for (std::size_t k = 0; k < t.n; ++k) {
      const double g = t.g[k];
      t.m[k] = b1 * t.m[k] + (1.0 - b1) * g;
      t.v[k] = b2 * t.v[k] + (1.0 - b2) * g * g;
      const double m_hat = t.m[k] / m_corr;
      const double v_hat = t.v[k] / v_corr;
      t.p[k] -= lr * m_hat / (std::sqrt(v_hat) + eps);
    }
  }
}

}  // namespace neurohjr
