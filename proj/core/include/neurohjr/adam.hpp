#pragma once

#include <cstdint>

#include "neurohjr/mlp.hpp"

namespace neurohjr {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// First/second moment accumulators (parameter-shaped) plus the step counter.
struct AdamState {
  MlpParameters m;
  MlpParameters v;
  std::uint64_t step = 0;
  AdamConfig cfg;
};

/// One Adam step with bias correction. Shapes are fixed by the topology;
/// lr must be positive (lr = 0 is allowed and leaves parameters unchanged
/// while still decaying the moments).
void adam_update(MlpParameters& params, const MlpParameters& grads,
                 AdamState& state, double lr);

}  // namespace neurohjr
