#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "neurohjr/adam.hpp"
#include "neurohjr/collocation.hpp"
#include "neurohjr/loss.hpp"

namespace neurohjr {

struct TrainConfig {
  int epochs = 10000;
  double learning_rate = 1e-3;
  int minibatch = 1024;
  LossWeights weights;
  std::uint64_t seed = 0;
  ResidualMode residual_mode = ResidualMode::kPredictedControl;
  int interior_count = 8000;
  int boundary_count = 5000;
  double boundary_band = 1.0;
  bool resample_each_epoch = false;

  void validate() const;
};

struct TrainResult {
  MlpParameters params;
  AdamState adam;
  std::vector<LossBreakdown> history;  // one entry per epoch
};

/// Full training run: collocation sets are sampled once up front (or
/// re-sampled per epoch when configured), oracle targets interpolated from
/// the composite field, then `epochs` passes of seeded-shuffle minibatch
/// Adam. Bit-reproducible for a given seed, independent of thread count.
/// DivergenceError is rethrown with the offending epoch in the message.
TrainResult train(const Environment& env, const ValueField& composite,
                  const TrainConfig& cfg);

/// CSV with header epoch,pde,value,obstacle,goal,total.
void write_loss_history_csv(const std::string& path,
                            const std::vector<LossBreakdown>& history);

}  // namespace neurohjr
