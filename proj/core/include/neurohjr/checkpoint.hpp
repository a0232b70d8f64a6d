#pragma once

#include <string>

#include "neurohjr/adam.hpp"
#include "neurohjr/mlp.hpp"

namespace neurohjr {

struct CheckpointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Checkpoint {
  MlpParameters params;
  AdamState adam;
};

/// Binary checkpoint, bitwise round-trip exact.
///
/// Layout (little-endian):
///   magic "NHJR1"
///   u32 layer count, then u32 layer sizes [2, 128, 128, 128, 2, 1]
///   parameters as f64 in tensor order (trunk weights row-major then biases,
///   control head, value head)
///   Adam first moments, then second moments (same order)
///   f64 beta1, beta2, epsilon; u64 step counter
void save_checkpoint(const std::string& path, const Checkpoint& ck);

/// Throws CheckpointError on bad magic, topology mismatch, or truncation.
Checkpoint load_checkpoint(const std::string& path);

}  // namespace neurohjr
