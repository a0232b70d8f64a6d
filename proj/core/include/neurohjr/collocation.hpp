#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "neurohjr/environment.hpp"
#include "neurohjr/grid.hpp"

namespace neurohjr {

struct SamplingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Training points: interior samples from the safe region plus samples
/// concentrated in a band around the obstacle boundaries.
struct CollocationSet {
  std::vector<Position> interior;
  std::vector<Position> boundary;
};

/// Uniform rejection sampling over the workspace, discarding points inside
/// any inflated obstacle disk. Deterministic per seed. Throws SamplingError
/// after 1000 * count rejected draws.
std::vector<Position> sample_interior(const Environment& env, int count,
                                      std::uint64_t seed);

/// Points uniform over the annulus R_d <= r <= R_d + band_width around a
/// uniformly chosen obstacle; draws landing inside another obstacle's unsafe
/// disk or outside the workspace are redrawn. Throws when the environment
/// has no obstacles and count > 0.
std::vector<Position> sample_boundary(const Environment& env, int count,
                                      std::uint64_t seed,
                                      double band_width = 1.0);

/// Oracle values for the points, interpolated from the composite field.
std::vector<double> oracle_targets(std::span<const Position> points,
                                   const ValueField& composite);

}  // namespace neurohjr
