#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "neurohjr/loss.hpp"

namespace neurohjr {

struct GradCheckLine {
  std::string name;
  double max_rel_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct GradCheckReport {
  std::vector<GradCheckLine> lines;
  bool all_pass() const {
    for (const auto& l : lines) {
      if (!l.pass) return false;
    }
    return true;
  }
  std::string to_string() const;
};

/// Finite-difference validation of the hand-rolled reverse-mode passes.
///
/// Input gradients are compared against central differences (step 1e-4 on
/// normalized inputs, tolerance 1e-6). Parameter gradients of each loss
/// component are checked individually against central differences of the
/// standalone loss evaluations (step 1e-5, tolerance 1e-4) over
/// `coords_per_loss` random parameter coordinates, repeated for `n_seeds`
/// seeds. `corrupt` is a test hook that perturbs one analytic gradient to
/// prove the checker can fail.
GradCheckReport run_gradient_checks(std::uint64_t seed, int batch_size,
                                    int n_seeds = 3, int coords_per_loss = 20,
                                    bool corrupt = false);

}  // namespace neurohjr
