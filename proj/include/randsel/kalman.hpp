#pragma once

#include <vector>

#include "randsel/matrix_core.hpp"
#include "randsel/system_model.hpp"

namespace randsel {

struct CovarianceTrajectory {
  // filtered[t] is P(t), t = 0..horizon.
  std::vector<PsdMatrix> filtered;
  // predicted[t] = A P(t) Aᵀ + Q, the prior that produces filtered[t+1].
  std::vector<PsdMatrix> predicted;
  int horizon = 0;
};

struct SteadyStateResult {
  PsdMatrix p;
  int iterations = 0;
  double residual = 0.0;  // ‖f2(P, Θ) - P‖∞
};

struct DareOptions {
  double tolerance = 1e-11;
  int max_iterations = 100000;
};

CovarianceTrajectory propagate_filtered(const PsdMatrix& p0,
                                        const PsdMatrix& theta,
                                        const LtiSystem& system, int horizon);

// Fixed point of P ↦ f2(P, Θ) by direct iteration from `p0`.
SteadyStateResult steady_state(const PsdMatrix& theta, const LtiSystem& system,
                               const PsdMatrix& p0,
                               const DareOptions& options = {});
SteadyStateResult steady_state(const PsdMatrix& theta, const LtiSystem& system,
                               const DareOptions& options = {});

SteadyStateResult selection_steady_state(const SensorPool& pool,
                                         const Selection& sel,
                                         const LtiSystem& system,
                                         const DareOptions& options = {});

}  // namespace randsel
