#pragma once

#include <cstdint>
#include <vector>

#include "randsel/kalman.hpp"
#include "randsel/system_model.hpp"

namespace randsel {

struct GreedyConfig {
  double gamma = 1.0;        // fraction of the pool scored each round
  int n_s = 1;
  std::uint64_t seed = 0;    // used only when gamma < 1
  int workers = 0;
};

struct GreedyResult {
  Selection selection{{}, SelectionKind::kHomogeneous};
  // λ̄ of the steady-state covariance after each round.
  std::vector<double> lambda_bar;
};

// Appends, round by round, the candidate minimizing λ̄ of the steady-state
// covariance. Ties go to the lowest index; undetectable augmentations score
// +∞. Rounds sample ⌈γ n_c⌉ candidates without replacement; the overall
// selection is with replacement.
GreedyResult greedy_select(const GreedyConfig& config, const SensorPool& pool,
                           const LtiSystem& system, const DareOptions& options = {});

}  // namespace randsel
