#include "randsel/greedy.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "randsel/errors.hpp"
#include "randsel/parallel.hpp"
#include "randsel/sampling.hpp"

namespace randsel {

GreedyResult greedy_select(const GreedyConfig& config, const SensorPool& pool,
                           const LtiSystem& system, const DareOptions& options) {
  if (!(config.gamma > 0.0 && config.gamma <= 1.0)) {
    throw DomainError("gamma must lie in (0, 1]");
  }
  if (config.n_s < 1) throw DomainError("n_s must be positive");
  const int n = pool.size();
  const int m = system.state_dim();
  const int subset = std::min(n, static_cast<int>(std::ceil(config.gamma * n - 1e-12)));
  constexpr double kInf = std::numeric_limits<double>::infinity();

  RngStream rng(config.seed);
  std::vector<int> chosen;
  std::vector<double> trace;
  Eigen::MatrixXd info = Eigen::MatrixXd::Zero(m, m);
  Eigen::MatrixXd c_rows(0, m);
  PsdMatrix warm = PsdMatrix::Trusted(SymmetricMatrix::Identity(m));
  bool detectable = false;
  std::vector<int> order(n);

  for (int round = 0; round < config.n_s; ++round) {
    std::iota(order.begin(), order.end(), 0);
    if (subset < n) {
      // Partial Fisher-Yates: the first `subset` entries are a uniform sample.
      for (int i = 0; i < subset; ++i) {
        const int j = i + static_cast<int>(rng.next_below(n - i));
        std::swap(order[i], order[j]);
      }
    }
    std::vector<double> score(subset, kInf);
    std::vector<std::optional<PsdMatrix>> fixed(subset);
    parallel_for(
        subset,
        [&](int s) {
          const int g = order[s];
          if (!detectable) {
            Eigen::MatrixXd c(c_rows.rows() + 1, m);
            c << c_rows, pool.sensor(g).c.transpose();
            if (!pbh_detectable(system.a(), c)) return;
          }
          const PsdMatrix theta = PsdMatrix::Trusted(
              SymmetricMatrix(info + pool.information(g).matrix()));
          try {
            const SteadyStateResult r = steady_state(theta, system, warm, options);
            score[s] = max_eigenvalue(r.p);
            fixed[s] = r.p;
          } catch (const ConvergenceError&) {
          }
        },
        config.workers);
    int best = -1;
    for (int s = 0; s < subset; ++s) {
      if (score[s] == kInf) continue;
      if (best < 0 || score[s] < score[best] ||
          (score[s] == score[best] && order[s] < order[best])) {
        best = s;
      }
    }
    if (best < 0) {
      if (round == 0) {
        throw DetectabilityError("no candidate yields a detectable pair in round 1");
      }
      throw DetectabilityError("greedy round " + std::to_string(round + 1) +
                               " found no detectable augmentation");
    }
    const int g = order[best];
    chosen.push_back(g);
    trace.push_back(score[best]);
    info += pool.information(g).matrix();
    c_rows.conservativeResize(c_rows.rows() + 1, Eigen::NoChange);
    c_rows.row(c_rows.rows() - 1) = pool.sensor(g).c.transpose();
    detectable = true;  // the chosen augmentation passed the PBH test
    warm = *fixed[best];
  }
  return GreedyResult{Selection(std::move(chosen), SelectionKind::kHomogeneous),
                      std::move(trace)};
}

}  // namespace randsel
