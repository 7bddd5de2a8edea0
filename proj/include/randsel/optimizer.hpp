#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "randsel/concentration.hpp"
#include "randsel/matrix_core.hpp"
#include "randsel/system_model.hpp"

namespace randsel {

struct ProgramSolution {
  Eigen::VectorXd p;
  // λ̲ of the program's matrix at the returned p.
  double lambda_star = 0.0;
  std::string status;
  int iterations = 0;
  // The relaxation's slack matrix X (steady-state program only).
  Eigen::MatrixXd x;
  std::vector<std::string> warnings;
};

// maximize λ̲((A P Aᵀ + Q)⁻¹ + (1-ε)n_s E[Z](p)) subject to Z_j ⪯ ρE[Z](p).
// `prior` is the filtered covariance one step before the bound applies.
ProgramSolution solve_time_dependent(const PsdMatrix& prior, double epsilon, double rho,
                                     int n_s, const SensorPool& pool,
                                     const LtiSystem& system,
                                     const std::optional<RhoStarResult>& joint = std::nullopt);

// Steady-state relaxation: maximize λ subject to X ⪰ λI,
//   [-X + Q⁻¹ + Π   Q⁻¹A; AᵀQ⁻¹   X + AᵀQ⁻¹A] ⪰ 0,  Π = (1-ε)n_s E[Z](p),
// and the domination constraints.
ProgramSolution solve_steady_state_relaxation(
    double epsilon, double rho, int n_s, const SensorPool& pool, const LtiSystem& system,
    const std::optional<RhoStarResult>& joint = std::nullopt);

enum class GridMode { kTimeDependent, kSteadyState };

struct GridOptions {
  GridMode mode = GridMode::kSteadyState;
  std::optional<PsdMatrix> prior;   // required in time-dependent mode
  std::optional<RhoStarResult> joint;
  int workers = 0;
};

struct GridPoint {
  double epsilon = 0.0;
  double rho = 0.0;
  Eigen::VectorXd p;
  double lambda_star = 0.0;
  double lambda_bar_upper = 0.0;  // λ̄ of the certified upper bound
  double lambda_bar_lower = 0.0;
  double solve_time_ms = 0.0;
  std::string status;
  bool feasible = false;
};

struct GridSearchResult {
  std::vector<GridPoint> points;
  int chosen = -1;
  double c0 = 0.0;
  double rho_star = 0.0;
  GridMode mode = GridMode::kSteadyState;
  std::optional<AwParameters> params;    // at the chosen point
  std::optional<CovarianceBounds> bounds;
};

// Half-open grid lo + i(1 - lo)/n_p, i = 0..n_p-1.
std::vector<double> epsilon_grid(double lo, int n_p);

GridSearchResult grid_search(int n_s, int n_p, double delta, const SensorPool& pool,
                             const LtiSystem& system, const GridOptions& options = {});

struct HeterogeneousResult {
  std::vector<GridSearchResult> partitions;
  std::vector<AwParameters> params;
  CovarianceBounds fused;
};

HeterogeneousResult grid_search_heterogeneous(const Partitioning& partitioning,
                                              const std::vector<int>& n_p,
                                              const SensorPool& pool, const LtiSystem& system,
                                              int workers = 0);

struct UniformBaseline {
  double rho = 0.0;
  double epsilon = 0.0;
  AwParameters params;
  CovarianceBounds bounds;
};

// Uniform p with ε at the lower end of its admissible interval.
UniformBaseline uniform_baseline(const SensorPool& pool, int n_s, double delta,
                                 const LtiSystem& system);

}  // namespace randsel
