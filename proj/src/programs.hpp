#pragma once

// Shared assembly helpers for the semidefinite programs over sampling
// distributions. Not installed.

#include <optional>

#include <Eigen/Dense>

#include "randsel/conic.hpp"
#include "randsel/system_model.hpp"

namespace randsel::detail {

// p = e_n + Σ_{i<n} q_i (e_i - e_n); the q occupy variables
// [offset, offset + n - 1).
struct SimplexVars {
  int n = 1;
  int offset = 0;

  int count() const { return n - 1; }
  Eigen::VectorXd distribution(const Eigen::VectorXd& y) const;
  // q_i >= 0 and 1 - Σ q_i >= 0.
  void add_nonnegativity(conic::ConicProblem& problem) const;
  // Interior starting values (uniform p) are not needed by the solvers; this
  // maps a distribution back to q for feasibility checks.
  Eigen::VectorXd coordinates(const Eigen::VectorXd& p) const;
};

// Orthonormal basis (columns) of span{c_i}.
Eigen::MatrixXd sensor_span_basis(const SensorPool& pool);
// Orthonormal basis of the range of a PSD matrix.
Eigen::MatrixXd range_basis(const Eigen::MatrixXd& psd);

// Adds  [UᵀE(p)U  ĉ_j; ĉ_jᵀ ρ] ⪰ 0  for every candidate j, with
// ĉ_j = Uᵀc_j/σ_j. This is Z_j ⪯ ρE(p) restricted to range(U).
//   simplex: p variable; otherwise p = fixed_p.
//   rho_var: ρ variable index; otherwise ρ = fixed_rho.
void add_domination_family(conic::ConicProblem& problem, const SensorPool& pool,
                           const Eigen::MatrixXd& basis,
                           const std::optional<SimplexVars>& simplex,
                           const Eigen::VectorXd& fixed_p,
                           std::optional<int> rho_var, double fixed_rho);

// Domination feasibility at (p, ρ) with the given tolerance.
bool dominates(const SensorPool& pool, const Eigen::VectorXd& p, double rho,
               double tol);

// Clips negative entries to zero and renormalizes.
Eigen::VectorXd clean_distribution(const Eigen::VectorXd& p);

// Candidate with the largest σ_j⁻² c_jᵀE(p)⁺c_j (0-based).
int binding_candidate(const SensorPool& pool, const Eigen::VectorXd& p);

// Primary solver with the barrier method as fallback. Throws
// OptimizationError if neither returns a usable point.
conic::ConicSolution solve_with_fallback(const conic::ConicProblem& problem,
                                         const char* what);

}  // namespace randsel::detail
