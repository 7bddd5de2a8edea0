#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "randsel/kalman.hpp"
#include "randsel/matrix_core.hpp"
#include "randsel/system_model.hpp"

namespace randsel {

// c₀ = (4/n_s) ln(2m/δ)
double compute_c0(int n_s, int m, double delta);

// Smallest ρ with Z_j ⪯ ρ E[Z](p) for all j:
// max(1, max_j σ_j⁻² c_jᵀ E⁺ c_j). Throws InfeasibleError naming a candidate
// outside range(E).
double rho_star_for_distribution(const SensorPool& pool, const Eigen::VectorXd& p);
// Same quantity from the semidefinite program with p held fixed.
double rho_star_for_distribution_sdp(const SensorPool& pool, const Eigen::VectorXd& p);

struct RhoStarResult {
  double rho_star = 1.0;   // closed form at the returned p
  Eigen::VectorXd p;
  double sdp_value = 1.0;  // raw solver objective
  int iterations = 0;
};

// Joint minimization over (ρ, p).
RhoStarResult rho_star_joint(const SensorPool& pool);

// 4 ϱ* ln(2m/δ); n_s must exceed it.
double sample_size_threshold(double rho_star, int m, double delta);
int minimum_sample_size(double rho_star, int m, double delta);

class EpsilonChoice {
 public:
  enum class Kind { kMidpoint, kLowerEndpoint, kExplicit };

  static EpsilonChoice Midpoint() { return EpsilonChoice(Kind::kMidpoint, 0.0); }
  static EpsilonChoice LowerEndpoint() { return EpsilonChoice(Kind::kLowerEndpoint, 0.0); }
  static EpsilonChoice Explicit(double eps) { return EpsilonChoice(Kind::kExplicit, eps); }

  // Resolves against the admissible interval [lo, 1).
  double resolve(double lo) const;

 private:
  EpsilonChoice(Kind kind, double value) : kind_(kind), value_(value) {}
  Kind kind_;
  double value_;
};

// (n_s, δ, ε, ρ, p) satisfying ε²/ρ = c₀ and Z_j ⪯ ρE[Z] for every j.
class AwParameters {
 public:
  AwParameters(const SensorPool& pool, int n_s, double delta, double epsilon,
               double rho, Eigen::VectorXd p);

  int n_s() const { return n_s_; }
  double delta() const { return delta_; }
  double epsilon() const { return epsilon_; }
  double rho() const { return rho_; }
  double c0() const { return c0_; }
  const Eigen::VectorXd& p() const { return p_; }
  const SymmetricMatrix& expected_information() const { return e_; }

 private:
  int n_s_;
  double delta_, epsilon_, rho_, c0_;
  Eigen::VectorXd p_;
  SymmetricMatrix e_;
};

// Smallest admissible sample size for a fixed p, plus `margin`.
AwParameters select_sample_size(const SensorPool& pool, const Eigen::VectorXd& p,
                                double delta, int margin = 0,
                                EpsilonChoice choice = EpsilonChoice::Midpoint());

// Parameters for a given sample size. p defaults to the joint certificate;
// pass `joint` to reuse an earlier solve.
AwParameters select_parameters_for_sample_size(
    const SensorPool& pool, int n_s, double delta,
    EpsilonChoice choice = EpsilonChoice::Midpoint(),
    const std::optional<Eigen::VectorXd>& p = std::nullopt,
    const std::optional<RhoStarResult>& joint = std::nullopt);

enum class BoundScope { kTimeInstant, kSteadyState };

struct CovarianceBounds {
  PsdMatrix lower;
  PsdMatrix upper;
  double probability_floor = 0.0;
  BoundScope scope = BoundScope::kSteadyState;
};

// L = (Σ⁻¹ + (1+ε)n_sE)⁻¹, U = (Σ⁻¹ + (1-ε)n_sE)⁻¹ around a prior Σ_t.
CovarianceBounds bounds_at_time(const PsdMatrix& sigma_t, const AwParameters& params);

CovarianceBounds bounds_steady_state(const AwParameters& params, const LtiSystem& system,
                                     const DareOptions& options = {});

// Fused bounds for independent draws from each partition. params[i] refers
// to the pool slice of partition i.
CovarianceBounds bounds_heterogeneous(const Partitioning& partitioning,
                                      const std::vector<AwParameters>& params,
                                      const LtiSystem& system,
                                      const DareOptions& options = {});

// Per-candidate caps on how often an index may appear in a draw.
class ConstraintSpec {
 public:
  explicit ConstraintSpec(std::vector<int> caps);
  // k_i = k_u where p_i > 0 and 0 elsewhere.
  static ConstraintSpec Uniform(int k_u, const Eigen::VectorXd& p);

  const std::vector<int>& caps() const { return caps_; }
  int max_cap() const;
  long cap_sum() const;
  std::optional<int> uniform_factor() const { return uniform_factor_; }

  // n_s ∈ [k_max, k_sum], and k_i = 0 wherever p_i = 0.
  void validate(int n_s, const Eigen::VectorXd& p) const;
  bool satisfied_by(const std::vector<int>& indices) const;

 private:
  std::vector<int> caps_;
  std::optional<int> uniform_factor_;
};

// α = 1 - Σ_j P[Bin(n_s, p_j) > k_j], a lower bound on the probability that a
// draw respects every cap.
double alpha(const ConstraintSpec& spec, int n_s, const Eigen::VectorXd& p);

struct ConstrainedFloors {
  double intersection = 0.0;   // Φ(α - δ)
  double conditional = 0.0;    // Φ(1 - δ/α)
  double expected_draws_bound = 0.0;  // 1/α
  bool degenerate = false;     // α <= 0
};

ConstrainedFloors constrained_floors(double alpha, double delta);

}  // namespace randsel
