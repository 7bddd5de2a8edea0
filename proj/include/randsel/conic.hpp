#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace randsel::conic {

// Linear matrix inequalities  C_j + Σ_k y_k F_k ⪰ 0, one per copy j. All
// copies in a family share the coefficient matrices F_k and differ only in
// the constant C_j.
struct LmiFamily {
  int dim = 0;
  std::vector<Eigen::MatrixXd> constants;
  std::vector<std::pair<int, Eigen::MatrixXd>> terms;
};

// maximize bᵀy  subject to LMI families and linear rows h + gᵀy >= 0.
class ConicProblem {
 public:
  explicit ConicProblem(int num_variables);

  int num_variables() const { return n_; }
  void set_objective(Eigen::VectorXd b);
  const Eigen::VectorXd& objective() const { return b_; }

  void add_lmi_family(LmiFamily family);
  void add_lmi(Eigen::MatrixXd constant,
               std::vector<std::pair<int, Eigen::MatrixXd>> terms);
  void add_linear(double h, const std::vector<std::pair<int, double>>& g);

  const std::vector<LmiFamily>& families() const { return families_; }
  const Eigen::VectorXd& linear_constant() const { return h_; }
  const Eigen::MatrixXd& linear_matrix() const { return g_; }
  int num_linear() const { return static_cast<int>(h_.size()); }
  // Total order of the cone (Σ dims over copies plus linear rows).
  int cone_order() const;

  // Smallest eigenvalue of any LMI slack and smallest linear slack at y.
  double min_slack(const Eigen::VectorXd& y) const;
  Eigen::MatrixXd lmi_slack(int family, int copy, const Eigen::VectorXd& y) const;

 private:
  int n_;
  Eigen::VectorXd b_;
  std::vector<LmiFamily> families_;
  Eigen::VectorXd h_;
  Eigen::MatrixXd g_;
};

enum class SolveStatus {
  kOptimal,
  kNearOptimal,
  kInfeasible,
  kUnbounded,
  kIterationLimit,
  kNumericalFailure,
};

std::string_view to_string(SolveStatus s);
inline bool usable(SolveStatus s) {
  return s == SolveStatus::kOptimal || s == SolveStatus::kNearOptimal;
}

struct SolverOptions {
  double feasibility_tolerance = 1e-8;
  double gap_tolerance = 1e-8;
  int max_iterations = 150;
};

struct ConicSolution {
  SolveStatus status = SolveStatus::kNumericalFailure;
  Eigen::VectorXd y;
  double objective = 0.0;
  int iterations = 0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  double relative_gap = 0.0;
};

// Infeasible-start primal-dual path following (HKM direction, Mehrotra
// predictor-corrector).
ConicSolution solve_interior_point(const ConicProblem& problem,
                                   const SolverOptions& options = {});

// Log-barrier path following on the dual slack with a phase-one search for
// a strictly feasible start. Needs a problem with nonempty interior.
ConicSolution solve_barrier(const ConicProblem& problem,
                            const SolverOptions& options = {});

}  // namespace randsel::conic
