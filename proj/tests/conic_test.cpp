#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "randsel/conic.hpp"
#include "randsel/errors.hpp"
#include "randsel/matrix_core.hpp"
#include "test_util.hpp"

namespace randsel::conic {
namespace {

using namespace randsel::testing;

using Solver = ConicSolution (*)(const ConicProblem&, const SolverOptions&);

class BothSolvers : public ::testing::TestWithParam<Solver> {};

// maximize λ subject to M - λI ⪰ 0.
ConicProblem min_eig_problem(const MatrixXd& m) {
  ConicProblem p(1);
  p.set_objective(VectorXd::Ones(1));
  p.add_lmi(m, {{0, -MatrixXd::Identity(m.rows(), m.cols())}});
  return p;
}

TEST_P(BothSolvers, MinimumEigenvalue) {
  std::mt19937_64 g(1);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 6;
    const MatrixXd b = random_matrix(g, n, n);
    const MatrixXd m = b + b.transpose();
    const auto sol = GetParam()(min_eig_problem(m), {});
    ASSERT_TRUE(usable(sol.status)) << to_string(sol.status);
    EXPECT_NEAR(sol.y(0), min_eigenvalue(SymmetricMatrix(m)), 1e-6);
  }
}

TEST_P(BothSolvers, TwoByTwoSchurBound) {
  // min t s.t. [[t, 1], [1, t]] ⪰ 0  ->  t = 1.
  ConicProblem p(1);
  p.set_objective(-VectorXd::Ones(1));
  MatrixXd c(2, 2);
  c << 0, 1, 1, 0;
  p.add_lmi(c, {{0, MatrixXd::Identity(2, 2)}});
  const auto sol = GetParam()(p, {});
  ASSERT_TRUE(usable(sol.status));
  EXPECT_NEAR(sol.y(0), 1.0, 1e-6);
}

TEST_P(BothSolvers, SimplexMinMaxEigenvalue) {
  // minimize λ̄(q M1 + (1-q) M2) over q ∈ [0,1]; oracle by dense scan.
  std::mt19937_64 g(2);
  for (int trial = 0; trial < 10; ++trial) {
    const MatrixXd m1 = random_pd(g, 3).matrix(), m2 = random_pd(g, 3).matrix();
    ConicProblem p(2);  // y = (t, q)
    p.set_objective(Eigen::Vector2d(-1.0, 0.0));
    p.add_lmi(-m2, {{0, MatrixXd::Identity(3, 3)}, {1, -(m1 - m2)}});
    p.add_linear(0.0, {{1, 1.0}});
    p.add_linear(1.0, {{1, -1.0}});
    const auto sol = GetParam()(p, {});
    ASSERT_TRUE(usable(sol.status));
    double best = INFINITY;
    for (int i = 0; i <= 100000; ++i) {
      const double q = i / 100000.0;
      best = std::min(best, max_eigenvalue(SymmetricMatrix(q * m1 + (1 - q) * m2)));
    }
    EXPECT_NEAR(sol.y(0), best, 1e-6);
    EXPECT_GE(p.min_slack(sol.y), -1e-7);
  }
}

TEST(InteriorPoint, DetectsInfeasibility) {
  ConicProblem p(1);
  p.set_objective(VectorXd::Ones(1));
  p.add_linear(-1.0, {{0, 1.0}});  // y >= 1
  p.add_linear(0.0, {{0, -1.0}});  // y <= 0
  EXPECT_EQ(solve_interior_point(p).status, SolveStatus::kInfeasible);

  ConicProblem q(1);
  q.set_objective(VectorXd::Ones(1));
  MatrixXd c = MatrixXd::Zero(2, 2), f = MatrixXd::Zero(2, 2);
  c(1, 1) = -1.0;
  f(0, 0) = 1.0;
  f(1, 1) = -1.0;
  q.add_lmi(c, {{0, f}});  // y >= 0 and -1 - y >= 0
  EXPECT_EQ(solve_interior_point(q).status, SolveStatus::kInfeasible);
}

TEST(InteriorPoint, DetectsUnboundedness) {
  ConicProblem p(1);
  p.set_objective(VectorXd::Ones(1));
  p.add_lmi(MatrixXd::Identity(2, 2), {{0, MatrixXd::Identity(2, 2)}});
  EXPECT_EQ(solve_interior_point(p).status, SolveStatus::kUnbounded);
}

TEST(Barrier, DetectsInfeasibilityAndUnboundedness) {
  ConicProblem p(1);
  p.set_objective(VectorXd::Ones(1));
  p.add_linear(-1.0, {{0, 1.0}});
  p.add_linear(0.0, {{0, -1.0}});
  EXPECT_EQ(solve_barrier(p).status, SolveStatus::kInfeasible);
  ConicProblem q(1);
  q.set_objective(VectorXd::Ones(1));
  q.add_lmi(MatrixXd::Identity(2, 2), {{0, MatrixXd::Identity(2, 2)}});
  EXPECT_EQ(solve_barrier(q).status, SolveStatus::kUnbounded);
}

TEST(ConicProblem, FamiliesAndSlack) {
  ConicProblem p(2);
  LmiFamily fam;
  fam.dim = 1;
  fam.constants = {MatrixXd::Constant(1, 1, 1.0), MatrixXd::Constant(1, 1, 2.0)};
  fam.terms = {{0, MatrixXd::Constant(1, 1, 1.0)}, {0, MatrixXd::Constant(1, 1, 1.0)}};
  p.add_lmi_family(fam);
  EXPECT_EQ(p.families().front().terms.size(), 1u);  // duplicates merged
  EXPECT_EQ(p.cone_order(), 2);
  EXPECT_DOUBLE_EQ(p.min_slack(Eigen::Vector2d(-0.25, 0.0)), 0.5);
  EXPECT_THROW(p.add_linear(0.0, {{5, 1.0}}), Error);
}

INSTANTIATE_TEST_SUITE_P(Solvers, BothSolvers,
                         ::testing::Values(&solve_interior_point, &solve_barrier),
                         [](const auto& info) {
                           return info.index == 0 ? std::string("InteriorPoint")
                                                  : std::string("Barrier");
                         });

}  // namespace
}  // namespace randsel::conic
