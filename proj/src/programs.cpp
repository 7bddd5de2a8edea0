#include "programs.hpp"

#include <string>

#include "randsel/errors.hpp"
#include "randsel/matrix_core.hpp"

namespace randsel::detail {

using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd SimplexVars::distribution(const VectorXd& y) const {
  VectorXd p(n);
  const VectorXd q = y.segment(offset, count());
  p.head(count()) = q;
  p(n - 1) = 1.0 - q.sum();
  return p;
}

void SimplexVars::add_nonnegativity(conic::ConicProblem& problem) const {
  std::vector<std::pair<int, double>> last;
  for (int i = 0; i < count(); ++i) {
    problem.add_linear(0.0, {{offset + i, 1.0}});
    last.emplace_back(offset + i, -1.0);
  }
  if (count() > 0) problem.add_linear(1.0, last);
}

VectorXd SimplexVars::coordinates(const VectorXd& p) const { return p.head(count()); }

MatrixXd range_basis(const MatrixXd& psd) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(psd);
  const VectorXd& ev = es.eigenvalues();
  const double cutoff = kRankCutoff * std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  int first = 0;
  while (first < ev.size() && ev(first) <= cutoff) ++first;
  return es.eigenvectors().rightCols(ev.size() - first);
}

MatrixXd sensor_span_basis(const SensorPool& pool) {
  MatrixXd gram = MatrixXd::Zero(pool.state_dim(), pool.state_dim());
  for (int i = 0; i < pool.size(); ++i) gram += pool.information(i).matrix();
  return range_basis(gram);
}

void add_domination_family(conic::ConicProblem& problem, const SensorPool& pool,
                           const MatrixXd& basis,
                           const std::optional<SimplexVars>& simplex,
                           const VectorXd& fixed_p, std::optional<int> rho_var,
                           double fixed_rho) {
  const int r = static_cast<int>(basis.cols());
  const int n = pool.size();
  auto reduced = [&](int i) -> MatrixXd {
    return basis.transpose() * pool.information(i).matrix() * basis;
  };
  MatrixXd e0 = MatrixXd::Zero(r, r);
  conic::LmiFamily fam;
  fam.dim = r + 1;
  if (simplex) {
    const MatrixXd last = reduced(n - 1);
    e0 = last;
    for (int i = 0; i < simplex->count(); ++i) {
      MatrixXd coef = MatrixXd::Zero(r + 1, r + 1);
      coef.topLeftCorner(r, r) = reduced(i) - last;
      fam.terms.emplace_back(simplex->offset + i, std::move(coef));
    }
  } else {
    for (int i = 0; i < n; ++i) {
      if (fixed_p(i) != 0.0) e0 += fixed_p(i) * reduced(i);
    }
  }
  if (rho_var) {
    MatrixXd coef = MatrixXd::Zero(r + 1, r + 1);
    coef(r, r) = 1.0;
    fam.terms.emplace_back(*rho_var, std::move(coef));
  }
  for (int j = 0; j < n; ++j) {
    MatrixXd c = MatrixXd::Zero(r + 1, r + 1);
    c.topLeftCorner(r, r) = e0;
    const VectorXd cj = basis.transpose() * pool.sensor(j).c / std::sqrt(pool.sensor(j).sigma2);
    c.topRightCorner(r, 1) = cj;
    c.bottomLeftCorner(1, r) = cj.transpose();
    c(r, r) = rho_var ? 0.0 : fixed_rho;
    fam.constants.push_back(std::move(c));
  }
  problem.add_lmi_family(std::move(fam));
}

bool dominates(const SensorPool& pool, const VectorXd& p, double rho, double tol) {
  const SymmetricMatrix e = rho * expected_information(pool, p);
  for (int j = 0; j < pool.size(); ++j) {
    if (!loewner_leq(pool.information(j), e, tol)) return false;
  }
  return true;
}

VectorXd clean_distribution(const VectorXd& p) {
  VectorXd out = p.cwiseMax(0.0);
  // Interior-point iterates never reach exact zeros; drop the dust.
  const double floor = 1e-9 * out.maxCoeff();
  out = (out.array() <= floor).select(0.0, out);
  const double s = out.sum();
  if (!(s > 0.0)) throw OptimizationError("distribution has no mass", "degenerate");
  return out / s;
}

int binding_candidate(const SensorPool& pool, const VectorXd& p) {
  const MatrixXd e = expected_information(pool, p).matrix();
  const MatrixXd pinv = pseudo_inverse(SymmetricMatrix(e)).matrix();
  const MatrixXd proj = e * pinv;
  int best = 0;
  double worst = -1.0;
  for (int j = 0; j < pool.size(); ++j) {
    const auto& s = pool.sensor(j);
    // Directions outside range(E) cannot be dominated at all.
    const VectorXd resid = s.c - proj * s.c;
    const double v = resid.norm() > 1e-8 * s.c.norm() ? 1e300 : s.c.dot(pinv * s.c) / s.sigma2;
    if (v > worst) {
      worst = v;
      best = j;
    }
  }
  return best;
}

conic::ConicSolution solve_with_fallback(const conic::ConicProblem& problem,
                                         const char* what) {
  conic::ConicSolution sol = conic::solve_interior_point(problem);
  if (conic::usable(sol.status) || sol.status == conic::SolveStatus::kInfeasible) {
    return sol;
  }
  conic::ConicSolution alt = conic::solve_barrier(problem);
  if (conic::usable(alt.status) || alt.status == conic::SolveStatus::kInfeasible) {
    return alt;
  }
  throw OptimizationError(std::string(what) + " failed",
                          std::string(conic::to_string(sol.status)));
}

}  // namespace randsel::detail
