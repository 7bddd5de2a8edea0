#include "randsel/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "programs.hpp"
#include "randsel/errors.hpp"
#include "randsel/kalman.hpp"
#include "randsel/parallel.hpp"

namespace randsel {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double kLambdaFloor = 1e-12;
// Relative slack under which ρ̂ is treated as the joint optimum ϱ*.
constexpr double kEndpointSlack = 1e-9;

void check_program_inputs(double epsilon, double rho, int n_s) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
  if (!(rho >= 1.0)) throw DomainError("rho must be at least 1");
  if (n_s < 1) throw DomainError("n_s must be positive");
}

// Returns a distribution with ρ(p) <= rho by moving p toward the joint
// optimizer. ρ(·) is convex on the simplex, so feasibility is monotone
// along the segment.
VectorXd restore_domination(const SensorPool& pool, const VectorXd& p, double rho,
                            const RhoStarResult& joint) {
  auto ratio = [&](const VectorXd& q) {
    try {
      return rho_star_for_distribution(pool, q);
    } catch (const InfeasibleError&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  const double rp = ratio(p);
  if (rp <= rho) return p;
  double theta = std::isfinite(rp) ? (rp - rho) / (rp - joint.rho_star) : 1e-9;
  for (;;) {
    theta = std::min(1.0, theta * (1.0 + 1e-6) + 1e-15);
    const VectorXd q = (1.0 - theta) * p + theta * joint.p;
    if (theta >= 1.0 || ratio(q) <= rho) return q;
    theta *= 2.0;
  }
}

void ensure_reachable(double rho, const RhoStarResult& joint, const SensorPool& pool) {
  if (rho < joint.rho_star * (1.0 - kEndpointSlack)) {
    const int j = detail::binding_candidate(pool, joint.p);
    throw InfeasibleError("no distribution satisfies the domination constraints at rho = " +
                              std::to_string(rho) + " (binding candidate " +
                              std::to_string(j + 1) + ")",
                          std::nullopt, j + 1);
  }
}

bool at_endpoint(double rho, const RhoStarResult& joint) {
  return rho <= joint.rho_star * (1.0 + kEndpointSlack);
}

MatrixXd sym_basis(int m, int a, int b) {
  MatrixXd out = MatrixXd::Zero(m, m);
  out(a, b) = 1.0;
  out(b, a) = 1.0;
  return out;
}

struct SteadyProgram {
  conic::ConicProblem problem;
  std::optional<detail::SimplexVars> simplex;
  int x_offset;
};

// Variables: λ, then q (absent when p is fixed), then the lower triangle of X.
SteadyProgram build_steady_program(double beta, double rho, const SensorPool& pool,
                                   const LtiSystem& system,
                                   const std::optional<VectorXd>& fixed_p) {
  const int m = system.state_dim();
  const int n = pool.size();
  std::optional<detail::SimplexVars> simplex;
  if (!fixed_p) simplex = detail::SimplexVars{n, 1};
  const int x_offset = 1 + (simplex ? simplex->count() : 0);
  const int nx = m * (m + 1) / 2;
  SteadyProgram sp{conic::ConicProblem(x_offset + nx), simplex, x_offset};
  VectorXd b = VectorXd::Zero(x_offset + nx);
  b(0) = 1.0;
  sp.problem.set_objective(b);

  const MatrixXd qinv = inverse_pd(system.q()).matrix();
  const MatrixXd& a = system.a();
  MatrixXd e0 = fixed_p ? expected_information(pool, *fixed_p).matrix()
                        : pool.information(n - 1).matrix();

  std::vector<std::pair<int, MatrixXd>> lower_terms{{0, -MatrixXd::Identity(m, m)}};
  std::vector<std::pair<int, MatrixXd>> riccati_terms;
  int k = x_offset;
  for (int col = 0; col < m; ++col) {
    for (int row = col; row < m; ++row, ++k) {
      const MatrixXd basis = sym_basis(m, row, col);
      lower_terms.emplace_back(k, basis);
      MatrixXd big = MatrixXd::Zero(2 * m, 2 * m);
      big.topLeftCorner(m, m) = -basis;
      big.bottomRightCorner(m, m) = basis;
      riccati_terms.emplace_back(k, std::move(big));
    }
  }
  if (simplex) {
    for (int i = 0; i < simplex->count(); ++i) {
      MatrixXd big = MatrixXd::Zero(2 * m, 2 * m);
      big.topLeftCorner(m, m) = beta * (pool.information(i).matrix() - e0);
      riccati_terms.emplace_back(simplex->offset + i, std::move(big));
    }
  }
  sp.problem.add_lmi(MatrixXd::Zero(m, m), std::move(lower_terms));
  MatrixXd c = MatrixXd::Zero(2 * m, 2 * m);
  c.topLeftCorner(m, m) = qinv + beta * e0;
  c.topRightCorner(m, m) = qinv * a;
  c.bottomLeftCorner(m, m) = a.transpose() * qinv;
  c.bottomRightCorner(m, m) = a.transpose() * qinv * a;
  sp.problem.add_lmi(std::move(c), std::move(riccati_terms));
  if (simplex) {
    detail::add_domination_family(sp.problem, pool, detail::sensor_span_basis(pool), simplex,
                                  VectorXd(), std::nullopt, rho);
    simplex->add_nonnegativity(sp.problem);
  }
  sp.problem.add_linear(-kLambdaFloor, {{0, 1.0}});
  return sp;
}

MatrixXd unpack_x(const VectorXd& y, int offset, int m) {
  MatrixXd x(m, m);
  int k = offset;
  for (int col = 0; col < m; ++col) {
    for (int row = col; row < m; ++row, ++k) x(row, col) = x(col, row) = y(k);
  }
  return x;
}

ProgramSolution solve_steady_fixed(double beta, const VectorXd& p, const SensorPool& pool,
                                   const LtiSystem& system) {
  SteadyProgram sp = build_steady_program(beta, 1.0, pool, system, p);
  const auto sol = detail::solve_with_fallback(sp.problem, "steady-state relaxation");
  if (!conic::usable(sol.status)) {
    throw OptimizationError("steady-state relaxation", std::string(conic::to_string(sol.status)));
  }
  ProgramSolution out;
  out.p = p;
  out.lambda_star = sol.y(0);
  out.status = std::string(conic::to_string(sol.status));
  out.iterations = sol.iterations;
  out.x = unpack_x(sol.y, sp.x_offset, system.state_dim());
  return out;
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

ProgramSolution solve_time_dependent(const PsdMatrix& prior, double epsilon, double rho,
                                     int n_s, const SensorPool& pool,
                                     const LtiSystem& system,
                                     const std::optional<RhoStarResult>& joint_in) {
  check_program_inputs(epsilon, rho, n_s);
  const int m = system.state_dim();
  const int n = pool.size();
  if (prior.order() != m || pool.state_dim() != m) throw DimensionError("dimension mismatch");
  const RhoStarResult joint = joint_in ? *joint_in : rho_star_joint(pool);
  ensure_reachable(rho, joint, pool);
  const double beta = (1.0 - epsilon) * n_s;
  const MatrixXd m0 = inverse_pd(f4(prior, system.a(), system.q())).matrix();
  auto objective_at = [&](const VectorXd& p) {
    return min_eigenvalue(SymmetricMatrix(m0 + beta * expected_information(pool, p).matrix()));
  };

  ProgramSolution out;
  if (n == 1 || at_endpoint(rho, joint)) {
    out.p = joint.p;
    out.lambda_star = objective_at(out.p);
    out.status = "endpoint";
    return out;
  }
  detail::SimplexVars simplex{n, 1};
  conic::ConicProblem prob(n);
  VectorXd b = VectorXd::Zero(n);
  b(0) = 1.0;
  prob.set_objective(b);
  const MatrixXd& last = pool.information(n - 1).matrix();
  std::vector<std::pair<int, MatrixXd>> terms{{0, -MatrixXd::Identity(m, m)}};
  for (int i = 0; i < simplex.count(); ++i) {
    terms.emplace_back(1 + i, beta * (pool.information(i).matrix() - last));
  }
  prob.add_lmi(m0 + beta * last, std::move(terms));
  detail::add_domination_family(prob, pool, detail::sensor_span_basis(pool), simplex,
                                VectorXd(), std::nullopt, rho);
  simplex.add_nonnegativity(prob);
  prob.add_linear(-kLambdaFloor, {{0, 1.0}});
  const auto sol = detail::solve_with_fallback(prob, "time-dependent program");
  if (sol.status == conic::SolveStatus::kInfeasible) {
    ensure_reachable(std::numeric_limits<double>::lowest(), joint, pool);
  }
  out.p = restore_domination(pool, detail::clean_distribution(simplex.distribution(sol.y)),
                             rho, joint);
  out.lambda_star = objective_at(out.p);
  out.status = std::string(conic::to_string(sol.status));
  out.iterations = sol.iterations;
  return out;
}

ProgramSolution solve_steady_state_relaxation(double epsilon, double rho, int n_s,
                                              const SensorPool& pool,
                                              const LtiSystem& system,
                                              const std::optional<RhoStarResult>& joint_in) {
  check_program_inputs(epsilon, rho, n_s);
  if (pool.state_dim() != system.state_dim()) throw DimensionError("dimension mismatch");
  const RhoStarResult joint = joint_in ? *joint_in : rho_star_joint(pool);
  ensure_reachable(rho, joint, pool);
  const double beta = (1.0 - epsilon) * n_s;

  ProgramSolution out;
  if (pool.size() == 1 || at_endpoint(rho, joint)) {
    out = solve_steady_fixed(beta, joint.p, pool, system);
    out.status = "endpoint";
  } else {
    SteadyProgram sp = build_steady_program(beta, rho, pool, system, std::nullopt);
    const auto sol = detail::solve_with_fallback(sp.problem, "steady-state relaxation");
    if (sol.status == conic::SolveStatus::kInfeasible) {
      ensure_reachable(std::numeric_limits<double>::lowest(), joint, pool);
    }
    const VectorXd raw = detail::clean_distribution(sp.simplex->distribution(sol.y));
    const VectorXd p = restore_domination(pool, raw, rho, joint);
    if ((p - raw).cwiseAbs().maxCoeff() > 0.0) {
      out = solve_steady_fixed(beta, p, pool, system);
    } else {
      out.p = p;
      out.lambda_star = sol.y(0);
      out.x = unpack_x(sol.y, sp.x_offset, system.state_dim());
    }
    out.status = std::string(conic::to_string(sol.status));
    out.iterations = sol.iterations;
  }
  const SymmetricMatrix root = symmetric_sqrt(expected_information(pool, out.p));
  if (!pbh_detectable(system.a(), root.matrix())) {
    out.warnings.push_back("(A, E[Z]^{1/2}) is not detectable at the returned distribution");
    out.status += "+undetectable";
  }
  return out;
}

std::vector<double> epsilon_grid(double lo, int n_p) {
  if (n_p < 1) throw DomainError("n_p must be positive");
  if (!(lo > 0.0 && lo < 1.0)) throw DomainError("grid start must lie in (0, 1)");
  std::vector<double> out(n_p);
  for (int i = 0; i < n_p; ++i) out[i] = lo + i * (1.0 - lo) / n_p;
  return out;
}

GridSearchResult grid_search(int n_s, int n_p, double delta, const SensorPool& pool,
                             const LtiSystem& system, const GridOptions& options) {
  const int m = pool.state_dim();
  GridSearchResult res;
  res.mode = options.mode;
  res.c0 = compute_c0(n_s, m, delta);
  if (options.mode == GridMode::kTimeDependent && !options.prior) {
    throw InvalidInputError("time-dependent grid search needs a prior covariance");
  }
  const RhoStarResult joint = options.joint ? *options.joint : rho_star_joint(pool);
  res.rho_star = joint.rho_star;
  if (!(joint.rho_star * res.c0 < 1.0)) {
    throw InfeasibleError("n_s = " + std::to_string(n_s) + " is below the feasibility threshold",
                          minimum_sample_size(joint.rho_star, m, delta));
  }
  const std::vector<double> eps = epsilon_grid(std::sqrt(joint.rho_star * res.c0), n_p);
  res.points.resize(n_p);
  std::vector<std::optional<AwParameters>> params(n_p);
  std::vector<std::optional<CovarianceBounds>> bounds(n_p);
  parallel_for(
      n_p,
      [&](int i) {
        GridPoint& g = res.points[i];
        g.epsilon = eps[i];
        g.rho = eps[i] * eps[i] / res.c0;
        try {
          const auto t0 = std::chrono::steady_clock::now();
          ProgramSolution sol =
              options.mode == GridMode::kSteadyState
                  ? solve_steady_state_relaxation(g.epsilon, g.rho, n_s, pool, system, joint)
                  : solve_time_dependent(*options.prior, g.epsilon, g.rho, n_s, pool, system,
                                         joint);
          g.solve_time_ms = elapsed_ms(t0);
          g.p = sol.p;
          g.lambda_star = sol.lambda_star;
          g.status = sol.status;
          params[i].emplace(pool, n_s, delta, g.epsilon, g.rho, sol.p);
          bounds[i] = options.mode == GridMode::kSteadyState
                          ? bounds_steady_state(*params[i], system)
                          : bounds_at_time(f4(*options.prior, system.a(), system.q()),
                                           *params[i]);
          g.lambda_bar_upper = max_eigenvalue(bounds[i]->upper);
          g.lambda_bar_lower = max_eigenvalue(bounds[i]->lower);
          g.feasible = true;
        } catch (const Error& e) {
          g.status = std::string("failed: ") + e.what();
          g.feasible = false;
        }
      },
      options.workers);
  for (int i = 0; i < n_p; ++i) {
    const GridPoint& g = res.points[i];
    if (!g.feasible) continue;
    if (res.chosen < 0) {
      res.chosen = i;
      continue;
    }
    const GridPoint& best = res.points[res.chosen];
    const bool better = options.mode == GridMode::kSteadyState
                            ? g.lambda_bar_upper < best.lambda_bar_upper
                            : g.lambda_star > best.lambda_star;
    if (better) res.chosen = i;
  }
  if (res.chosen < 0) {
    std::ostringstream msg;
    msg << "every grid point failed:";
    for (const auto& g : res.points) msg << "\n  epsilon=" << g.epsilon << ": " << g.status;
    throw OptimizationError(msg.str(), "all_infeasible");
  }
  res.params = params[res.chosen];
  res.bounds = bounds[res.chosen];
  return res;
}

HeterogeneousResult grid_search_heterogeneous(const Partitioning& partitioning,
                                              const std::vector<int>& n_p,
                                              const SensorPool& pool, const LtiSystem& system,
                                              int workers) {
  const int k = partitioning.count();
  if (static_cast<int>(n_p.size()) != k) throw DimensionError("need one n_p per partition");
  if (partitioning.total_pool_size() != pool.size()) {
    throw DimensionError("partitioning does not cover the pool");
  }
  std::vector<std::optional<GridSearchResult>> parts(k);
  std::vector<std::string> failures(k);
  parallel_for(
      k,
      [&](int i) {
        try {
          const SensorPool sub = pool.slice(partitioning.first(i), partitioning.pool_size(i));
          GridOptions opt;
          opt.workers = 1;
          parts[i] = grid_search(partitioning.sample_size(i), n_p[i], partitioning.delta(i),
                                 sub, system, opt);
        } catch (const Error& e) {
          failures[i] = e.what();
        }
      },
      workers);
  std::ostringstream msg;
  bool failed = false;
  for (int i = 0; i < k; ++i) {
    if (!failures[i].empty()) {
      msg << "\n  partition " << i + 1 << ": " << failures[i];
      failed = true;
    }
  }
  if (failed) throw OptimizationError("partition search failed:" + msg.str(), "partition_failure");
  HeterogeneousResult out{{}, {}, CovarianceBounds{}};
  for (auto& p : parts) {
    out.params.push_back(*p->params);
    out.partitions.push_back(std::move(*p));
  }
  out.fused = bounds_heterogeneous(partitioning, out.params, system);
  return out;
}

UniformBaseline uniform_baseline(const SensorPool& pool, int n_s, double delta,
                                 const LtiSystem& system) {
  const int m = pool.state_dim();
  const VectorXd u = VectorXd::Constant(pool.size(), 1.0 / pool.size());
  const double rho_u = rho_star_for_distribution(pool, u);
  const double c0 = compute_c0(n_s, m, delta);
  const double eps = std::sqrt(rho_u * c0);
  if (!(eps < 1.0)) {
    throw InfeasibleError("uniform sampling needs more than n_s = " + std::to_string(n_s) +
                              " samples",
                          minimum_sample_size(rho_u, m, delta));
  }
  AwParameters params(pool, n_s, delta, eps, eps * eps / c0, u);
  CovarianceBounds b = bounds_steady_state(params, system);
  return UniformBaseline{rho_u, eps, std::move(params), std::move(b)};
}

}  // namespace randsel
