#include "randsel/kalman.hpp"

#include "randsel/errors.hpp"

namespace randsel {
namespace {

void check_orders(const PsdMatrix& p, const PsdMatrix& theta,
                  const LtiSystem& system) {
  if (p.order() != system.state_dim() || theta.order() != system.state_dim()) {
    throw DimensionError("covariance and information must match the state dimension");
  }
}

// One filter step on raw matrices: ((A P Aᵀ + Q)⁻¹ + Θ)⁻¹.
Eigen::MatrixXd step(const Eigen::MatrixXd& p, const Eigen::MatrixXd& theta,
                     const Eigen::MatrixXd& a, const Eigen::MatrixXd& q) {
  const Eigen::MatrixXd pred = a * p * a.transpose() + q;
  Eigen::LLT<Eigen::MatrixXd> l1(pred);
  if (l1.info() != Eigen::Success) {
    throw SingularityError("predicted covariance lost definiteness");
  }
  const Eigen::Index m = p.rows();
  Eigen::MatrixXd info = l1.solve(Eigen::MatrixXd::Identity(m, m)) + theta;
  info = 0.5 * (info + info.transpose()).eval();
  Eigen::LLT<Eigen::MatrixXd> l2(info);
  if (l2.info() != Eigen::Success) {
    throw SingularityError("information matrix lost definiteness");
  }
  Eigen::MatrixXd out = l2.solve(Eigen::MatrixXd::Identity(m, m));
  return 0.5 * (out + out.transpose());
}

}  // namespace

CovarianceTrajectory propagate_filtered(const PsdMatrix& p0,
                                        const PsdMatrix& theta,
                                        const LtiSystem& system, int horizon) {
  check_orders(p0, theta, system);
  if (horizon < 0) throw InvalidInputError("horizon must be non-negative");
  CovarianceTrajectory traj;
  traj.horizon = horizon;
  traj.filtered.push_back(p0);
  for (int t = 0; t < horizon; ++t) {
    const PsdMatrix& p = traj.filtered.back();
    traj.predicted.push_back(f4(p, system.a(), system.q()));
    traj.filtered.push_back(f2(p, theta, system.a(), system.q()));
  }
  return traj;
}

SteadyStateResult steady_state(const PsdMatrix& theta, const LtiSystem& system,
                               const PsdMatrix& p0,
                               const DareOptions& options) {
  check_orders(p0, theta, system);
  const Eigen::MatrixXd& a = system.a();
  const Eigen::MatrixXd& q = system.q().matrix();
  const Eigen::MatrixXd& th = theta.matrix();
  Eigen::MatrixXd p = p0.matrix();
  double residual = 0.0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    Eigen::MatrixXd next = step(p, th, a, q);
    residual = (next - p).cwiseAbs().rowwise().sum().maxCoeff();
    p = std::move(next);
    if (!p.allFinite()) break;
    if (residual <= options.tolerance) {
      // Report the residual of the returned matrix itself.
      const double r = (step(p, th, a, q) - p).cwiseAbs().rowwise().sum().maxCoeff();
      return SteadyStateResult{PsdMatrix::Trusted(SymmetricMatrix(p)), it, r};
    }
  }
  throw ConvergenceError("Riccati iteration did not converge", residual,
                         options.max_iterations);
}

SteadyStateResult steady_state(const PsdMatrix& theta, const LtiSystem& system,
                               const DareOptions& options) {
  return steady_state(
      theta, system,
      PsdMatrix::Trusted(SymmetricMatrix::Identity(system.state_dim())), options);
}

SteadyStateResult selection_steady_state(const SensorPool& pool,
                                         const Selection& sel,
                                         const LtiSystem& system,
                                         const DareOptions& options) {
  return steady_state(
      PsdMatrix::Trusted(information_sum(pool, sel.indices())), system, options);
}

}  // namespace randsel
