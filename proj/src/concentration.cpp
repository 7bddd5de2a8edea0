#include "randsel/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "programs.hpp"
#include "randsel/errors.hpp"

namespace randsel {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

void require_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
}

}  // namespace

double compute_c0(int n_s, int m, double delta) {
  require_delta(delta);
  if (n_s < 1 || m < 1) throw DomainError("n_s and m must be positive");
  return 4.0 / n_s * std::log(2.0 * m / delta);
}

double rho_star_for_distribution(const SensorPool& pool, const VectorXd& p) {
  const MatrixXd e = expected_information(pool, p).matrix();
  const MatrixXd basis = detail::range_basis(e);
  const MatrixXd reduced = basis.transpose() * e * basis;
  Eigen::LLT<MatrixXd> llt(reduced);
  double rho = 1.0;
  for (int j = 0; j < pool.size(); ++j) {
    const auto& s = pool.sensor(j);
    const VectorXd cj = basis.transpose() * s.c;
    if ((s.c - basis * cj).norm() > 1e-8 * std::max(1.0, s.c.norm())) {
      throw InfeasibleError("candidate " + std::to_string(j + 1) +
                                " lies outside the range of E[Z]; no finite rho exists",
                            std::nullopt, j + 1);
    }
    rho = std::max(rho, cj.dot(llt.solve(cj)) / s.sigma2);
  }
  return rho;
}

double rho_star_for_distribution_sdp(const SensorPool& pool, const VectorXd& p) {
  const SymmetricMatrix e = expected_information(pool, p);
  const MatrixXd basis = detail::range_basis(e.matrix());
  for (int j = 0; j < pool.size(); ++j) {
    const auto& c = pool.sensor(j).c;
    if ((c - basis * (basis.transpose() * c)).norm() > 1e-8 * std::max(1.0, c.norm())) {
      throw InfeasibleError("candidate " + std::to_string(j + 1) +
                                " lies outside the range of E[Z]",
                            std::nullopt, j + 1);
    }
  }
  conic::ConicProblem prob(1);
  prob.set_objective(-VectorXd::Ones(1));
  detail::add_domination_family(prob, pool, basis, std::nullopt, p, 0, 0.0);
  const auto sol = detail::solve_with_fallback(prob, "fixed-distribution rho program");
  if (!conic::usable(sol.status)) {
    throw OptimizationError("fixed-distribution rho program", std::string(conic::to_string(sol.status)));
  }
  return std::max(1.0, sol.y(0));
}

RhoStarResult rho_star_joint(const SensorPool& pool) {
  const int n = pool.size();
  if (n == 1) return RhoStarResult{1.0, VectorXd::Ones(1), 1.0, 0};
  const MatrixXd basis = detail::sensor_span_basis(pool);
  detail::SimplexVars simplex{n, 1};
  conic::ConicProblem prob(n);
  VectorXd b = VectorXd::Zero(n);
  b(0) = -1.0;
  prob.set_objective(b);
  detail::add_domination_family(prob, pool, basis, simplex, VectorXd(), 0, 0.0);
  simplex.add_nonnegativity(prob);
  const auto sol = detail::solve_with_fallback(prob, "joint rho program");
  if (!conic::usable(sol.status)) {
    throw OptimizationError("joint rho program", std::string(conic::to_string(sol.status)));
  }
  RhoStarResult out;
  const VectorXd raw = simplex.distribution(sol.y);
  out.sdp_value = sol.y(0);
  out.iterations = sol.iterations;
  try {
    out.p = detail::clean_distribution(raw);
    out.rho_star = rho_star_for_distribution(pool, out.p);
  } catch (const InfeasibleError&) {
    out.p = raw.cwiseMax(0.0) / raw.cwiseMax(0.0).sum();
    out.rho_star = rho_star_for_distribution(pool, out.p);
  }
  return out;
}

double sample_size_threshold(double rho_star, int m, double delta) {
  require_delta(delta);
  return 4.0 * rho_star * std::log(2.0 * m / delta);
}

int minimum_sample_size(double rho_star, int m, double delta) {
  return static_cast<int>(std::floor(sample_size_threshold(rho_star, m, delta))) + 1;
}

double EpsilonChoice::resolve(double lo) const {
  if (!(lo < 1.0)) {
    throw InfeasibleError("admissible epsilon interval is empty");
  }
  switch (kind_) {
    case Kind::kMidpoint: return 0.5 * (lo + 1.0);
    case Kind::kLowerEndpoint: return lo;
    case Kind::kExplicit:
      if (!(value_ >= lo && value_ < 1.0)) {
        throw DomainError("epsilon " + std::to_string(value_) + " outside [" +
                          std::to_string(lo) + ", 1)");
      }
      return value_;
  }
  return lo;
}

AwParameters::AwParameters(const SensorPool& pool, int n_s, double delta,
                           double epsilon, double rho, VectorXd p)
    : n_s_(n_s), delta_(delta), epsilon_(epsilon), rho_(rho), p_(std::move(p)) {
  c0_ = compute_c0(n_s, pool.state_dim(), delta);
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
  if (!(rho >= 1.0)) throw DomainError("rho must be at least 1");
  if (std::abs(epsilon * epsilon / rho - c0_) > 1e-12 * std::max(1.0, c0_)) {
    throw DomainError("epsilon^2 / rho must equal c0");
  }
  e_ = randsel::expected_information(pool, p_);
  const SymmetricMatrix scaled = rho * e_;
  for (int j = 0; j < pool.size(); ++j) {
    if (!loewner_leq(pool.information(j), scaled)) {
      throw InfeasibleError("candidate " + std::to_string(j + 1) +
                                " is not dominated by rho * E[Z]",
                            std::nullopt, j + 1);
    }
  }
}

AwParameters select_sample_size(const SensorPool& pool, const VectorXd& p,
                                double delta, int margin, EpsilonChoice choice) {
  if (margin < 0) throw DomainError("margin must be non-negative");
  const double rho_p = rho_star_for_distribution(pool, p);
  const int m = pool.state_dim();
  const int n_s = minimum_sample_size(rho_p, m, delta) + margin;
  const double c0 = compute_c0(n_s, m, delta);
  const double eps = choice.resolve(std::sqrt(rho_p * c0));
  // At the lower endpoint ρ is exactly the domination ratio of p.
  const double rho = eps * eps / c0;
  return AwParameters(pool, n_s, delta, eps, rho, p);
}

AwParameters select_parameters_for_sample_size(const SensorPool& pool, int n_s,
                                               double delta, EpsilonChoice choice,
                                               const std::optional<VectorXd>& p,
                                               const std::optional<RhoStarResult>& joint) {
  const int m = pool.state_dim();
  const double c0 = compute_c0(n_s, m, delta);
  const RhoStarResult rs = joint ? *joint : rho_star_joint(pool);
  if (!(rs.rho_star * c0 < 1.0)) {
    throw InfeasibleError("n_s = " + std::to_string(n_s) + " is too small (rho* c0 >= 1)",
                          minimum_sample_size(rs.rho_star, m, delta));
  }
  const double eps = choice.resolve(std::sqrt(rs.rho_star * c0));
  return AwParameters(pool, n_s, delta, eps, eps * eps / c0, p ? *p : rs.p);
}

CovarianceBounds bounds_at_time(const PsdMatrix& sigma_t, const AwParameters& params) {
  if (sigma_t.order() != params.expected_information().order()) {
    throw DimensionError("prior covariance has the wrong order");
  }
  const SymmetricMatrix prior_info = inverse_pd(sigma_t);
  const double n = params.n_s();
  const SymmetricMatrix& e = params.expected_information();
  CovarianceBounds out{
      PsdMatrix::Trusted(inverse_pd(prior_info + ((1.0 + params.epsilon()) * n) * e)),
      PsdMatrix::Trusted(inverse_pd(prior_info + ((1.0 - params.epsilon()) * n) * e)),
      1.0 - params.delta(), BoundScope::kTimeInstant};
  return out;
}

namespace {

CovarianceBounds steady_bounds(const SymmetricMatrix& theta_lower_cov,
                               const SymmetricMatrix& theta_upper_cov, double floor,
                               const LtiSystem& system, const DareOptions& options) {
  if (!pbh_detectable(system.a(), symmetric_sqrt(theta_upper_cov).matrix())) {
    throw DetectabilityError("(A, E[Z]^{1/2}) is not detectable");
  }
  const auto upper = steady_state(PsdMatrix::Trusted(theta_upper_cov), system, options);
  const auto lower = steady_state(PsdMatrix::Trusted(theta_lower_cov), system, options);
  return CovarianceBounds{lower.p, upper.p, floor, BoundScope::kSteadyState};
}

}  // namespace

CovarianceBounds bounds_steady_state(const AwParameters& params, const LtiSystem& system,
                                     const DareOptions& options) {
  const double n = params.n_s();
  const SymmetricMatrix& e = params.expected_information();
  if (e.order() != system.state_dim()) throw DimensionError("pool and system differ in m");
  return steady_bounds(((1.0 + params.epsilon()) * n) * e, ((1.0 - params.epsilon()) * n) * e,
                       1.0 - params.delta(), system, options);
}

CovarianceBounds bounds_heterogeneous(const Partitioning& partitioning,
                                      const std::vector<AwParameters>& params,
                                      const LtiSystem& system, const DareOptions& options) {
  if (static_cast<int>(params.size()) != partitioning.count()) {
    throw DimensionError("need one parameter set per partition");
  }
  const int m = system.state_dim();
  SymmetricMatrix lo = SymmetricMatrix::Zero(m), hi = SymmetricMatrix::Zero(m);
  for (int i = 0; i < partitioning.count(); ++i) {
    const AwParameters& pi = params[i];
    if (pi.n_s() != partitioning.sample_size(i) || pi.delta() != partitioning.delta(i) ||
        pi.p().size() != partitioning.pool_size(i)) {
      throw InvalidInputError("parameters of partition " + std::to_string(i + 1) +
                              " do not match the partitioning");
    }
    lo += ((1.0 + pi.epsilon()) * pi.n_s()) * pi.expected_information();
    hi += ((1.0 - pi.epsilon()) * pi.n_s()) * pi.expected_information();
  }
  return steady_bounds(lo, hi, partitioning.joint_confidence(), system, options);
}

ConstraintSpec::ConstraintSpec(std::vector<int> caps) : caps_(std::move(caps)) {
  if (caps_.empty()) throw InvalidInputError("constraint list is empty");
  for (int k : caps_) {
    if (k < 0) throw InvalidInputError("caps must be non-negative");
  }
}

ConstraintSpec ConstraintSpec::Uniform(int k_u, const VectorXd& p) {
  if (k_u < 0) throw DomainError("uniformity factor must be non-negative");
  std::vector<int> caps(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) caps[i] = p(i) > 0.0 ? k_u : 0;
  ConstraintSpec spec(std::move(caps));
  spec.uniform_factor_ = k_u;
  return spec;
}

int ConstraintSpec::max_cap() const { return *std::max_element(caps_.begin(), caps_.end()); }

long ConstraintSpec::cap_sum() const {
  return std::accumulate(caps_.begin(), caps_.end(), 0L);
}

void ConstraintSpec::validate(int n_s, const VectorXd& p) const {
  if (static_cast<Eigen::Index>(caps_.size()) != p.size()) {
    throw DimensionError("one cap per candidate is required");
  }
  if (n_s < max_cap() || n_s > cap_sum()) {
    throw DomainError("n_s = " + std::to_string(n_s) + " must lie in [k_max, k_sum] = [" +
                      std::to_string(max_cap()) + ", " + std::to_string(cap_sum()) + "]");
  }
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) == 0.0 && caps_[i] != 0) {
      throw DomainError("cap of candidate " + std::to_string(i + 1) +
                        " must be 0 because its probability is 0");
    }
  }
}

bool ConstraintSpec::satisfied_by(const std::vector<int>& indices) const {
  std::vector<int> counts(caps_.size(), 0);
  for (int i : indices) {
    if (++counts.at(i) > caps_[i]) return false;
  }
  return true;
}

double alpha(const ConstraintSpec& spec, int n_s, const VectorXd& p) {
  validate_distribution(p, static_cast<int>(spec.caps().size()));
  spec.validate(n_s, p);
  // Σ_j P[Bin(n_s, p_j) > k_j] with Kahan summation over all terms.
  double sum = 0.0, comp = 0.0;
  auto add = [&](double v) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  };
  const double log_n_fact = std::lgamma(n_s + 1.0);
  for (Eigen::Index j = 0; j < p.size(); ++j) {
    const int k = spec.caps()[j];
    const double pj = p(j);
    if (k >= n_s || pj == 0.0) continue;
    if (pj == 1.0) {
      add(1.0);
      continue;
    }
    const double lp = std::log(pj), lq = std::log1p(-pj);
    for (int i = k + 1; i <= n_s; ++i) {
      add(std::exp(log_n_fact - std::lgamma(i + 1.0) - std::lgamma(n_s - i + 1.0) +
                   i * lp + (n_s - i) * lq));
    }
  }
  return 1.0 - sum;
}

ConstrainedFloors constrained_floors(double alpha, double delta) {
  require_delta(delta);
  if (std::isnan(alpha) || alpha > 1.0 + 1e-15) throw DomainError("alpha must not exceed 1");
  alpha = std::min(alpha, 1.0);
  if (alpha <= 0.0) {
    return ConstrainedFloors{0.0, 0.0, std::numeric_limits<double>::infinity(), true};
  }
  return ConstrainedFloors{clamp_phi(alpha - delta), clamp_phi(1.0 - delta / alpha),
                           1.0 / alpha, false};
}

}  // namespace randsel
