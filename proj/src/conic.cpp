#include "randsel/conic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "randsel/errors.hpp"

namespace randsel::conic {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
constexpr double kInf = std::numeric_limits<double>::infinity();

MatrixXd sym(const MatrixXd& m) { return 0.5 * (m + m.transpose()); }
double inner(const MatrixXd& a, const MatrixXd& b) { return a.cwiseProduct(b).sum(); }

MatrixXd apply_terms(const LmiFamily& f, const VectorXd& y) {
  MatrixXd out = MatrixXd::Zero(f.dim, f.dim);
  for (const auto& [k, coef] : f.terms) {
    if (y(k) != 0.0) out.noalias() += y(k) * coef;
  }
  return out;
}

// h[var_t, var_u] += Σ_j tr(F_t L_j F_u R_j).
void add_schur(const LmiFamily& f, const std::vector<MatrixXd>& left,
               const std::vector<MatrixXd>& right, MatrixXd& h) {
  const int d = f.dim;
  const int nt = static_cast<int>(f.terms.size());
  if (nt == 0) return;
  MatrixXd local(nt, nt);
  if (d <= 16) {
    MatrixXd kron = MatrixXd::Zero(d * d, d * d);
    for (std::size_t j = 0; j < left.size(); ++j) {
      for (int l = 0; l < d; ++l) {
        for (int k = 0; k < d; ++k) {
          const double r = right[j](k, l);
          if (r != 0.0) kron.block(k * d, l * d, d, d) += r * left[j];
        }
      }
    }
    MatrixXd v(nt, d * d);
    for (int t = 0; t < nt; ++t) {
      v.row(t) = Eigen::Map<const Eigen::RowVectorXd>(f.terms[t].second.data(), d * d);
    }
    local.noalias() = v * kron * v.transpose();
  } else {
    local.setZero();
    for (std::size_t j = 0; j < left.size(); ++j) {
      for (int t = 0; t < nt; ++t) {
        const MatrixXd w = left[j] * f.terms[t].second * right[j];
        for (int u = t; u < nt; ++u) local(t, u) += inner(f.terms[u].second, w);
      }
    }
    local.triangularView<Eigen::StrictlyLower>() =
        local.triangularView<Eigen::StrictlyUpper>().transpose();
  }
  for (int t = 0; t < nt; ++t) {
    for (int u = 0; u < nt; ++u) {
      h(f.terms[t].first, f.terms[u].first) += local(t, u);
    }
  }
}

// 𝓕(W)_k = Σ_j ⟨F_k, W_j⟩ over one family, accumulated into out.
void add_adjoint(const LmiFamily& f, const std::vector<MatrixXd>& w, VectorXd& out) {
  if (f.terms.empty()) return;
  MatrixXd total = MatrixXd::Zero(f.dim, f.dim);
  for (const auto& wj : w) total += wj;
  for (const auto& [k, coef] : f.terms) out(k) += inner(coef, total);
}

// Largest α with M + αΔ ⪰ 0, for M ≻ 0.
double max_step(const MatrixXd& m, const MatrixXd& delta) {
  Eigen::LLT<MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) return 0.0;
  MatrixXd w = llt.matrixL().solve(delta);
  w = llt.matrixL().solve(w.transpose()).transpose();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym(w), Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues()(0);
  return lo < 0.0 ? -1.0 / lo : kInf;
}

double max_step(const VectorXd& v, const VectorXd& dv) {
  double a = kInf;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (dv(i) < 0.0) a = std::min(a, -v(i) / dv(i));
  }
  return a;
}

VectorXd solve_spd(MatrixXd m, const VectorXd& rhs) {
  const double scale = 1.0 + m.diagonal().cwiseAbs().maxCoeff();
  double reg = 0.0;
  for (int attempt = 0; attempt < 6; ++attempt) {
    Eigen::LLT<MatrixXd> llt(m);
    if (llt.info() == Eigen::Success) return llt.solve(rhs);
    const double next = reg == 0.0 ? 1e-14 * scale : reg * 100.0;
    m.diagonal().array() += next - reg;
    reg = next;
  }
  return Eigen::LDLT<MatrixXd>(m).solve(rhs);
}

using Blocks = std::vector<std::vector<MatrixXd>>;

struct PrimalDual {
  Blocks x, s;
  VectorXd xl, sl;
  VectorXd y;
};

double blocks_norm(const Blocks& b, const VectorXd& l) {
  double sq = l.squaredNorm();
  for (const auto& fam : b) {
    for (const auto& m : fam) sq += m.squaredNorm();
  }
  return std::sqrt(sq);
}

}  // namespace

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kNearOptimal: return "near_optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kIterationLimit: return "iteration_limit";
    case SolveStatus::kNumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

ConicProblem::ConicProblem(int num_variables)
    : n_(num_variables),
      b_(VectorXd::Zero(num_variables)),
      h_(0),
      g_(0, num_variables) {
  if (num_variables < 1) throw InvalidInputError("problem needs a variable");
}

void ConicProblem::set_objective(VectorXd b) {
  if (b.size() != n_) throw DimensionError("objective length mismatch");
  b_ = std::move(b);
}

void ConicProblem::add_lmi_family(LmiFamily family) {
  if (family.dim < 1 || family.constants.empty()) {
    throw InvalidInputError("LMI family needs a positive dimension and a copy");
  }
  for (auto& c : family.constants) {
    if (c.rows() != family.dim || c.cols() != family.dim) {
      throw DimensionError("LMI constant has the wrong size");
    }
    c = sym(c);
  }
  std::map<int, MatrixXd> merged;
  for (auto& [k, coef] : family.terms) {
    if (k < 0 || k >= n_) throw DimensionError("LMI term references unknown variable");
    if (coef.rows() != family.dim || coef.cols() != family.dim) {
      throw DimensionError("LMI coefficient has the wrong size");
    }
    auto [it, fresh] = merged.emplace(k, sym(coef));
    if (!fresh) it->second += sym(coef);
  }
  family.terms.assign(merged.begin(), merged.end());
  families_.push_back(std::move(family));
}

void ConicProblem::add_lmi(MatrixXd constant,
                           std::vector<std::pair<int, MatrixXd>> terms) {
  LmiFamily f;
  f.dim = static_cast<int>(constant.rows());
  f.constants.push_back(std::move(constant));
  f.terms = std::move(terms);
  add_lmi_family(std::move(f));
}

void ConicProblem::add_linear(double h,
                              const std::vector<std::pair<int, double>>& g) {
  for (const auto& [k, v] : g) {
    if (k < 0 || k >= n_) throw DimensionError("linear row references unknown variable");
  }
  const Eigen::Index r = h_.size();
  h_.conservativeResize(r + 1);
  h_(r) = h;
  g_.conservativeResize(r + 1, n_);
  g_.row(r).setZero();
  for (const auto& [k, v] : g) g_(r, k) += v;
}

int ConicProblem::cone_order() const {
  int n = num_linear();
  for (const auto& f : families_) n += f.dim * static_cast<int>(f.constants.size());
  return n;
}

MatrixXd ConicProblem::lmi_slack(int family, int copy, const VectorXd& y) const {
  const auto& f = families_.at(family);
  return f.constants.at(copy) + apply_terms(f, y);
}

double ConicProblem::min_slack(const VectorXd& y) const {
  double lo = kInf;
  for (const auto& f : families_) {
    const MatrixXd g = apply_terms(f, y);
    for (const auto& c : f.constants) {
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym(c + g), Eigen::EigenvaluesOnly);
      lo = std::min(lo, es.eigenvalues()(0));
    }
  }
  if (num_linear() > 0) lo = std::min(lo, (h_ + g_ * y).minCoeff());
  return lo;
}

ConicSolution solve_interior_point(const ConicProblem& problem,
                                   const SolverOptions& options) {
  const auto& fams = problem.families();
  const int n = problem.num_variables();
  const VectorXd& b = problem.objective();
  const VectorXd& h = problem.linear_constant();
  const MatrixXd& g = problem.linear_matrix();
  const int big_n = problem.cone_order();
  const double tau = 0.98;

  double c_norm = h.squaredNorm();
  for (const auto& f : fams) {
    for (const auto& c : f.constants) c_norm += c.squaredNorm();
  }
  c_norm = std::sqrt(c_norm);
  const double b_norm = b.norm();

  PrimalDual z;
  z.y = VectorXd::Zero(n);
  for (const auto& f : fams) {
    const double d = f.dim;
    double xi = std::max(10.0, std::sqrt(d));
    double eta = xi;
    for (const auto& [k, coef] : f.terms) {
      xi = std::max(xi, d * (1.0 + std::abs(b(k))) / (1.0 + coef.norm()));
      eta = std::max(eta, coef.norm());
    }
    for (const auto& c : f.constants) eta = std::max(eta, c.norm());
    z.x.emplace_back(f.constants.size(), xi * MatrixXd::Identity(f.dim, f.dim));
    z.s.emplace_back(f.constants.size(), eta * MatrixXd::Identity(f.dim, f.dim));
  }
  {
    double xi = 10.0, eta = std::max(10.0, h.size() ? h.cwiseAbs().maxCoeff() : 0.0);
    for (int k = 0; k < n && h.size(); ++k) {
      const double gn = g.col(k).norm();
      xi = std::max(xi, (1.0 + std::abs(b(k))) / (1.0 + gn));
      eta = std::max(eta, gn);
    }
    z.xl = VectorXd::Constant(h.size(), xi);
    z.sl = VectorXd::Constant(h.size(), eta);
  }

  ConicSolution sol;
  auto finish = [&](SolveStatus st, int it, double pinf, double dinf, double gap) {
    sol.status = st;
    sol.y = z.y;
    sol.objective = b.dot(z.y);
    sol.iterations = it;
    sol.primal_infeasibility = pinf;
    sol.dual_infeasibility = dinf;
    sol.relative_gap = gap;
    return sol;
  };

  const std::size_t nf = fams.size();
  for (int it = 0; it <= options.max_iterations; ++it) {
    Blocks sinv(nf), rd(nf);
    VectorXd rdl = h + g * z.y - z.sl;
    double pobj = h.dot(z.xl);
    double xs = z.xl.dot(z.sl);
    VectorXd fx = g.transpose() * z.xl;
    bool broken = false;
    for (std::size_t f = 0; f < nf; ++f) {
      const MatrixXd gy = apply_terms(fams[f], z.y);
      std::vector<MatrixXd> xs_blocks;
      for (std::size_t j = 0; j < fams[f].constants.size(); ++j) {
        Eigen::LLT<MatrixXd> llt(z.s[f][j]);
        if (llt.info() != Eigen::Success) {
          broken = true;
          break;
        }
        sinv[f].push_back(sym(llt.solve(MatrixXd::Identity(fams[f].dim, fams[f].dim))));
        rd[f].push_back(fams[f].constants[j] + gy - z.s[f][j]);
        pobj += inner(fams[f].constants[j], z.x[f][j]);
        xs += inner(z.x[f][j], z.s[f][j]);
      }
      if (broken) break;
      add_adjoint(fams[f], z.x[f], fx);
    }
    const VectorXd rp = -b - fx;
    const double dobj = b.dot(z.y);
    const double mu = xs / big_n;
    const double pinf = rp.norm() / (1.0 + b_norm);
    const double dinf = blocks_norm(rd, rdl) / (1.0 + c_norm);
    const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    if (broken) {
      return finish(SolveStatus::kNumericalFailure, it, pinf, dinf, gap);
    }
    if (pinf <= options.feasibility_tolerance && dinf <= options.feasibility_tolerance &&
        gap <= options.gap_tolerance) {
      return finish(SolveStatus::kOptimal, it, pinf, dinf, gap);
    }
    // Ray certificates. Primal ray: X ⪰ 0, 𝓕(X) ≈ 0, ⟨C, X⟩ < 0.
    if (pobj < 0.0 && fx.norm() <= 1e-8 * -pobj && -pobj > 1e6) {
      return finish(SolveStatus::kInfeasible, it, pinf, dinf, gap);
    }
    if (dobj > 1e6) {
      const double ray = blocks_norm(rd, rdl) + c_norm;
      if (ray <= 1e-8 * dobj) return finish(SolveStatus::kUnbounded, it, pinf, dinf, gap);
    }
    if (it == options.max_iterations) {
      const bool near = pinf <= 1e-6 && dinf <= 1e-6 && gap <= 1e-6;
      return finish(near ? SolveStatus::kNearOptimal : SolveStatus::kIterationLimit, it,
                    pinf, dinf, gap);
    }

    MatrixXd m = MatrixXd::Zero(n, n);
    for (std::size_t f = 0; f < nf; ++f) add_schur(fams[f], z.x[f], sinv[f], m);
    if (h.size()) {
      m.noalias() += g.transpose() * (z.xl.cwiseQuotient(z.sl)).asDiagonal() * g;
    }

    // Returns (Δy, ΔX, ΔS, Δx, Δs) for centering σμ and corrector terms.
    struct Direction {
      VectorXd dy;
      Blocks dx, ds;
      VectorXd dxl, dsl;
    };
    auto direction = [&](double sigma_mu, const Blocks* corr, const VectorXd* corrl) {
      Direction d;
      VectorXd rhs = b;
      Blocks w(nf);
      for (std::size_t f = 0; f < nf; ++f) {
        for (std::size_t j = 0; j < fams[f].constants.size(); ++j) {
          MatrixXd wj = sigma_mu * sinv[f][j] - z.x[f][j] * rd[f][j] * sinv[f][j];
          if (corr) wj -= (*corr)[f][j] * sinv[f][j];
          w[f].push_back(std::move(wj));
        }
        add_adjoint(fams[f], w[f], rhs);
      }
      VectorXd wl = VectorXd::Zero(h.size());
      if (h.size()) {
        wl = (sigma_mu - z.xl.cwiseProduct(rdl).array()).matrix().cwiseQuotient(z.sl);
        if (corrl) wl -= corrl->cwiseQuotient(z.sl);
        rhs += g.transpose() * wl;
      }
      d.dy = solve_spd(m, rhs);
      d.dx.resize(nf);
      d.ds.resize(nf);
      for (std::size_t f = 0; f < nf; ++f) {
        const MatrixXd gdy = apply_terms(fams[f], d.dy);
        for (std::size_t j = 0; j < fams[f].constants.size(); ++j) {
          MatrixXd ds = gdy + rd[f][j];
          MatrixXd dx = sigma_mu * sinv[f][j] - z.x[f][j] - z.x[f][j] * ds * sinv[f][j];
          if (corr) dx -= (*corr)[f][j] * sinv[f][j];
          d.dx[f].push_back(sym(dx));
          d.ds[f].push_back(std::move(ds));
        }
      }
      if (h.size()) {
        d.dsl = g * d.dy + rdl;
        d.dxl = (sigma_mu - z.xl.cwiseProduct(z.sl + d.dsl).array()).matrix().cwiseQuotient(z.sl);
        if (corrl) d.dxl -= corrl->cwiseQuotient(z.sl);
      } else {
        d.dsl = d.dxl = VectorXd(0);
      }
      return d;
    };
    auto steps = [&](const Direction& d) {
      double ap = max_step(z.xl, d.dxl), ad = max_step(z.sl, d.dsl);
      for (std::size_t f = 0; f < nf; ++f) {
        for (std::size_t j = 0; j < fams[f].constants.size(); ++j) {
          ap = std::min(ap, max_step(z.x[f][j], d.dx[f][j]));
          ad = std::min(ad, max_step(z.s[f][j], d.ds[f][j]));
        }
      }
      return std::pair{ap, ad};
    };

    const Direction aff = direction(0.0, nullptr, nullptr);
    auto [ap_a, ad_a] = steps(aff);
    ap_a = std::min(1.0, ap_a);
    ad_a = std::min(1.0, ad_a);
    double xs_aff = (z.xl + ap_a * aff.dxl).dot(z.sl + ad_a * aff.dsl);
    Blocks corr(nf);
    for (std::size_t f = 0; f < nf; ++f) {
      for (std::size_t j = 0; j < fams[f].constants.size(); ++j) {
        xs_aff += inner(z.x[f][j] + ap_a * aff.dx[f][j], z.s[f][j] + ad_a * aff.ds[f][j]);
        corr[f].push_back(aff.dx[f][j] * aff.ds[f][j]);
      }
    }
    const VectorXd corrl = aff.dxl.cwiseProduct(aff.dsl);
    const double sigma = std::clamp(std::pow(std::max(xs_aff, 0.0) / big_n / mu, 3.0), 0.0, 1.0);
    const Direction d = direction(sigma * mu, &corr, &corrl);
    auto [ap, ad] = steps(d);
    ap = std::min(1.0, tau * ap);
    ad = std::min(1.0, tau * ad);
    if (ap < 1e-12 && ad < 1e-12) {
      const bool near = pinf <= 1e-6 && dinf <= 1e-6 && gap <= 1e-6;
      return finish(near ? SolveStatus::kNearOptimal : SolveStatus::kNumericalFailure, it,
                    pinf, dinf, gap);
    }
    z.y += ad * d.dy;
    if (h.size()) {
      z.xl += ap * d.dxl;
      z.sl += ad * d.dsl;
    }
    for (std::size_t f = 0; f < nf; ++f) {
      for (std::size_t j = 0; j < fams[f].constants.size(); ++j) {
        z.x[f][j] = sym(z.x[f][j] + ap * d.dx[f][j]);
        z.s[f][j] = sym(z.s[f][j] + ad * d.ds[f][j]);
      }
    }
  }
  return sol;  // unreachable
}

namespace {

// Barrier value, gradient and Hessian of
//   φ(y) = -t bᵀy - Σ log det S_j(y) - Σ log s_r(y).
struct BarrierPoint {
  bool interior = false;
  double value = 0.0;
};

BarrierPoint barrier_value(const ConicProblem& p, const VectorXd& y, double t) {
  BarrierPoint out;
  double v = -t * p.objective().dot(y);
  for (const auto& f : p.families()) {
    const MatrixXd gy = apply_terms(f, y);
    for (const auto& c : f.constants) {
      Eigen::LLT<MatrixXd> llt(sym(c + gy));
      if (llt.info() != Eigen::Success) return out;
      const auto diag = llt.matrixLLT().diagonal();
      if ((diag.array() <= 0.0).any()) return out;
      v -= 2.0 * diag.array().log().sum();
    }
  }
  if (p.num_linear() > 0) {
    const VectorXd s = p.linear_constant() + p.linear_matrix() * y;
    if ((s.array() <= 0.0).any()) return out;
    v -= s.array().log().sum();
  }
  out.interior = std::isfinite(v);
  out.value = v;
  return out;
}

enum class PathEnd { kConverged, kStopped, kUnbounded, kStalled };

PathEnd follow_path(const ConicProblem& p, VectorXd& y, double& t,
                    const SolverOptions& options, int& newton_steps,
                    const std::function<bool(const VectorXd&)>& stop) {
  const int n = p.num_variables();
  const int big_n = p.cone_order();
  const VectorXd& b = p.objective();
  for (int outer = 0; outer < 80; ++outer) {
    for (int inner_it = 0; inner_it < 300; ++inner_it) {
      VectorXd grad = -t * b;
      MatrixXd hess = MatrixXd::Zero(n, n);
      for (const auto& f : p.families()) {
        const MatrixXd gy = apply_terms(f, y);
        std::vector<MatrixXd> sinv;
        for (const auto& c : f.constants) {
          Eigen::LLT<MatrixXd> llt(sym(c + gy));
          sinv.push_back(sym(llt.solve(MatrixXd::Identity(f.dim, f.dim))));
        }
        std::vector<MatrixXd> neg(sinv.size());
        for (std::size_t j = 0; j < sinv.size(); ++j) neg[j] = -sinv[j];
        add_adjoint(f, neg, grad);
        add_schur(f, sinv, sinv, hess);
      }
      if (p.num_linear() > 0) {
        const VectorXd s = p.linear_constant() + p.linear_matrix() * y;
        const VectorXd inv = s.cwiseInverse();
        grad -= p.linear_matrix().transpose() * inv;
        hess.noalias() += p.linear_matrix().transpose() * inv.cwiseAbs2().asDiagonal() *
                          p.linear_matrix();
      }
      const VectorXd dy = solve_spd(hess, -grad);
      const double dec2 = -grad.dot(dy);
      if (!(dec2 > 2e-10)) break;
      const BarrierPoint here = barrier_value(p, y, t);
      double alpha = 1.0;
      BarrierPoint trial;
      for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
        trial = barrier_value(p, y + alpha * dy, t);
        if (trial.interior && trial.value <= here.value - 0.25 * alpha * dec2) break;
      }
      if (!trial.interior) return PathEnd::kStalled;
      y += alpha * dy;
      ++newton_steps;
      if (stop && stop(y)) return PathEnd::kStopped;
      if (alpha < 1e-12) break;
    }
    const double obj = b.dot(y);
    if (obj > 1e12) return PathEnd::kUnbounded;
    if (big_n / t <= options.gap_tolerance * std::max(1.0, std::abs(obj))) {
      return PathEnd::kConverged;
    }
    t *= 10.0;
  }
  return PathEnd::kStalled;
}

}  // namespace

ConicSolution solve_barrier(const ConicProblem& problem,
                            const SolverOptions& options) {
  const int n = problem.num_variables();
  // Box |y_k| <= R keeps the analytic centers well defined when the feasible
  // set is unbounded in directions the objective ignores.
  constexpr double kBox = 1e7;
  ConicProblem boxed = problem;
  for (int k = 0; k < n; ++k) {
    boxed.add_linear(kBox, {{k, 1.0}});
    boxed.add_linear(kBox, {{k, -1.0}});
  }
  ConicSolution sol;
  sol.y = VectorXd::Zero(n);
  int steps = 0;

  // Phase one: maximize -s subject to S_j(y) + s I ⪰ 0, h + Gy + s >= 0.
  if (!(boxed.min_slack(sol.y) > 1e-9)) {
    ConicProblem aux(n + 1);
    VectorXd b = VectorXd::Zero(n + 1);
    b(n) = -1.0;
    aux.set_objective(b);
    for (const auto& f : boxed.families()) {
      LmiFamily g = f;
      g.terms.emplace_back(n, MatrixXd::Identity(f.dim, f.dim));
      aux.add_lmi_family(std::move(g));
    }
    for (int r = 0; r < boxed.num_linear(); ++r) {
      std::vector<std::pair<int, double>> row{{n, 1.0}};
      for (int k = 0; k < n; ++k) {
        const double v = boxed.linear_matrix()(r, k);
        if (v != 0.0) row.emplace_back(k, v);
      }
      aux.add_linear(boxed.linear_constant()(r), row);
    }
    aux.add_linear(kBox, {{n, 1.0}});
    aux.add_linear(kBox, {{n, -1.0}});
    VectorXd y = VectorXd::Zero(n + 1);
    y(n) = std::max(0.0, -boxed.min_slack(sol.y)) + 1.0;
    double t = 1.0;
    const PathEnd end = follow_path(aux, y, t, options, steps, [&](const VectorXd& v) {
      return v(n) < 0.0 && boxed.min_slack(v.head(n)) > 1e-9;
    });
    if (end != PathEnd::kStopped) {
      sol.status = end == PathEnd::kConverged ? SolveStatus::kInfeasible
                                              : SolveStatus::kNumericalFailure;
      sol.y = y.head(n);
      sol.iterations = steps;
      return sol;
    }
    sol.y = y.head(n);
  }

  const double scale = std::max(1.0, problem.objective().cwiseAbs().maxCoeff());
  double t = 1.0 / scale;
  const PathEnd end = follow_path(boxed, sol.y, t, options, steps, nullptr);
  sol.iterations = steps;
  sol.objective = problem.objective().dot(sol.y);
  sol.relative_gap = boxed.cone_order() / t / (1.0 + std::abs(sol.objective));
  if (sol.y.cwiseAbs().maxCoeff() > 0.5 * kBox) {
    sol.status = SolveStatus::kUnbounded;
    return sol;
  }
  switch (end) {
    case PathEnd::kConverged: sol.status = SolveStatus::kOptimal; break;
    case PathEnd::kUnbounded: sol.status = SolveStatus::kUnbounded; break;
    default:
      sol.status = sol.relative_gap <= 1e-6 ? SolveStatus::kNearOptimal
                                            : SolveStatus::kNumericalFailure;
  }
  return sol;
}

}  // namespace randsel::conic
