#include "randsel/matrix_core.hpp"

#include <cmath>
#include <string>

#include "randsel/errors.hpp"

namespace randsel {
namespace {

void require_finite(const Eigen::MatrixXd& m, const char* what) {
  if (!m.allFinite()) {
    throw InvalidInputError(std::string(what) + ": non-finite entry");
  }
}

void require_same_order(const SymmetricMatrix& a, const SymmetricMatrix& b) {
  if (a.order() != b.order()) {
    throw DimensionError("order mismatch: " + std::to_string(a.order()) +
                         " vs " + std::to_string(b.order()));
  }
}

Eigen::VectorXd eigenvalues(const SymmetricMatrix& m) {
  require_finite(m.matrix(), "eigenvalue");
  if (m.order() == 0) throw DimensionError("empty matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.matrix(),
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Eigen::MatrixXd mirror_lower(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd out = m.triangularView<Eigen::Lower>();
  out.triangularView<Eigen::StrictlyUpper>() =
      m.triangularView<Eigen::StrictlyLower>().transpose();
  return out;
}

Eigen::MatrixXd inverse_pd_raw(const Eigen::MatrixXd& m, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success || !(llt.rcond() > 1e-15)) {
    throw SingularityError(std::string(what) +
                           ": matrix is numerically singular");
  }
  return llt.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols()));
}

}  // namespace

SymmetricMatrix::SymmetricMatrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) {
    throw DimensionError("symmetric matrix must be square");
  }
  m_ = mirror_lower(m);
}

SymmetricMatrix SymmetricMatrix::Identity(int order) {
  return SymmetricMatrix(Eigen::MatrixXd::Identity(order, order));
}

SymmetricMatrix SymmetricMatrix::Zero(int order) {
  return SymmetricMatrix(Eigen::MatrixXd::Zero(order, order));
}

SymmetricMatrix SymmetricMatrix::Diagonal(const Eigen::VectorXd& d) {
  return SymmetricMatrix(Eigen::MatrixXd(d.asDiagonal()));
}

SymmetricMatrix SymmetricMatrix::Outer(const Eigen::VectorXd& v,
                                       double weight) {
  return SymmetricMatrix(weight * v * v.transpose());
}

SymmetricMatrix& SymmetricMatrix::operator+=(const SymmetricMatrix& other) {
  require_same_order(*this, other);
  m_ += other.m_;
  return *this;
}

SymmetricMatrix& SymmetricMatrix::operator-=(const SymmetricMatrix& other) {
  require_same_order(*this, other);
  m_ -= other.m_;
  return *this;
}

SymmetricMatrix& SymmetricMatrix::operator*=(double s) {
  m_ *= s;
  return *this;
}

SymmetricMatrix operator+(SymmetricMatrix a, const SymmetricMatrix& b) {
  return a += b;
}
SymmetricMatrix operator-(SymmetricMatrix a, const SymmetricMatrix& b) {
  return a -= b;
}
SymmetricMatrix operator*(double s, SymmetricMatrix a) { return a *= s; }

PsdMatrix::PsdMatrix(SymmetricMatrix base) : base_(std::move(base)) {
  if (!is_psd(base_)) {
    throw InvalidInputError("matrix is not positive semidefinite");
  }
}

PsdMatrix PsdMatrix::Trusted(SymmetricMatrix base) {
  PsdMatrix out;
  out.base_ = std::move(base);
  return out;
}

double min_eigenvalue(const SymmetricMatrix& m) { return eigenvalues(m)(0); }

double max_eigenvalue(const SymmetricMatrix& m) {
  const Eigen::VectorXd ev = eigenvalues(m);
  return ev(ev.size() - 1);
}

double psd_tolerance(const SymmetricMatrix& m) {
  const Eigen::VectorXd ev = eigenvalues(m);
  return 1e-9 * (1.0 + ev.cwiseAbs().maxCoeff());
}

bool is_psd(const SymmetricMatrix& m) {
  const Eigen::VectorXd ev = eigenvalues(m);
  return ev(0) >= -1e-9 * (1.0 + ev.cwiseAbs().maxCoeff());
}

bool loewner_leq(const SymmetricMatrix& a, const SymmetricMatrix& b,
                 double tol) {
  require_same_order(a, b);
  return min_eigenvalue(b - a) >= -tol;
}

SymmetricMatrix pseudo_inverse(const SymmetricMatrix& m) {
  require_finite(m.matrix(), "pseudo_inverse");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.matrix());
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double cutoff = kRankCutoff * ev.cwiseAbs().maxCoeff();
  Eigen::VectorXd inv(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    inv(i) = std::abs(ev(i)) > cutoff ? 1.0 / ev(i) : 0.0;
  }
  const Eigen::MatrixXd& v = es.eigenvectors();
  return SymmetricMatrix(v * inv.asDiagonal() * v.transpose());
}

SymmetricMatrix inverse_pd(const SymmetricMatrix& m) {
  require_finite(m.matrix(), "inverse");
  return SymmetricMatrix(inverse_pd_raw(m.matrix(), "inverse"));
}

SymmetricMatrix symmetric_sqrt(const SymmetricMatrix& m) {
  require_finite(m.matrix(), "symmetric_sqrt");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.matrix());
  const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd& v = es.eigenvectors();
  return SymmetricMatrix(v * root.asDiagonal() * v.transpose());
}

PsdMatrix f1(const PsdMatrix& lambda, const Eigen::MatrixXd& xi,
             const PsdMatrix& gamma) {
  if (xi.cols() != lambda.order() || xi.rows() != gamma.order()) {
    throw DimensionError("f1: incompatible shapes");
  }
  const Eigen::MatrixXd& l = lambda.matrix();
  const Eigen::MatrixXd xl = xi * l;
  const Eigen::MatrixXd inner = gamma.matrix() + xl * xi.transpose();
  Eigen::LLT<Eigen::MatrixXd> llt(inner);
  if (llt.info() != Eigen::Success || !(llt.rcond() > 1e-15)) {
    throw SingularityError("f1: Γ + ΞΛΞᵀ is numerically singular");
  }
  return PsdMatrix::Trusted(
      SymmetricMatrix(l - xl.transpose() * llt.solve(xl)));
}

PsdMatrix f4(const PsdMatrix& lambda, const Eigen::MatrixXd& a,
             const PsdMatrix& q) {
  if (a.rows() != a.cols() || a.rows() != lambda.order() ||
      q.order() != lambda.order()) {
    throw DimensionError("f4: incompatible shapes");
  }
  return PsdMatrix::Trusted(
      SymmetricMatrix(a * lambda.matrix() * a.transpose() + q.matrix()));
}

PsdMatrix f2(const PsdMatrix& lambda, const PsdMatrix& theta,
             const Eigen::MatrixXd& a, const PsdMatrix& q) {
  if (theta.order() != lambda.order()) {
    throw DimensionError("f2: Θ has the wrong order");
  }
  const PsdMatrix pred = f4(lambda, a, q);
  const Eigen::MatrixXd info =
      inverse_pd_raw(pred.matrix(), "f2: AΛAᵀ + Q") + theta.matrix();
  return PsdMatrix::Trusted(
      SymmetricMatrix(inverse_pd_raw(SymmetricMatrix(info).matrix(), "f2")));
}

PsdMatrix f3(const PsdMatrix& lambda, const Eigen::MatrixXd& xi,
             const PsdMatrix& gamma) {
  if (xi.cols() != lambda.order() || xi.rows() != gamma.order()) {
    throw DimensionError("f3: incompatible shapes");
  }
  const Eigen::MatrixXd linv = inverse_pd_raw(lambda.matrix(), "f3: Λ");
  const Eigen::MatrixXd ginv = inverse_pd_raw(gamma.matrix(), "f3: Γ");
  const SymmetricMatrix info(linv + xi.transpose() * ginv * xi);
  return PsdMatrix::Trusted(SymmetricMatrix(inverse_pd_raw(info.matrix(), "f3")));
}

double f5(int n, int k, double p) {
  if (n < 0 || k < 0) throw DomainError("f5: negative count");
  if (k > n) {
    throw DomainError("f5: k exceeds the sample size (n_s must lie in [k_m, k_sum])");
  }
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("f5: p outside [0, 1]");
  if (p == 0.0) return k == 0 ? 1.0 : 0.0;
  if (p == 1.0) return k == n ? 1.0 : 0.0;
  const double log_choose =
      std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  return std::exp(log_choose + k * std::log(p) + (n - k) * std::log1p(-p));
}

double clamp_phi(double gamma) {
  if (std::isnan(gamma)) throw InvalidInputError("clamp_phi: NaN argument");
  if (gamma > 1.0) throw DomainError("clamp_phi: argument exceeds 1");
  return gamma < 0.0 ? 0.0 : gamma;
}

}  // namespace randsel
