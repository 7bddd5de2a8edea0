#pragma once

#include <Eigen/Dense>

namespace randsel {

inline constexpr double kDefaultLoewnerTolerance = 1e-8;
// Singular values below kRankCutoff times the largest are treated as zero.
inline constexpr double kRankCutoff = 1e-10;

// Dense real symmetric matrix. The lower triangle of the construction
// argument is authoritative; the upper triangle is mirrored from it, so
// entries are exactly symmetric.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(const Eigen::MatrixXd& m);

  static SymmetricMatrix Identity(int order);
  static SymmetricMatrix Zero(int order);
  static SymmetricMatrix Diagonal(const Eigen::VectorXd& d);
  // v v^T scaled by `weight`.
  static SymmetricMatrix Outer(const Eigen::VectorXd& v, double weight = 1.0);

  int order() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  SymmetricMatrix& operator+=(const SymmetricMatrix& other);
  SymmetricMatrix& operator-=(const SymmetricMatrix& other);
  SymmetricMatrix& operator*=(double s);

 private:
  Eigen::MatrixXd m_;
};

SymmetricMatrix operator+(SymmetricMatrix a, const SymmetricMatrix& b);
SymmetricMatrix operator-(SymmetricMatrix a, const SymmetricMatrix& b);
SymmetricMatrix operator*(double s, SymmetricMatrix a);

// A symmetric matrix whose smallest eigenvalue is at least -psd_tolerance().
class PsdMatrix {
 public:
  PsdMatrix() = default;
  // Throws InvalidInputError if the matrix is not PSD within tolerance.
  explicit PsdMatrix(SymmetricMatrix base);
  // Skips the eigenvalue check. For results that are PSD by construction.
  static PsdMatrix Trusted(SymmetricMatrix base);

  const SymmetricMatrix& base() const { return base_; }
  const Eigen::MatrixXd& matrix() const { return base_.matrix(); }
  int order() const { return base_.order(); }
  double operator()(int i, int j) const { return base_(i, j); }
  operator const SymmetricMatrix&() const { return base_; }

 private:
  SymmetricMatrix base_;
};

double min_eigenvalue(const SymmetricMatrix& m);
double max_eigenvalue(const SymmetricMatrix& m);
double psd_tolerance(const SymmetricMatrix& m);
bool is_psd(const SymmetricMatrix& m);

// a ⪯ b, i.e. λ_min(b - a) >= -tol.
bool loewner_leq(const SymmetricMatrix& a, const SymmetricMatrix& b,
                 double tol = kDefaultLoewnerTolerance);

SymmetricMatrix pseudo_inverse(const SymmetricMatrix& m);
// Inverse of a positive definite matrix; SingularityError otherwise.
SymmetricMatrix inverse_pd(const SymmetricMatrix& m);
// Principal square root; negative eigenvalues are clamped to zero first.
SymmetricMatrix symmetric_sqrt(const SymmetricMatrix& m);

// Λ - ΛΞᵀ(Γ + ΞΛΞᵀ)⁻¹ΞΛ
PsdMatrix f1(const PsdMatrix& lambda, const Eigen::MatrixXd& xi,
             const PsdMatrix& gamma);
// ((AΛAᵀ + Q)⁻¹ + Θ)⁻¹
PsdMatrix f2(const PsdMatrix& lambda, const PsdMatrix& theta,
             const Eigen::MatrixXd& a, const PsdMatrix& q);
// (Λ⁻¹ + ΞᵀΓ⁻¹Ξ)⁻¹
PsdMatrix f3(const PsdMatrix& lambda, const Eigen::MatrixXd& xi,
             const PsdMatrix& gamma);
// AΛAᵀ + Q
PsdMatrix f4(const PsdMatrix& lambda, const Eigen::MatrixXd& a,
             const PsdMatrix& q);
// Binomial probability mass C(n, k) p^k (1-p)^(n-k).
double f5(int n, int k, double p);
// Φ(γ) = max(γ, 0) for γ <= 1.
double clamp_phi(double gamma);

}  // namespace randsel
