#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "randsel/errors.hpp"
#include "randsel/matrix_core.hpp"
#include "properties.hpp"
#include "test_util.hpp"

namespace randsel {
namespace {

using namespace randsel::testing;

TEST(Eigenvalues, IdentityAndDiagonal) {
  EXPECT_DOUBLE_EQ(max_eigenvalue(SymmetricMatrix::Identity(3)), 1.0);
  EXPECT_DOUBLE_EQ(min_eigenvalue(SymmetricMatrix::Identity(3)), 1.0);
  const auto d = SymmetricMatrix::Diagonal(Eigen::Vector2d(2.0, 0.5));
  EXPECT_DOUBLE_EQ(max_eigenvalue(d), 2.0);
  EXPECT_DOUBLE_EQ(min_eigenvalue(d), 0.5);
}

TEST(Eigenvalues, TwoByTwoFromCharacteristicPolynomial) {
  MatrixXd m(2, 2);
  m << 2, 1, 1, 2;
  // (2-x)^2 - 1 = 0  =>  x = 1, 3
  EXPECT_NEAR(max_eigenvalue(SymmetricMatrix(m)), 3.0, 1e-14);
  EXPECT_NEAR(min_eigenvalue(SymmetricMatrix(m)), 1.0, 1e-14);
}

TEST(Eigenvalues, NonFiniteRejected) {
  MatrixXd m = MatrixXd::Identity(2, 2);
  m(1, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(max_eigenvalue(SymmetricMatrix(m)), InvalidInputError);
}

TEST(SymmetricMatrix, MirrorsLowerTriangle) {
  MatrixXd m(2, 2);
  m << 1, 7, 3, 4;
  const SymmetricMatrix s(m);
  EXPECT_EQ(s(0, 1), 3.0);
  EXPECT_EQ(s(1, 0), 3.0);
}

TEST(PsdMatrix, RejectsIndefinite) {
  MatrixXd m(2, 2);
  m << 1, 2, 2, 1;
  EXPECT_THROW(PsdMatrix(SymmetricMatrix(m)), InvalidInputError);
  EXPECT_NO_THROW(PsdMatrix(SymmetricMatrix::Zero(2)));
}

TEST(Loewner, Examples) {
  const auto z = SymmetricMatrix::Zero(2), i = SymmetricMatrix::Identity(2);
  EXPECT_TRUE(loewner_leq(z, i));
  EXPECT_FALSE(loewner_leq(i, z));
  EXPECT_TRUE(loewner_leq(i, i));
  EXPECT_THROW(loewner_leq(i, SymmetricMatrix::Identity(3)), DimensionError);
}

TEST(Loewner, ToleranceIsExplicit) {
  const auto i = SymmetricMatrix::Identity(2);
  const auto j = (1.0 - 1e-9) * SymmetricMatrix::Identity(2);
  EXPECT_TRUE(loewner_leq(i, j));
  EXPECT_FALSE(loewner_leq(i, j, 1e-12));
}

TEST(PseudoInverse, Examples) {
  EXPECT_LT(max_abs_diff(pseudo_inverse(SymmetricMatrix::Identity(2)).matrix(),
                         MatrixXd::Identity(2, 2)),
            1e-15);
  const auto p = pseudo_inverse(SymmetricMatrix::Diagonal(Eigen::Vector2d(2.0, 0.0)));
  EXPECT_NEAR(p(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(p(1, 1), 0.0, 1e-15);
  const auto h = pseudo_inverse(SymmetricMatrix::Diagonal(Eigen::Vector2d(0.5, 0.5)));
  EXPECT_NEAR(h(0, 0), 2.0, 1e-14);
  EXPECT_NEAR(h(1, 1), 2.0, 1e-14);
}

TEST(PseudoInverse, PenroseIdentityOnRandomRankDeficient) {
  std::mt19937_64 g(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 2 + trial % 4;
    const PsdMatrix a = random_psd_rank(g, m, 1 + trial % m);
    const MatrixXd p = pseudo_inverse(a).matrix();
    EXPECT_LT(max_abs_diff(a.matrix() * p * a.matrix(), a.matrix()), 1e-9);
  }
}

TEST(InversePd, SingularThrows) {
  EXPECT_THROW(inverse_pd(SymmetricMatrix::Diagonal(Eigen::Vector2d(1.0, 0.0))),
               SingularityError);
}

TEST(F1, Examples) {
  const PsdMatrix i2 = psd(MatrixXd::Identity(2, 2));
  EXPECT_LT(max_abs_diff(f1(i2, MatrixXd::Zero(1, 2), psd(MatrixXd::Ones(1, 1))).matrix(),
                         MatrixXd::Identity(2, 2)),
            1e-15);
  const PsdMatrix one = psd(MatrixXd::Ones(1, 1));
  EXPECT_NEAR(f1(one, MatrixXd::Ones(1, 1), one)(0, 0), 0.5, 1e-15);
  MatrixXd e1(1, 2);
  e1 << 1, 0;
  const MatrixXd r = f1(i2, e1, one).matrix();
  EXPECT_NEAR(r(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(r(1, 1), 1.0, 1e-15);
  EXPECT_NEAR(r(0, 1), 0.0, 1e-15);
}

TEST(F1, SingularInnerMatrixThrows) {
  const PsdMatrix z = psd(MatrixXd::Zero(1, 1));
  EXPECT_THROW(f1(z, MatrixXd::Ones(1, 1), z), SingularityError);
}

TEST(F2, Examples) {
  std::mt19937_64 g(3);
  const PsdMatrix lam = random_pd(g, 3);
  const MatrixXd a = random_matrix(g, 3, 3);
  const PsdMatrix q = random_pd(g, 3);
  EXPECT_LT(max_abs_diff(f2(lam, psd(MatrixXd::Zero(3, 3)), a, q).matrix(),
                         f4(lam, a, q).matrix()),
            1e-12);
  const PsdMatrix i2 = psd(MatrixXd::Identity(2, 2));
  EXPECT_LT(max_abs_diff(f2(i2, i2, MatrixXd::Zero(2, 2), i2).matrix(),
                         0.5 * MatrixXd::Identity(2, 2)),
            1e-15);
  const PsdMatrix one = psd(MatrixXd::Ones(1, 1));
  EXPECT_NEAR(f2(one, one, MatrixXd::Constant(1, 1, 0.5), psd(MatrixXd::Constant(1, 1, 0.5)))(0, 0),
              3.0 / 7.0, 1e-15);
}

TEST(F3, Examples) {
  const PsdMatrix i2 = psd(MatrixXd::Identity(2, 2));
  EXPECT_LT(max_abs_diff(f3(i2, MatrixXd::Zero(2, 2), i2).matrix(), MatrixXd::Identity(2, 2)),
            1e-15);
  EXPECT_LT(max_abs_diff(f3(i2, MatrixXd::Identity(2, 2), i2).matrix(),
                         0.5 * MatrixXd::Identity(2, 2)),
            1e-15);
  EXPECT_THROW(f3(psd(MatrixXd::Zero(2, 2)), MatrixXd::Identity(2, 2), i2), SingularityError);
}

TEST(F4, Examples) {
  const PsdMatrix q = psd(MatrixXd::Constant(1, 1, 0.5));
  EXPECT_EQ(f4(psd(MatrixXd::Zero(1, 1)), MatrixXd::Constant(1, 1, 0.7), q)(0, 0), 0.5);
  const PsdMatrix lam = psd(MatrixXd::Constant(1, 1, 0.372281));
  EXPECT_NEAR(f4(lam, MatrixXd::Constant(1, 1, 0.5), q)(0, 0), 0.59307025, 1e-12);
  EXPECT_EQ(f4(lam, MatrixXd::Identity(1, 1), psd(MatrixXd::Zero(1, 1)))(0, 0), 0.372281);
}

TEST(F5, Examples) {
  EXPECT_NEAR(f5(2, 1, 0.5), 0.5, 1e-15);
  EXPECT_NEAR(f5(10, 0, 0.1), std::pow(0.9, 10), 1e-15);
  EXPECT_EQ(f5(7, 0, 0.0), 1.0);
  EXPECT_EQ(f5(7, 3, 0.0), 0.0);
  EXPECT_EQ(f5(7, 7, 1.0), 1.0);
  EXPECT_EQ(f5(7, 6, 1.0), 0.0);
  EXPECT_THROW(f5(3, 4, 0.5), DomainError);
  EXPECT_THROW(f5(3, 1, 1.5), DomainError);
}

TEST(F5, MatchesProductFormula) {
  // C(n,k) built multiplicatively, no log-gamma.
  for (int n = 0; n <= 30; ++n) {
    for (int k = 0; k <= n; ++k) {
      double c = 1.0;
      for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
      const double p = 0.37;
      EXPECT_NEAR(f5(n, k, p), c * std::pow(p, k) * std::pow(1 - p, n - k), 1e-13);
    }
  }
}

TEST(F5, LargeNDoesNotOverflow) {
  double s = 0.0;
  for (int k = 0; k <= 10000; ++k) s += f5(10000, k, 0.3);
  EXPECT_NEAR(s, 1.0, 1e-10);
}

TEST(ClampPhi, Examples) {
  EXPECT_EQ(clamp_phi(0.3), 0.3);
  EXPECT_EQ(clamp_phi(-0.2), 0.0);
  EXPECT_EQ(clamp_phi(1.0), 1.0);
  EXPECT_THROW(clamp_phi(1.0 + 1e-12), DomainError);
}

TEST(Properties, F1EqualsF3) { EXPECT_EQ(prop_f1_equals_f3(1000, 101), 0); }
TEST(Properties, F2MonotoneAndAntitone) { EXPECT_EQ(prop_f2_monotone(1000, 102), 0); }
TEST(Properties, ConjugationRule) { EXPECT_EQ(prop_conjugation(1000, 103), 0); }
TEST(Properties, F5SumsToOne) { EXPECT_EQ(prop_f5_normalized(1000, 104), 0); }
TEST(Properties, PhiClamp) { EXPECT_EQ(prop_phi_clamp(1000, 105), 0); }

}  // namespace
}  // namespace randsel
