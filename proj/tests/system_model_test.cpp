#include <random>

#include <gtest/gtest.h>

#include "randsel/errors.hpp"
#include "randsel/sampling.hpp"
#include "randsel/system_model.hpp"
#include "test_util.hpp"

namespace randsel {
namespace {

using namespace randsel::testing;

TEST(LtiSystem, RequiresPositiveDefiniteQ) {
  EXPECT_THROW(LtiSystem(MatrixXd::Identity(2, 2), SymmetricMatrix::Diagonal(Eigen::Vector2d(1, 0))),
               InvalidInputError);
  EXPECT_THROW(LtiSystem(MatrixXd::Identity(2, 3), SymmetricMatrix::Identity(2)), DimensionError);
}

TEST(SensorPool, Validation) {
  EXPECT_THROW(SensorPool({}), InvalidInputError);
  EXPECT_THROW(SensorPool({{Eigen::Vector2d(1, 0), 0.0}}), InvalidInputError);
  EXPECT_THROW(SensorPool({{Eigen::Vector2d(1, 0), 1.0}, {Eigen::Vector3d(1, 0, 0), 1.0}}),
               DimensionError);
  // Exact duplicates are rejected, near-duplicates are not.
  EXPECT_THROW(SensorPool({{Eigen::Vector2d(1, 0), 1.0}, {Eigen::Vector2d(1, 0), 1.0}}),
               InvalidInputError);
  EXPECT_NO_THROW(SensorPool({{Eigen::Vector2d(1, 0), 1.0}, {Eigen::Vector2d(1, 0), 2.0}}));
}

TEST(SensorPool, InformationMatrices) {
  const SensorPool pool({{Eigen::Vector2d(1, 2), 0.5}});
  const MatrixXd z = pool.information(0).matrix();
  EXPECT_DOUBLE_EQ(z(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(z(0, 1), 4.0);
  EXPECT_DOUBLE_EQ(z(1, 1), 8.0);
}

TEST(Selection, KindAndRejectionCount) {
  EXPECT_THROW(Selection({0}, SelectionKind::kConstrained), InvalidInputError);
  EXPECT_THROW(Selection({0}, SelectionKind::kConstrained, 0), InvalidInputError);
  EXPECT_THROW(Selection({0}, SelectionKind::kHomogeneous, 3), InvalidInputError);
  EXPECT_EQ(*Selection({0}, SelectionKind::kConstrained, 3).rejection_count(), 3);
}

TEST(Selection, OneBasedLineFormat) {
  const Selection s({0, 4, 4, 2}, SelectionKind::kHomogeneous);
  EXPECT_EQ(s.to_line(), "1 5 5 3");
  EXPECT_EQ(Selection::FromLine("1 5 5 3", 5), s);
  EXPECT_THROW(Selection::FromLine("1 6", 5), InvalidInputError);
  EXPECT_THROW(Selection::FromLine("0", 5), InvalidInputError);
  EXPECT_THROW(Selection::FromLine("1 x", 5), InvalidInputError);
}

TEST(AssembleOutput, Examples) {
  const SensorPool pool({{Eigen::Vector2d(1, 0), 1.0}, {Eigen::Vector2d(0.3, 0.7), 0.4}});
  const OutputModel one = assemble_output(pool, Selection({0}, SelectionKind::kHomogeneous));
  EXPECT_EQ(one.c.rows(), 1);
  EXPECT_EQ(one.c(0, 0), 1.0);
  EXPECT_EQ(one.c(0, 1), 0.0);
  EXPECT_EQ(one.r(0), 1.0);
  const OutputModel two = assemble_output(pool, Selection({0, 0}, SelectionKind::kHomogeneous));
  const MatrixXd info = two.c.transpose() * two.r.cwiseInverse().asDiagonal() * two.c;
  EXPECT_LT(max_abs_diff(info, 2.0 * pool.information(0).matrix()), 1e-15);
  EXPECT_THROW(assemble_output(pool, Selection({2}, SelectionKind::kHomogeneous)),
               DimensionError);
}

TEST(AssembleOutput, MatchesBruteForceSum) {
  std::mt19937_64 g(5);
  for (int trial = 0; trial < 50; ++trial) {
    const SensorPool pool = random_pool(g, 3, 6);
    std::vector<int> idx;
    for (int i = 0; i < 5; ++i) idx.push_back(static_cast<int>(g() % 6));
    const OutputModel out = assemble_output(pool, Selection(idx, SelectionKind::kHomogeneous));
    MatrixXd brute = MatrixXd::Zero(3, 3);
    for (int i : idx) {
      const auto& s = pool.sensor(i);
      brute += s.c * s.c.transpose() / s.sigma2;
    }
    const MatrixXd info = out.c.transpose() * out.r.cwiseInverse().asDiagonal() * out.c;
    EXPECT_LT(max_abs_diff(info, brute), 1e-12);
    EXPECT_LT(max_abs_diff(information_sum(pool, idx).matrix(), brute), 1e-12);
  }
}

TEST(ExpectedInformation, Examples) {
  std::mt19937_64 g(2);
  const SensorPool pool = random_pool(g, 3, 4);
  EXPECT_LT(max_abs_diff(expected_information(pool, VectorXd::Unit(4, 0)).matrix(),
                         pool.information(0).matrix()),
            1e-15);
  const SensorPool pair = orthonormal_pair();
  EXPECT_LT(max_abs_diff(expected_information(pair, Eigen::Vector2d(0.5, 0.5)).matrix(),
                         0.5 * MatrixXd::Identity(2, 2)),
            1e-15);
  EXPECT_THROW(expected_information(pair, Eigen::Vector2d(0.5, 0.6)), InvalidInputError);
  EXPECT_THROW(expected_information(pair, Eigen::Vector2d(1.5, -0.5)), InvalidInputError);
  EXPECT_THROW(expected_information(pair, Eigen::Vector3d(0.5, 0.5, 0)), DimensionError);
}

TEST(ExpectedInformation, AffineInP) {
  std::mt19937_64 g(8);
  for (int trial = 0; trial < 100; ++trial) {
    const SensorPool pool = random_pool(g, 3, 7);
    const VectorXd p = random_simplex(g, 7), q = random_simplex(g, 7);
    const double a = std::uniform_real_distribution<double>(0, 1)(g);
    const MatrixXd lhs = expected_information(pool, a * p + (1 - a) * q).matrix();
    const MatrixXd rhs = a * expected_information(pool, p).matrix() +
                         (1 - a) * expected_information(pool, q).matrix();
    EXPECT_LT(max_abs_diff(lhs, rhs), 1e-12);
  }
}

TEST(ExpectedInformation, MatchesMonteCarloMean) {
  std::mt19937_64 g(9);
  const SensorPool pool = random_pool(g, 2, 5);
  const VectorXd p = random_simplex(g, 5);
  const CategoricalSampler sampler(p);
  RngStream rng(77);
  const int n = 100000;
  MatrixXd sum = MatrixXd::Zero(2, 2), sq = MatrixXd::Zero(2, 2);
  for (int i = 0; i < n; ++i) {
    const MatrixXd z = pool.information(sampler.draw(rng)).matrix();
    sum += z;
    sq += z.cwiseProduct(z);
  }
  const MatrixXd mean = sum / n;
  const MatrixXd se = ((sq / n - mean.cwiseProduct(mean)) / n).cwiseSqrt();
  const MatrixXd e = expected_information(pool, p).matrix();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) EXPECT_LE(std::abs(mean(i, j) - e(i, j)), 3 * se(i, j) + 1e-15);
}

TEST(Pbh, Examples) {
  const MatrixXd a = Eigen::Vector2d(2.0, 0.5).asDiagonal();
  MatrixXd c(1, 2);
  c << 1, 0;
  EXPECT_TRUE(pbh_detectable(a, c));
  c << 0, 1;
  EXPECT_FALSE(pbh_detectable(a, c));
  EXPECT_TRUE(pbh_detectable(0.5 * MatrixXd::Identity(3, 3), MatrixXd::Zero(1, 3)));
}

TEST(Pbh, ComplexUnstableModes) {
  // Rotation by 90 degrees scaled by 1.2: eigenvalues ±1.2i.
  MatrixXd a(2, 2);
  a << 0, -1.2, 1.2, 0;
  MatrixXd c(1, 2);
  c << 1, 0;
  EXPECT_TRUE(pbh_detectable(a, c));
  EXPECT_FALSE(pbh_detectable(a, MatrixXd::Zero(1, 2)));
}

TEST(DetectabilityReport, Conditions) {
  const LtiSystem sys(Eigen::Vector2d(2.0, 0.5).asDiagonal(), SymmetricMatrix::Identity(2));
  const SensorPool good({{Eigen::Vector2d(1, 0), 1.0}, {Eigen::Vector2d(1, 1), 1.0}});
  const auto r1 = check_detectability_conditions(sys, good, Eigen::Vector2d(0.5, 0.5));
  EXPECT_TRUE(r1.every_candidate);
  EXPECT_TRUE(r1.expected_information);

  const SensorPool mixed({{Eigen::Vector2d(1, 0), 1.0}, {Eigen::Vector2d(0, 1), 1.0}});
  const auto r2 = check_detectability_conditions(sys, mixed, Eigen::Vector2d(0.5, 0.5));
  EXPECT_FALSE(r2.every_candidate);
  EXPECT_TRUE(r2.candidate_detectable[0]);
  EXPECT_FALSE(r2.candidate_detectable[1]);
  EXPECT_TRUE(r2.expected_information);

  const auto r3 = check_detectability_conditions(sys, mixed, Eigen::Vector2d(1.0, 0.0));
  EXPECT_TRUE(r3.expected_information);
  const auto r4 = check_detectability_conditions(sys, mixed, Eigen::Vector2d(0.0, 1.0));
  EXPECT_FALSE(r4.expected_information);
  EXPECT_FALSE(r4.warnings.empty());
}

TEST(AugmentSelection, Examples) {
  const LtiSystem sys(Eigen::Vector2d(2.0, 0.5).asDiagonal(), SymmetricMatrix::Identity(2));
  const SensorPool pool({{Eigen::Vector2d(1, 0), 1.0}, {Eigen::Vector2d(0, 1), 1.0}});
  const Selection sel({1}, SelectionKind::kHomogeneous);
  EXPECT_EQ(augment_selection(sys, pool, sel, {}), sel);
  const Selection aug = augment_selection(sys, pool, sel, {0});
  EXPECT_EQ(aug.indices(), (std::vector<int>{1, 0}));
  EXPECT_EQ(aug.kind(), SelectionKind::kHomogeneous);
  EXPECT_FALSE(pbh_detectable(sys.a(), assemble_output(pool, sel).c));
  EXPECT_TRUE(pbh_detectable(sys.a(), assemble_output(pool, aug).c));
  EXPECT_THROW(augment_selection(sys, pool, sel, {1}), PreconditionError);
}

TEST(Partitioning, ComparisonMode) {
  const Partitioning p = Partitioning::Comparison(42, 120, 3, 0.05);
  EXPECT_EQ(p.count(), 3);
  EXPECT_EQ(p.total_pool_size(), 42);
  EXPECT_EQ(p.total_sample_size(), 120);
  EXPECT_EQ(p.first(2), 28);
  EXPECT_NEAR(p.delta(0), 1 - std::cbrt(0.95), 1e-15);
  EXPECT_EQ(p.joint_confidence(), 0.95);
  EXPECT_THROW(Partitioning::Comparison(42, 100, 3, 0.05), ConfigError);
  EXPECT_THROW(Partitioning::Comparison(40, 120, 3, 0.05), ConfigError);
}

TEST(Partitioning, CoversPoolWithoutGaps) {
  std::mt19937_64 g(4);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 1 + static_cast<int>(g() % 6);
    std::vector<int> sizes, samples;
    std::vector<double> deltas;
    for (int i = 0; i < k; ++i) {
      sizes.push_back(1 + static_cast<int>(g() % 9));
      samples.push_back(1 + static_cast<int>(g() % 20));
      deltas.push_back(0.01);
    }
    const Partitioning p(sizes, samples, deltas);
    std::vector<int> owner(p.total_pool_size(), -1);
    for (int i = 0; i < k; ++i) {
      for (int j = p.first(i); j < p.first(i) + p.pool_size(i); ++j) {
        ASSERT_EQ(owner[j], -1);
        owner[j] = i;
      }
    }
    for (int o : owner) EXPECT_GE(o, 0);
    EXPECT_NEAR(p.joint_confidence(), std::pow(0.99, k), 1e-15);
  }
}

}  // namespace
}  // namespace randsel
