#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include <anderson/error.hpp>
#include <anderson/linalg.hpp>

#include "test_support.hpp"

using namespace anderson;
using anderson::testing::random_matrix;
using anderson::testing::random_vector;
using anderson::testing::vec;

namespace {

double objective(const DenseMatrix& R, const Vector& rhs, const Vector& c) { return (rhs + R * c).norm(); }

}  // namespace

TEST(MinNormLstsq, SingleColumnHandValue) {
  DenseMatrix R(2, 1);
  R << 1.0, -1.0;
  // Normal equation: c = -(R^T R)^-1 R^T rhs = -(1/2)(1) = -1/2.
  const auto sol = min_norm_lstsq(R, vec({1.0, 0.0}));
  ASSERT_EQ(sol.coeffs.size(), 1);
  EXPECT_NEAR(sol.coeffs(0), -0.5, 1e-15);
  EXPECT_EQ(sol.info.numerical_rank, 1);
}

TEST(MinNormLstsq, ZeroMatrixGivesZero) {
  const auto sol = min_norm_lstsq(DenseMatrix::Zero(3, 2), vec({1.0, 2.0, 3.0}));
  EXPECT_TRUE(sol.coeffs.isZero(0.0));
  EXPECT_EQ(sol.info.numerical_rank, 0);
  EXPECT_GT(sol.info.tolerance_used, 0.0);
}

TEST(MinNormLstsq, IdentityReturnsNegatedRhs) {
  const auto sol = min_norm_lstsq(DenseMatrix::Identity(2, 2), vec({3.0, 4.0}));
  EXPECT_NEAR(sol.coeffs(0), -3.0, 1e-15);
  EXPECT_NEAR(sol.coeffs(1), -4.0, 1e-15);
}

TEST(MinNormLstsq, RejectsNonFinite) {
  DenseMatrix R = DenseMatrix::Identity(2, 2);
  R(0, 1) = std::numeric_limits<double>::quiet_NaN();
  try {
    min_norm_lstsq(R, vec({1.0, 1.0}));
    FAIL() << "expected NonFinite";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonFinite);
  }
  try {
    min_norm_lstsq(DenseMatrix::Identity(2, 2), vec({1.0, std::numeric_limits<double>::infinity()}));
    FAIL() << "expected NonFinite";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonFinite);
  }
}

TEST(MinNormLstsq, RejectsShapeMismatch) {
  try {
    min_norm_lstsq(DenseMatrix::Identity(2, 2), vec({1.0, 1.0, 1.0}));
    FAIL() << "expected InvalidArgument";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
  }
}

TEST(MinNormLstsq, RankInfoInvariants) {
  auto g = anderson::testing::rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const Index rows = 2 + trial % 5;
    const Index cols = 1 + trial % 4;
    DenseMatrix R = random_matrix(g, rows, cols);
    if (cols > 1 && trial % 3 == 0) R.col(cols - 1) = R.col(0);
    const auto sol = min_norm_lstsq(R, random_vector(g, rows));
    EXPECT_LE(sol.info.numerical_rank, std::min(rows, cols));
    EXPECT_GT(sol.info.tolerance_used, 0.0);
    for (std::size_t i = 1; i < sol.info.singular_values.size(); ++i) {
      EXPECT_GE(sol.info.singular_values[i - 1], sol.info.singular_values[i]);
      EXPECT_GE(sol.info.singular_values[i], 0.0);
    }
  }
}

TEST(MinNormLstsq, FullRankSatisfiesNormalEquations) {
  auto g = anderson::testing::rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Index rows = 3 + trial % 6;
    const Index cols = 1 + trial % std::min<Index>(rows, 4);
    const DenseMatrix R = random_matrix(g, rows, cols);
    const Vector rhs = random_vector(g, rows);
    const auto sol = min_norm_lstsq(R, rhs);
    ASSERT_EQ(sol.info.numerical_rank, cols);
    const double gradient = (R.transpose() * (R * sol.coeffs + rhs)).norm();
    EXPECT_LE(gradient, 1e-10 * R.norm() * rhs.norm());
  }
}

TEST(MinNormLstsq, MinimumNormAgainstNullSpace) {
  auto g = anderson::testing::rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    DenseMatrix R = random_matrix(g, 5, 3);
    R.col(2) = 2.0 * R.col(0) - R.col(1);  // rank 2
    const Vector rhs = random_vector(g, 5);
    const auto sol = min_norm_lstsq(R, rhs);
    ASSERT_EQ(sol.info.numerical_rank, 2);

    Eigen::JacobiSVD<DenseMatrix> svd(R, Eigen::ComputeFullV);
    const Vector null_dir = svd.matrixV().col(2);
    EXPECT_LE((R * null_dir).norm(), 1e-12);
    for (double t : {-1.0, -1e-3, 1e-3, 0.5, 3.0}) {
      EXPECT_LE(sol.coeffs.norm(), (sol.coeffs + t * null_dir).norm() + 1e-14);
    }
  }
}

TEST(MinNormLstsq, ObjectiveIsLocallyMinimal) {
  auto g = anderson::testing::rng(9);
  const DenseMatrix R = random_matrix(g, 6, 3);
  const Vector rhs = random_vector(g, 6);
  const auto sol = min_norm_lstsq(R, rhs);
  const double best = objective(R, rhs, sol.coeffs);
  for (int i = 0; i < 100; ++i) {
    Vector delta = random_vector(g, 3);
    delta *= 1e-3 / delta.norm();
    EXPECT_LE(best, objective(R, rhs, sol.coeffs + delta) + 1e-12);
  }
}

TEST(SpectralRadius, KnownValues) {
  DenseMatrix M(2, 2);
  M << 2.0 / 3.0, 0.25, 0.0, 1.0 / 3.0;
  EXPECT_NEAR(spectral_radius(M), 2.0 / 3.0, 1e-12);
  EXPECT_EQ(spectral_radius(DenseMatrix::Zero(3, 3)), 0.0);
  EXPECT_NEAR(spectral_radius(vec({0.9, -0.9, 0.3}).asDiagonal()), 0.9, 1e-12);
}

TEST(SpectralRadius, ComplexPair) {
  DenseMatrix M(2, 2);
  M << 0.0, -0.5, 0.5, 0.0;  // eigenvalues +-0.5i
  EXPECT_NEAR(spectral_radius(M), 0.5, 1e-12);
}

TEST(SpectralRadius, BoundedByOperatorNorm) {
  auto g = anderson::testing::rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 1 + trial % 7;
    const DenseMatrix M = random_matrix(g, n, n);
    EXPECT_LE(spectral_radius(M), operator_norm_2(M) * (1.0 + 1e-12));
  }
}

TEST(SpectralRadius, RejectsNonSquare) {
  EXPECT_THROW(spectral_radius(DenseMatrix::Zero(2, 3)), Error);
}

TEST(OperatorNorm, KnownValues) {
  EXPECT_NEAR(operator_norm_2(DenseMatrix::Identity(4, 4)), 1.0, 1e-15);
  EXPECT_NEAR(operator_norm_2(vec({3.0, -4.0}).asDiagonal()), 4.0, 1e-15);
  DenseMatrix shift(2, 2);
  shift << 0.0, 1.0, 0.0, 0.0;
  EXPECT_NEAR(operator_norm_2(shift), 1.0, 1e-15);
}

TEST(OperatorNorm, RejectsNonFinite) {
  DenseMatrix M = DenseMatrix::Identity(2, 2);
  M(1, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(operator_norm_2(M), Error);
}

TEST(NumericalRank, DetectsDependentColumns) {
  DenseMatrix R(3, 3);
  R << 1, 2, 3, 4, 5, 6, 7, 8, 9;
  EXPECT_EQ(numerical_rank(R), 2);
  EXPECT_EQ(numerical_rank(DenseMatrix::Identity(3, 3)), 3);
}
