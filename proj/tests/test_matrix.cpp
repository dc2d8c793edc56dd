#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "swdelay/errors.hpp"
#include "swdelay/matrix.hpp"

using namespace swdelay;
using fixtures::expect_matrix_near;

TEST(Matrix, ConstructorsRejectNonFiniteAndRaggedInput) {
  EXPECT_THROW(Matrix(2, 2, NAN), InvalidArgument);
  EXPECT_THROW(Matrix(1, 2, std::vector<double>{1.0, INFINITY}), InvalidArgument);
  EXPECT_THROW(Matrix::from_rows({{1.0, 2.0}, {3.0}}), DimensionMismatch);
  EXPECT_THROW(Matrix(0, 3), InvalidArgument);
}

TEST(Matrix, ArithmeticAndShapes) {
  const Matrix a{{1, 2}, {3, 4}};
  const Matrix b{{0, 1}, {1, 0}};
  EXPECT_EQ(a * b, (Matrix{{2, 1}, {4, 3}}));
  EXPECT_EQ(a + b, (Matrix{{1, 3}, {4, 4}}));
  EXPECT_EQ(a - b, (Matrix{{1, 1}, {2, 4}}));
  EXPECT_EQ(transpose(Matrix{{1, 2, 3}}), (Matrix{{1}, {2}, {3}}));
  EXPECT_THROW(a * Matrix(3, 3), DimensionMismatch);
  const Vector x{1.0, -1.0};
  EXPECT_EQ(a * std::span<const double>(x), (Vector{-1.0, -1.0}));
}

TEST(InfNorm, RowSums) {
  EXPECT_DOUBLE_EQ(inf_norm(Matrix{{1, -2}, {3, 4}}), 7.0);
  EXPECT_DOUBLE_EQ(inf_norm(Matrix::identity(3)), 1.0);
  EXPECT_DOUBLE_EQ(inf_norm(Matrix(2, 3)), 0.0);
  // Column of P1(0)^{-1} D0 for the first subsystem of the R^2 family.
  const double det = 10.92833916;
  const Matrix col{{-0.6038 / det}, {-4.39 / det}};
  EXPECT_DOUBLE_EQ(inf_norm(col), 4.39 / det);
  EXPECT_NEAR(inf_norm(col), 0.40171, 1e-5);
}

TEST(Metzlerize, KeepsDiagonalAndTakesAbsOffDiagonal) {
  EXPECT_EQ(metzlerize(Matrix{{-1, -2}, {3, -4}}), (Matrix{{-1, 2}, {3, -4}}));
  EXPECT_EQ(metzlerize(fixtures::kEx1A0[0]), fixtures::kEx1A0[0]);
  EXPECT_THROW(metzlerize(Matrix(2, 3)), DimensionMismatch);
}

TEST(IsMetzler, OffDiagonalSign) {
  EXPECT_TRUE(is_metzler(Matrix{{-5.0221, 0.2531}, {1.0103, -3.0105}}));
  EXPECT_FALSE(is_metzler(Matrix{{0, -1}, {0, 0}}));
  EXPECT_TRUE(is_metzler(Matrix{{-3}}));
  EXPECT_THROW(is_metzler(Matrix(1, 2)), DimensionMismatch);
}

TEST(Invert, KnownInverses) {
  expect_matrix_near(invert(2.0 * Matrix::identity(3)), 0.5 * Matrix::identity(3), 1e-15);
  // Adjugate oracle: inverse of [[a, b], [c, d]] is [[d, -b], [-c, a]] / (ad - bc).
  const Matrix p1{{-4.39, 0.6038}, {2.0418, -2.7702}};
  const double det = -4.39 * -2.7702 - 0.6038 * 2.0418;
  EXPECT_NEAR(det, 10.92833916, 1e-8);
  expect_matrix_near(invert(p1), (1.0 / det) * Matrix{{-2.7702, -0.6038}, {-2.0418, -4.39}}, 1e-14);
  EXPECT_THROW(invert(Matrix{{1, 1}, {1, 1}}), SingularMatrix);
  EXPECT_THROW(invert(Matrix(2, 3)), DimensionMismatch);
}

TEST(Invert, ResidualOnRandomWellConditioned) {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + trial % 6;
    Matrix a = oracles::random_matrix(n, n, -1.0, 1.0, rng);
    for (std::size_t i = 0; i < n; ++i) a(i, i) += 4.0;
    const Matrix r = a * invert(a) - Matrix::identity(n);
    EXPECT_LT(inf_norm(r), 1e-10);
  }
}

TEST(Lu, DeterminantAndSolve) {
  const LuDecomposition lu(Matrix{{0, 2}, {3, 1}});
  EXPECT_DOUBLE_EQ(lu.determinant(), -6.0);
  const Vector x = lu.solve(Vector{4.0, 5.0});
  EXPECT_NEAR(x[0], 1.0, 1e-15);
  EXPECT_NEAR(x[1], 2.0, 1e-15);
}

TEST(MetzlerIsHurwitz, KnownValues) {
  EXPECT_TRUE(metzler_is_hurwitz(-Matrix::identity(2)));
  EXPECT_FALSE(metzler_is_hurwitz(Matrix{{0, 1}, {1, 0}}));
  EXPECT_TRUE(metzler_is_hurwitz(Matrix{{-11, 4, 4}, {6, -11, 4}, {7, 3, -8}}));
  EXPECT_FALSE(metzler_is_hurwitz(Matrix{{0, 0}, {0, -1}}));
  EXPECT_THROW(metzler_is_hurwitz(Matrix{{-1, -1}, {0, -1}}), NotMetzler);
}

TEST(MatrixProperties, IdempotenceSubadditivityNormIdentitySubmultiplicativity) {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 5;
    const Matrix a = oracles::random_matrix(n, n, -3.0, 3.0, rng);
    const Matrix b = oracles::random_matrix(n, n, -3.0, 3.0, rng);
    EXPECT_EQ(metzlerize(metzlerize(a)), metzlerize(a));
    EXPECT_TRUE(entrywise_leq(metzlerize(a + b), metzlerize(a) + abs(b), 1e-12));
    EXPECT_EQ(inf_norm(abs(a)), inf_norm(a));
    EXPECT_LE(inf_norm(a * b), inf_norm(a) * inf_norm(b) * (1.0 + 1e-12));
  }
}

TEST(MatrixProperties, HurwitzAgreesWithPerronRoot) {
  SplitMix64 rng(6);
  int decided = 0, stable = 0;
  while (decided < 100) {
    const std::size_t n = 1 + decided % 6;
    const Matrix a = oracles::random_metzler(n, -3.0, 0.0, 3.0 / static_cast<double>(n), rng);
    const std::optional<bool> perron = oracles::perron_below(a);
    if (!perron) continue;
    ++decided;
    EXPECT_EQ(metzler_is_hurwitz(a), *perron);
    if (*perron) ++stable;
  }
  EXPECT_GT(stable, 10);
  EXPECT_LT(stable, 90);
}
