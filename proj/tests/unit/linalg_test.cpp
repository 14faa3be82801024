#include "rab/linalg.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"

namespace rab {
namespace {

using linalg::Side;
using testing::max_abs_diff;

constexpr cplx kJ{0.0, 1.0};

TEST(GramTest, IdentityIsFixedPoint) {
  EXPECT_EQ(linalg::gram(ComplexMatrix::identity(2)), ComplexMatrix::identity(2));
}

TEST(GramTest, SingleColumn) {
  const ComplexMatrix a(2, 1, {cplx{1.0}, kJ});
  const auto g = linalg::gram(a);
  ASSERT_EQ(g.rows(), 1u);
  EXPECT_EQ(g(0, 0), cplx(2.0));
}

TEST(GramTest, MatchesTripleLoop) {
  Rng rng(11);
  const auto a = testing::random_matrix(rng, 6, 3);
  const auto g = linalg::gram(a);
  EXPECT_LE(max_abs_diff(g, testing::gram_oracle(a)), 1e-12);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(g(i, i).imag(), 0.0);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(g(i, j), std::conj(g(j, i)));
  }
}

TEST(GramTest, RejectsWideMatrix) {
  try {
    (void)linalg::gram(ComplexMatrix(2, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(CholeskyTest, Identity) {
  EXPECT_EQ(linalg::cholesky_upper(ComplexMatrix::identity(3)), ComplexMatrix::identity(3));
}

TEST(CholeskyTest, DiagonalSquareRoots) {
  const double d[] = {4.0, 9.0};
  const double r[] = {2.0, 3.0};
  EXPECT_EQ(linalg::cholesky_upper(ComplexMatrix::diagonal(d)), ComplexMatrix::diagonal(r));
}

TEST(CholeskyTest, RecoversConstructedFactor) {
  Rng rng(5);
  const std::size_t n = 7;
  ComplexMatrix b0(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    b0(i, i) = 0.5 + rng.uniform();
    for (std::size_t j = i + 1; j < n; ++j) b0(i, j) = rng.complex_normal();
  }
  const auto h = testing::product_oracle(testing::adjoint_oracle(b0), b0);
  const auto b = linalg::cholesky_upper(h);
  EXPECT_LE(max_abs_diff(b, b0), 1e-10);
}

TEST(CholeskyTest, ReconstructsRandomPositiveDefinite) {
  Rng rng(99);
  for (std::size_t n : {1u, 2u, 5u, 16u, 33u, 64u}) {
    const auto h = testing::random_psd(rng, n, n, 0.1);
    const auto b = linalg::cholesky_upper(h);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_GT(b(i, i).real(), 0.0);
      EXPECT_EQ(b(i, i).imag(), 0.0);
      for (std::size_t j = 0; j < i; ++j) EXPECT_EQ(b(i, j), cplx{});
    }
    const auto rebuilt = testing::product_oracle(testing::adjoint_oracle(b), b);
    EXPECT_LE(max_abs_diff(rebuilt, h), 1e-10 * linalg::norm_inf(h)) << "n = " << n;
  }
}

TEST(CholeskyTest, RankDeficientIsNotPositiveDefinite) {
  Rng rng(3);
  const auto h = testing::random_psd(rng, 6, 4, 0.0);
  try {
    (void)linalg::cholesky_upper(h);
    FAIL() << "expected NotPositiveDefinite";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPositiveDefinite);
  }
}

TEST(CholeskyTest, RealInstantiation) {
  const RealMatrix h(2, 2, {4.0, 2.0, 2.0, 5.0});
  const auto b = linalg::cholesky_upper(h);
  EXPECT_DOUBLE_EQ(b(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(b(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(b(1, 1), 2.0);
  EXPECT_EQ(b(1, 0), 0.0);
}

TEST(HermitianEvdTest, DiagonalInputIsSortedDecreasing) {
  const double d[] = {1.0, 3.0};
  const auto evd = linalg::hermitian_evd(ComplexMatrix::diagonal(d));
  ASSERT_EQ(evd.values.size(), 2u);
  EXPECT_DOUBLE_EQ(evd.values[0], 3.0);
  EXPECT_DOUBLE_EQ(evd.values[1], 1.0);
  // Column permutation with the phase convention applied.
  EXPECT_EQ(evd.vectors, ComplexMatrix(2, 2, {cplx{0.0}, cplx{1.0}, cplx{1.0}, cplx{0.0}}));
}

TEST(HermitianEvdTest, ZeroMatrix) {
  const auto evd = linalg::hermitian_evd(ComplexMatrix(4, 4));
  for (double v : evd.values) EXPECT_EQ(v, 0.0);
  const auto gram = testing::product_oracle(testing::adjoint_oracle(evd.vectors), evd.vectors);
  EXPECT_LE(max_abs_diff(gram, ComplexMatrix::identity(4)), 1e-12);
}

void check_decomposition(const ComplexMatrix& h) {
  const std::size_t n = h.rows();
  const auto evd = linalg::hermitian_evd(h);
  const auto& u = evd.vectors;
  EXPECT_TRUE(std::is_sorted(evd.values.rbegin(), evd.values.rend()));

  const auto gram = testing::product_oracle(testing::adjoint_oracle(u), u);
  ComplexMatrix defect = gram;
  for (std::size_t i = 0; i < n; ++i) defect(i, i) -= 1.0;
  EXPECT_LE(linalg::norm_inf(defect), 1e-10);

  ComplexMatrix scaled = u;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scaled(i, j) *= evd.values[j];
  auto residual = testing::product_oracle(scaled, testing::adjoint_oracle(u));
  for (std::size_t i = 0; i < residual.entries().size(); ++i) residual.entries()[i] -= h.entries()[i];
  EXPECT_LE(linalg::norm_inf(residual), 1e-9 * std::max(1.0, linalg::norm_inf(h)));

  // Largest-magnitude entry of every eigenvector is real and positive.
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(u(i, j)) > std::abs(u(arg, j)) * (1.0 + 1e-12)) arg = i;
    EXPECT_EQ(u(arg, j).imag(), 0.0);
    EXPECT_GT(u(arg, j).real(), 0.0);
  }
}

TEST(HermitianEvdTest, RandomHermitianReconstruction) {
  Rng rng(2024);
  for (std::size_t n : {1u, 3u, 8u, 40u}) {
    auto h = testing::random_matrix(rng, n, n);
    h = linalg::hermitian_part(h);
    check_decomposition(h);
  }
}

TEST(HermitianEvdTest, UnitarySimilarityPreservesSpectrum) {
  Rng rng(77);
  for (int trial = 0; trial < 5; ++trial) {
    const auto h = linalg::hermitian_part(testing::random_matrix(rng, 12, 12));
    const auto v = testing::random_unitary(rng, 12);
    const auto rotated =
        linalg::hermitian_part(testing::product_oracle(testing::product_oracle(v, h), testing::adjoint_oracle(v)));
    const auto a = linalg::hermitian_evd(h).values;
    const auto b = linalg::hermitian_evd(rotated).values;
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-9);
  }
}

TEST(HermitianEvdTest, RealSymmetricInstantiation) {
  const RealMatrix h(2, 2, {2.0, 1.0, 1.0, 2.0});
  const auto evd = linalg::hermitian_evd(h);
  EXPECT_NEAR(evd.values[0], 3.0, 1e-14);
  EXPECT_NEAR(evd.values[1], 1.0, 1e-14);
  EXPECT_GT(evd.vectors(0, 0), 0.0);
}

TEST(SolveUpperTest, IdentityReturnsRhs) {
  const ComplexVector y{cplx{1.0, 2.0}, cplx{-3.0, 0.5}, cplx{0.0, -1.0}};
  EXPECT_EQ(linalg::solve_upper(ComplexMatrix::identity(3), std::span<const cplx>(y)), y);
  EXPECT_EQ(linalg::solve_upper(ComplexMatrix::identity(3), std::span<const cplx>(y), Side::Adjoint), y);
}

TEST(SolveUpperTest, DiagonalDivide) {
  const double d[] = {2.0, 4.0};
  const ComplexVector y{2.0, 8.0};
  const auto x = linalg::solve_upper(ComplexMatrix::diagonal(d), std::span<const cplx>(y));
  EXPECT_EQ(x, (ComplexVector{1.0, 2.0}));
}

TEST(SolveUpperTest, RoundTripBothSides) {
  Rng rng(8);
  const std::size_t n = 9;
  ComplexMatrix b(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    b(i, i) = cplx{2.0 + rng.uniform(), rng.normal()};
    for (std::size_t j = i + 1; j < n; ++j) b(i, j) = 0.3 * rng.complex_normal();
  }
  const auto x0 = testing::random_vector(rng, n);
  const auto y = linalg::matvec(b, std::span<const cplx>(x0));
  const auto x = linalg::solve_upper(b, std::span<const cplx>(y));
  const auto yh = linalg::adjoint_matvec(b, std::span<const cplx>(x0));
  const auto xh = linalg::solve_upper(b, std::span<const cplx>(yh), Side::Adjoint);
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_LE(std::abs(x[i] - x0[i]), 1e-10);
    EXPECT_LE(std::abs(xh[i] - x0[i]), 1e-10);
  }

  // Matrix right-hand side agrees with column-by-column solves.
  const auto m = testing::random_matrix(rng, n, 4);
  const auto xm = linalg::solve_upper_adjoint(b, m);
  for (std::size_t c = 0; c < 4; ++c) {
    ComplexVector col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = m(i, c);
    const auto xc = linalg::solve_upper(b, std::span<const cplx>(col), Side::Adjoint);
    for (std::size_t i = 0; i < n; ++i) EXPECT_LE(std::abs(xm(i, c) - xc[i]), 1e-12);
  }
}

TEST(SolveUpperTest, SingularDiagonalRejected) {
  ComplexMatrix b = ComplexMatrix::identity(3);
  b(1, 1) = 0.0;
  const ComplexVector y{1.0, 1.0, 1.0};
  try {
    (void)linalg::solve_upper(b, std::span<const cplx>(y));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularTriangular);
  }
}

TEST(MatrixTest, EntryCountMustMatchShape) {
  EXPECT_THROW(ComplexMatrix(2, 2, ComplexVector(3)), Error);
}

}  // namespace
}  // namespace rab
