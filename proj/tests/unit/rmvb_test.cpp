#include "rab/rmvb.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "rab/dtpak.hpp"

namespace rab {
namespace {

constexpr double kExample1K = 3.687780818603357;

TEST(EmbedTest, RealMatrixBecomesBlockDiagonal) {
  const double d[] = {1.0, 3.0};
  const auto m = rmvb::embed_matrix(ComplexMatrix::diagonal(d));
  const RealMatrix expected(4, 4, {1, 0, 0, 0, 0, 3, 0, 0, 0, 0, 1, 0, 0, 0, 0, 3});
  EXPECT_EQ(m, expected);
}

TEST(EmbedTest, VectorStacksRealThenImaginary) {
  const ComplexVector a{cplx{1.0, 0.5}, cplx{2.0, -1.0}};
  EXPECT_EQ(rmvb::embed_vector(a), (RealVector{1.0, 2.0, 0.5, -1.0}));
  EXPECT_EQ(rmvb::unembed_vector(rmvb::embed_vector(a)), a);
  EXPECT_THROW((void)rmvb::unembed_vector(RealVector(3)), Error);
}

TEST(EmbedTest, ProductsAndQuadraticFormsCommute) {
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = testing::random_matrix(rng, 5, 3);
    const auto x = testing::random_vector(rng, 3);
    const auto y = testing::random_vector(rng, 3);
    const auto mx = linalg::matvec(m, std::span<const cplx>(x));
    const auto embedded = linalg::matvec(rmvb::embed_matrix(m), std::span<const double>(rmvb::embed_vector(x)));
    const auto direct = rmvb::embed_vector(mx);
    for (std::size_t i = 0; i < direct.size(); ++i) EXPECT_NEAR(embedded[i], direct[i], 1e-12);
    // Re[x^H y] equals the real inner product of the embeddings.
    const auto ex = rmvb::embed_vector(x);
    const auto ey = rmvb::embed_vector(y);
    EXPECT_NEAR(linalg::dot<double>(ex, ey), linalg::dot<cplx>(x, y).real(), 1e-12);
  }
}

TEST(EmbedTest, RankDeficientCovarianceIsRejected) {
  try {
    (void)rmvb::embed(testing::diagonal_example(1.0, 0.0, 1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPositiveDefinite);
  }
}

TEST(EmbedTest, ConstraintMatrixForWorkedExample) {
  const auto e = rmvb::embed(testing::diagonal_example(1.0, 3.0, 1.0));
  // eps^2 I - a a^T on the real block, eps^2 I on the imaginary block.
  const RealMatrix expected(4, 4, {0, -2, 0, 0, -2, -3, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1});
  EXPECT_EQ(e.Q_check, expected);
}

TEST(SecularSTest, HandValues) {
  const RealVector gamma{1.0};
  const RealVector b{1.0};
  EXPECT_DOUBLE_EQ(rmvb::secular_S(0.0, gamma, b), -1.0);
  EXPECT_DOUBLE_EQ(rmvb::secular_S(1.0, gamma, b), -1.75);
}

TEST(SecularSTest, PoleIsReported) {
  const RealVector gamma{-2.0};
  const RealVector b{1.0};
  try {
    (void)rmvb::secular_S(0.5, gamma, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PoleHit);
  }
}

TEST(SecularSTest, VanishesAtMappedDiagonalMultiplier) {
  // The two solvers share one multiplier: zeta = k / (2 eps^2).
  const auto p = testing::diagonal_example(1.0, 3.0, 1.0);
  const auto result = rmvb::rmvb_solve(p);
  EXPECT_NEAR(result.zeta, kExample1K / 2.0, 1e-9);
  EXPECT_NEAR(result.secular_value, 0.0, 1e-10);
}

TEST(RmvbSolveTest, WorkedExample) {
  const auto result = rmvb::rmvb_solve(testing::diagonal_example(1.0, 3.0, 1.0));
  EXPECT_NEAR(result.w[0].real(), 0.55367816, 1e-8);
  EXPECT_NEAR(result.w[1].real(), 0.65013858, 1e-8);
  EXPECT_NEAR(result.w[0].imag(), 0.0, 1e-12);
  EXPECT_NEAR(result.w[1].imag(), 0.0, 1e-12);
}

TEST(RmvbSolveTest, AgreesWithClosedForm) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    for (auto kind : {TransformKind::SquareN, TransformKind::Tall5N}) {
      GeneratorConfig cfg;
      cfg.n = 12;
      cfg.A_kind = kind;
      cfg.seed = seed;
      const auto p = generate(cfg);
      const auto closed = dtpak::solve(p).solution->objective;
      const auto w = rmvb::rmvb_solve(p).w;
      const double obj = testing::objective_oracle(p, w);
      EXPECT_NEAR(obj, closed, 1e-6 * std::max(1.0, closed));
      const auto cv = testing::constraint_oracle(p, w);
      EXPECT_GE(cv.slack, -1e-8);
      EXPECT_NEAR(cv.imag, 0.0, 1e-8);
    }
  }
}

TEST(RmvbSolveTest, InfeasibleHasNoRoot) {
  try {
    (void)rmvb::rmvb_solve(testing::diagonal_example(1.0, 3.0, 3.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RootNotFound);
  }
}

}  // namespace
}  // namespace rab
