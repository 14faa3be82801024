#include "rab/certify.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"

namespace rab {
namespace {

TEST(ConstraintSatisfactionTest, HandValues) {
  const auto p = testing::diagonal_example(1.0, 3.0, 1.0);
  EXPECT_DOUBLE_EQ(certify::constraint_satisfaction(p, ComplexVector{0.0, 0.0}), 1.0);
  // w = [0, 1]: w^H a = 2, eps ||w|| + 1 = 2.
  EXPECT_DOUBLE_EQ(certify::constraint_satisfaction(p, ComplexVector{0.0, 1.0}), 0.0);
  // Slack is not penalized, imaginary part is.
  EXPECT_DOUBLE_EQ(certify::constraint_satisfaction(p, ComplexVector{0.0, 5.0}), 0.0);
  EXPECT_NEAR(certify::constraint_satisfaction(p, ComplexVector{0.0, cplx{5.0, 0.5}}), 1.0, 1e-15);
}

TEST(ConstraintSatisfactionTest, MatchesDirectEvaluation) {
  Rng rng(10);
  GeneratorConfig cfg;
  cfg.n = 6;
  cfg.A_kind = TransformKind::Tall5N;
  const auto p = generate(cfg);
  for (int trial = 0; trial < 20; ++trial) {
    const auto w = testing::random_vector(rng, 6);
    const auto cv = testing::constraint_oracle(p, w);
    EXPECT_NEAR(certify::constraint_satisfaction(p, w), std::abs(std::min(cv.slack, 0.0)) + std::abs(cv.imag), 1e-12);
    EXPECT_NEAR(certify::objective(p, w), testing::objective_oracle(p, w), 1e-12);
  }
}

TEST(KktCertificateTest, WorkedExampleResidualsVanish) {
  const auto p = testing::diagonal_example(1.0, 3.0, 1.0);
  const auto d = dtpak::diagonalize(p);
  const auto pt = dtpak::kkt_interior(d);
  const auto cert = certify::kkt_certificate(p, d, pt.u, pt.mu, pt.k);
  EXPECT_LE(cert.constraint_satisfaction, 1e-12);
  EXPECT_LE(cert.stationarity_residual, 1e-10);
  EXPECT_LE(cert.comp_slackness_residual, 1e-10);
  EXPECT_TRUE(cert.dual_feasibility);
  EXPECT_LE(cert.transform_consistency, 1e-12);
}

TEST(KktCertificateTest, DegenerateBranch) {
  const auto p = testing::diagonal_example(1.0, 0.0, 1.0);
  const auto d = dtpak::diagonalize(p);
  const auto pt = dtpak::kkt_degenerate(d);
  const auto cert = certify::kkt_certificate(p, d, pt.u, pt.mu, pt.k);
  EXPECT_EQ(cert.stationarity_residual, 0.0);
  EXPECT_EQ(cert.comp_slackness_residual, 0.0);
  EXPECT_EQ(cert.objective, 0.0);
  EXPECT_LE(cert.constraint_satisfaction, 1e-15);
}

TEST(KktCertificateTest, PerturbationIsDetected) {
  const auto p = testing::diagonal_example(1.0, 3.0, 1.0);
  const auto d = dtpak::diagonalize(p);
  auto pt = dtpak::kkt_interior(d);
  pt.u[0] *= 1.01;
  const auto cert = certify::kkt_certificate(p, d, pt.u, pt.mu, pt.k);
  EXPECT_GE(cert.stationarity_residual, 1e-4);
}

TEST(KktCertificateTest, ZeroVectorRejected) {
  const auto p = testing::diagonal_example(1.0, 3.0, 1.0);
  const auto d = dtpak::diagonalize(p);
  try {
    (void)certify::kkt_certificate(p, d, RealVector{0.0, 0.0}, 1.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroVector);
  }
}

TEST(EstimateMultipliersTest, RecoversSolverMultipliers) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GeneratorConfig cfg;
    cfg.n = 9;
    cfg.seed = seed;
    const auto d = dtpak::diagonalize(generate(cfg));
    const auto pt = dtpak::kkt_interior(d);
    const auto est = certify::estimate_multipliers(d, pt.u);
    EXPECT_NEAR(est.mu, pt.mu, 1e-8 * pt.mu);
    EXPECT_NEAR(est.k, pt.k, 1e-8 * pt.k);
  }
}

TEST(CertifyWeightsTest, AcceptsOptimumAndRejectsScaledPoint) {
  GeneratorConfig cfg;
  cfg.n = 8;
  cfg.seed = 4;
  const auto p = generate(cfg);
  const auto out = dtpak::solve(p);
  const auto good = certify::certify_weights(p, out.diagonalized, out.solution->w);
  EXPECT_LE(good.constraint_satisfaction, 1e-8);
  EXPECT_LE(good.stationarity_residual, 1e-6);

  ComplexVector w = out.solution->w;
  w[0] *= 1.2;
  const auto bad = certify::certify_weights(p, out.diagonalized, w);
  EXPECT_GT(bad.stationarity_residual, 1e-4);
}

TEST(Oracle2dTest, WorkedExamples) {
  const auto e1 = certify::oracle_2d(testing::diagonal_example(1.0, 3.0, 1.0));
  ASSERT_TRUE(e1.feasible);
  const double ref1 = 0.55367816 * 0.55367816 + 3.0 * 0.65013858 * 0.65013858;
  EXPECT_NEAR(e1.objective, ref1, 1e-3);
  EXPECT_GE(e1.objective, ref1 - 1e-7);  // ref1 carries 8 digits

  const auto e3 = certify::oracle_2d(testing::diagonal_example(1.0, 0.0, 1.0));
  ASSERT_TRUE(e3.feasible);
  EXPECT_NEAR(e3.objective, 0.0, 1e-3);

  const double ref4 = (2.0 + std::numbers::sqrt2) * (2.0 + std::numbers::sqrt2);
  const auto e4 = certify::oracle_2d(testing::diagonal_example(1.0, 0.0, 3.0 / std::sqrt(2.0)));
  ASSERT_TRUE(e4.feasible);
  EXPECT_NEAR(e4.objective, ref4, 1e-3);
  EXPECT_GE(e4.objective, ref4 - 1e-9);
}

TEST(Oracle2dTest, InfeasibleFindsNothing) {
  EXPECT_FALSE(certify::oracle_2d(testing::diagonal_example(1.0, 3.0, 3.0)).feasible);
}

TEST(Oracle2dTest, RejectsComplexOrLargerProblems) {
  auto p = testing::diagonal_example(1.0, 3.0, 1.0);
  p.a[0] = cplx{1.0, 0.1};
  EXPECT_THROW((void)certify::oracle_2d(p), Error);
  GeneratorConfig cfg;
  cfg.n = 3;
  EXPECT_THROW((void)certify::oracle_2d(generate(cfg)), Error);
}

TEST(OptimalityGapTest, SelfIsZero) {
  const auto p = testing::diagonal_example(1.0, 3.0, 1.0);
  const ComplexVector w{0.5, 0.5};
  EXPECT_EQ(certify::optimality_gap(p, w, certify::objective(p, w)), 0.0);
  EXPECT_DOUBLE_EQ(certify::optimality_gap(p, w, 0.0), 1.0);
}

}  // namespace
}  // namespace rab
