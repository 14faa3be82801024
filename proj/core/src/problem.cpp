#include "rab/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rab/dtpak.hpp"
#include "rab/random.hpp"

namespace rab {
namespace {

bool all_finite(std::span<const cplx> values) {
  return std::all_of(values.begin(), values.end(),
                     [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

// tau F F^T + sigma I with F real n x r and tau ~ chi^2(1); exactly symmetric.
ComplexMatrix random_covariance(Rng& rng, std::size_t n, std::size_t r, double sigma) {
  const double tau = rng.chi_square(1);
  RealMatrix f(n, r);
  for (double& x : f.entries()) x = rng.normal();
  ComplexMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < r; ++k) acc += f(i, k) * f(j, k);
      acc *= tau;
      if (i == j) acc += sigma;
      out(i, j) = acc;
      out(j, i) = acc;
    }
  }
  return out;
}

ComplexMatrix random_gaussian(Rng& rng, std::size_t rows, std::size_t cols) {
  ComplexMatrix out(rows, cols);
  for (cplx& z : out.entries()) z = rng.complex_normal();
  return out;
}

void check_config(const GeneratorConfig& cfg) {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::InvalidConfig, why); };
  if (cfg.n == 0) fail("n must be at least 1");
  if (cfg.covariance_rank > cfg.n) fail("covariance rank must not exceed n");
  if (!(cfg.sigma >= 0.0) || !std::isfinite(cfg.sigma)) fail("sigma must be a nonnegative finite number");
  if (cfg.covariance_rank != 0 && cfg.covariance_rank < cfg.n && cfg.sigma != 0.0) fail("a rank-deficient covariance needs sigma = 0");
  if (cfg.epsilon_rule == EpsilonRule::Explicit &&
      (!(cfg.explicit_epsilon_sq > 0.0) || !std::isfinite(cfg.explicit_epsilon_sq))) {
    fail("explicit eps^2 must be positive");
  }
  if (cfg.a_theta && !std::isfinite(*cfg.a_theta)) fail("theta must be finite");
}

}  // namespace

ValidationReport validate(const RabProblem& p) {
  ValidationReport report;
  const std::size_t n = p.n();
  if (n == 0 || p.R.rows() != n || p.R.cols() != n || p.A.cols() != n) {
    report.dimensions_ok = false;
    report.messages.push_back("operand dimensions are inconsistent");
    return report;
  }
  if (!all_finite(p.R.entries()) || !all_finite(p.a) || !all_finite(p.A.entries()) || !std::isfinite(p.epsilon)) {
    report.finite = false;
    report.messages.push_back("operands contain non-finite values");
    return report;
  }

  const double scale = std::max(1.0, linalg::norm_inf(p.R));
  if (!linalg::is_hermitian(p.R, 1e-10 * scale)) {
    report.covariance_hermitian = false;
    report.messages.push_back("assumption 1: R is not Hermitian");
  }
  const auto evd = linalg::hermitian_evd(linalg::hermitian_part(p.R));
  const double lambda_max = evd.values.front();
  if (!(lambda_max > 0.0)) {
    report.covariance_nonzero = false;
    report.messages.push_back("assumption 1: R must be nonzero");
  }
  if (evd.values.back() < -1e-10 * std::max(lambda_max, 0.0) || (lambda_max <= 0.0 && evd.values.back() < 0.0)) {
    report.covariance_psd = false;
    report.messages.push_back("assumption 1: R is not positive semidefinite (min eigenvalue " +
                              std::to_string(evd.values.back()) + ")");
  }
  if (!(p.epsilon > 0.0)) {
    report.epsilon_positive = false;
    report.messages.push_back("assumption 2: epsilon must be positive");
  }
  if (linalg::norm2<cplx>(p.a) == 0.0) {
    report.steering_nonzero = false;
    report.messages.push_back("assumption 3: a must be nonzero");
  }
  bool full_rank = p.A.rows() >= n;
  if (full_rank) {
    try {
      (void)linalg::cholesky_upper(linalg::gram(p.A));
    } catch (const Error&) {
      full_rank = false;
    }
  }
  if (!full_rank) {
    report.transform_full_column_rank = false;
    report.messages.push_back("assumption 4: A must have full column rank with m >= n");
  }
  return report;
}

ComplexVector steering_vector(double theta, std::size_t n) {
  const double phase_step = -std::numbers::pi * std::sin(theta);
  ComplexVector a(n);
  for (std::size_t k = 0; k < n; ++k) a[k] = std::polar(1.0, phase_step * static_cast<double>(k));
  return a;
}

std::string_view to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::Tall5N: return "tall5n";
    case TransformKind::SquareN: return "square";
    case TransformKind::Identity: return "identity";
    case TransformKind::CovarianceLike: return "covariance";
  }
  return "unknown";
}

std::string_view to_string(EpsilonRule rule) {
  switch (rule) {
    case EpsilonRule::FullRankThird: return "full-rank-third";
    case EpsilonRule::RankDefLarge: return "rankdef-large";
    case EpsilonRule::RankDefSmall: return "rankdef-small";
    case EpsilonRule::Explicit: return "explicit";
  }
  return "unknown";
}

std::optional<TransformKind> parse_transform_kind(std::string_view text) {
  for (auto kind : {TransformKind::Tall5N, TransformKind::SquareN, TransformKind::Identity,
                    TransformKind::CovarianceLike}) {
    if (text == to_string(kind)) return kind;
  }
  return std::nullopt;
}

std::optional<EpsilonRule> parse_epsilon_rule(std::string_view text) {
  for (auto rule : {EpsilonRule::FullRankThird, EpsilonRule::RankDefLarge, EpsilonRule::RankDefSmall,
                    EpsilonRule::Explicit}) {
    if (text == to_string(rule)) return rule;
  }
  return std::nullopt;
}

RabProblem generate(const GeneratorConfig& cfg) {
  check_config(cfg);
  Rng rng(cfg.seed);
  const std::size_t n = cfg.n;

  RabProblem p;
  p.R = random_covariance(rng, n, cfg.covariance_rank == 0 ? n : cfg.covariance_rank, cfg.sigma);
  const double theta = cfg.a_theta ? *cfg.a_theta : rng.uniform(-std::numbers::pi, std::numbers::pi);
  p.a = steering_vector(theta, n);
  switch (cfg.A_kind) {
    case TransformKind::Tall5N: p.A = random_gaussian(rng, 5 * n, n); break;
    case TransformKind::SquareN: p.A = random_gaussian(rng, n, n); break;
    case TransformKind::Identity: p.A = ComplexMatrix::identity(n); break;
    case TransformKind::CovarianceLike:
      p.A = random_covariance(rng, n, n, cfg.sigma > 0.0 ? cfg.sigma : kTransformLoading);
      break;
  }

  if (cfg.epsilon_rule == EpsilonRule::Explicit) {
    p.epsilon = std::sqrt(cfg.explicit_epsilon_sq);
    return p;
  }

  // Throwaway diagonalization for the c-masses; they do not depend on epsilon.
  p.epsilon = 1.0;
  const auto d = dtpak::diagonalize(p);
  const double zero_mass = d.zero_mass();
  const double total_mass = d.total_mass();
  double eps_sq = 0.0;
  switch (cfg.epsilon_rule) {
    case EpsilonRule::FullRankThird: eps_sq = total_mass / 3.0; break;
    case EpsilonRule::RankDefLarge: eps_sq = 0.5 * (zero_mass + total_mass); break;
    case EpsilonRule::RankDefSmall: eps_sq = 2.0 * zero_mass / 3.0; break;
    case EpsilonRule::Explicit: break;
  }
  if (!(eps_sq > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, std::string("epsilon rule ") + std::string(to_string(cfg.epsilon_rule)) +
                                              " needs a nonzero zero-eigenvalue mass (use rank < n)");
  }
  p.epsilon = std::sqrt(eps_sq);
  return p;
}

std::vector<ReferenceExample> reference_examples() {
  auto make = [](double lambda1, double lambda2, double epsilon) {
    RabProblem p;
    const double diag[] = {lambda1, lambda2};
    p.R = ComplexMatrix::diagonal(diag);
    p.a = {cplx{1.0, 0.0}, cplx{2.0, 0.0}};
    p.A = ComplexMatrix::identity(2);
    p.epsilon = epsilon;
    return p;
  };
  return {
      {"full-rank feasible", make(1.0, 3.0, 1.0)},
      {"full-rank infeasible", make(1.0, 3.0, 3.0)},
      {"rank-deficient non-unique", make(1.0, 0.0, 1.0)},
      {"rank-deficient unique", make(1.0, 0.0, 3.0 / std::numbers::sqrt2)},
      {"rank-deficient no finite solution", make(1.0, 0.0, 2.0)},
  };
}

}  // namespace rab
