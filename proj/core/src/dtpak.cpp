#include "rab/dtpak.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rab::dtpak {
namespace {

void check_shape(const RabProblem& p) {
  const std::size_t n = p.n();
  if (n == 0 || p.R.rows() != n || p.R.cols() != n || p.A.cols() != n || p.A.rows() < n) {
    throw Error(ErrorCode::DimensionMismatch, "problem operands do not have consistent dimensions");
  }
  if (!(p.epsilon > 0.0) || !std::isfinite(p.epsilon)) {
    throw Error(ErrorCode::InvalidProblem, "epsilon must be positive and finite");
  }
  if (linalg::norm2<cplx>(p.a) == 0.0) {
    throw Error(ErrorCode::InvalidProblem, "steering vector is zero");
  }
  if (!linalg::is_hermitian(p.R, 1e-10 * std::max(1.0, linalg::norm_inf(p.R)))) {
    throw Error(ErrorCode::InvalidProblem, "covariance is not Hermitian");
  }
}

DiagonalizedProblem diagonalize_impl(const RabProblem& p, const ComplexMatrix* extra_unitary, const Options& opts) {
  check_shape(p);
  const std::size_t n = p.n();

  DiagonalizedProblem d;
  d.epsilon = p.epsilon;
  d.rank_tolerance = opts.rank_tolerance;
  d.context.B = linalg::cholesky_upper(linalg::gram(p.A));

  // R~ = B^{-H} R B^{-1}, formed as B^{-H} (B^{-H} R)^H.
  const ComplexMatrix left = linalg::solve_upper_adjoint(d.context.B, p.R);
  ComplexMatrix transformed = linalg::hermitian_part(linalg::solve_upper_adjoint(d.context.B, linalg::adjoint(left)));
  ComplexVector a_tilde = linalg::solve_upper(d.context.B, std::span<const cplx>(p.a), linalg::Side::Adjoint);

  if (extra_unitary != nullptr) {
    const ComplexMatrix& v = *extra_unitary;
    if (v.rows() != n || v.cols() != n) {
      throw Error(ErrorCode::DimensionMismatch, "extra unitary must be n x n");
    }
    transformed = linalg::hermitian_part(linalg::multiply(linalg::multiply(v, transformed), linalg::adjoint(v)));
    a_tilde = linalg::matvec(v, std::span<const cplx>(a_tilde));
    d.context.V = v;
  }

  auto evd = linalg::hermitian_evd(transformed);
  const double lambda_max = evd.values.front();
  if (!(lambda_max > 0.0)) {
    throw Error(ErrorCode::InvalidProblem, "transformed covariance has no positive eigenvalue (R = 0?)");
  }
  for (double& lam : evd.values) {
    if (lam < 0.0) {
      if (lam < -opts.psd_tolerance * lambda_max) {
        throw Error(ErrorCode::InvalidProblem,
                    "covariance is not positive semidefinite (eigenvalue " + std::to_string(lam) + ")");
      }
      lam = 0.0;
    }
  }

  d.b = linalg::adjoint_matvec(evd.vectors, std::span<const cplx>(a_tilde));
  d.c.resize(n);
  for (std::size_t i = 0; i < n; ++i) d.c[i] = std::abs(d.b[i]);
  d.lambda = std::move(evd.values);
  d.context.U = std::move(evd.vectors);
  return d;
}

}  // namespace

std::vector<bool> DiagonalizedProblem::zero_set() const {
  const double lambda_max = lambda.empty() ? 0.0 : *std::max_element(lambda.begin(), lambda.end());
  std::vector<bool> zero(lambda.size());
  for (std::size_t i = 0; i < lambda.size(); ++i) zero[i] = lambda[i] <= rank_tolerance * lambda_max;
  return zero;
}

RealVector DiagonalizedProblem::effective_lambda() const {
  RealVector out = lambda;
  const auto zero = zero_set();
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (zero[i]) out[i] = 0.0;
  }
  return out;
}

double DiagonalizedProblem::zero_mass() const {
  const auto zero = zero_set();
  double sum = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (zero[i]) sum += c[i] * c[i];
  }
  return sum;
}

double DiagonalizedProblem::total_mass() const {
  double sum = 0.0;
  for (double ci : c) sum += ci * ci;
  return sum;
}

DiagonalizedProblem diagonalize(const RabProblem& p, const Options& opts) {
  return diagonalize_impl(p, nullptr, opts);
}

DiagonalizedProblem diagonalize(const RabProblem& p, const ComplexMatrix& extra_unitary, const Options& opts) {
  return diagonalize_impl(p, &extra_unitary, opts);
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Infeasible: return "Infeasible";
    case Verdict::NoFiniteSolution: return "NoFiniteSolution";
    case Verdict::Unique: return "Unique";
    case Verdict::NonUnique: return "NonUnique";
  }
  return "Unknown";
}

Classification classify(const DiagonalizedProblem& d, const Options& opts) {
  Classification out;
  out.zero_mass = d.zero_mass();
  out.total_mass = d.total_mass();
  const double eps_sq = d.epsilon * d.epsilon;
  const double zero_band = opts.boundary_band * std::max(1.0, eps_sq);
  const double total_band = opts.boundary_band * out.total_mass;

  if (eps_sq >= out.total_mass - total_band) {
    out.verdict = Verdict::Infeasible;
    out.near_boundary = eps_sq < out.total_mass + total_band;
  } else if (std::abs(eps_sq - out.zero_mass) <= zero_band) {
    out.verdict = Verdict::NoFiniteSolution;
    out.near_boundary = eps_sq != out.zero_mass;
  } else if (eps_sq < out.zero_mass) {
    out.verdict = Verdict::NonUnique;
  } else {
    out.verdict = Verdict::Unique;
  }
  return out;
}

double secular_f(double k, const DiagonalizedProblem& d) {
  const auto zero = d.zero_set();
  double sum = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (zero[i]) {
      sum += d.c[i] * d.c[i];
    } else {
      const double t = d.c[i] * k / (2.0 * d.lambda[i] + k);
      sum += t * t;
    }
  }
  return sum;
}

double solve_k(const DiagonalizedProblem& d, const Options& opts) {
  const double target = d.epsilon * d.epsilon;
  double lo = 1.0;
  double hi = 1.0;
  int steps = 0;
  while (secular_f(lo, d) > target) {
    lo *= 0.5;
    if (++steps > opts.max_iterations || lo == 0.0) {
      throw Error(ErrorCode::BracketFailure, "f(k) stays above eps^2 as k -> 0; verdict is not Unique");
    }
  }
  steps = 0;
  while (secular_f(hi, d) < target) {
    hi *= 2.0;
    if (++steps > opts.max_iterations || !std::isfinite(hi)) {
      throw Error(ErrorCode::BracketFailure, "f(k) stays below eps^2 as k grows; verdict is not Unique");
    }
  }
  if (lo == hi) return lo;

  double f_lo = secular_f(lo, d) - target;
  double f_hi = secular_f(hi, d) - target;
  for (int it = 0; it < opts.max_iterations && hi - lo > opts.bisection_tolerance * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = secular_f(mid, d) - target;
    if (f_mid == 0.0) return mid;
    if (f_mid < 0.0) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }
  return std::abs(f_lo) <= std::abs(f_hi) ? lo : hi;
}

double solve_mu(const DiagonalizedProblem& d, double k) {
  const RealVector lambda = d.effective_lambda();
  double sum = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double denom = 2.0 * lambda[i] + k;
    sum += 2.0 * lambda[i] * d.c[i] * d.c[i] / (denom * denom);
  }
  if (!(sum > 0.0) || !std::isfinite(1.0 / sum)) {
    throw Error(ErrorCode::DegenerateDenominator, "multiplier denominator vanished");
  }
  return 1.0 / sum;
}

KktPoint kkt_interior(const DiagonalizedProblem& d, const Options& opts) {
  const auto cls = classify(d, opts);
  if (cls.verdict != Verdict::Unique) {
    throw Error(ErrorCode::PreconditionViolated,
                "interior KKT point requires a Unique verdict, got " + std::string(to_string(cls.verdict)));
  }
  KktPoint out;
  out.k = solve_k(d, opts);
  out.mu = solve_mu(d, out.k);
  const RealVector lambda = d.effective_lambda();
  out.u.resize(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) out.u[i] = out.mu * d.c[i] / (2.0 * lambda[i] + out.k);
  return out;
}

KktPoint kkt_degenerate(const DiagonalizedProblem& d, const Options& opts) {
  const auto cls = classify(d, opts);
  if (cls.verdict != Verdict::NonUnique) {
    throw Error(ErrorCode::PreconditionViolated,
                "degenerate KKT point requires a NonUnique verdict, got " + std::string(to_string(cls.verdict)));
  }
  const double s = cls.zero_mass;
  const double scale = 1.0 / (s - d.epsilon * std::sqrt(s));
  const auto zero = d.zero_set();
  KktPoint out;
  out.u.assign(d.size(), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (zero[i]) out.u[i] = d.c[i] * scale;
  }
  return out;
}

ComplexVector align(const DiagonalizedProblem& d, std::span<const double> u) {
  if (u.size() != d.size()) {
    throw Error(ErrorCode::DimensionMismatch, "magnitude vector has wrong length");
  }
  ComplexVector v(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    v[i] = d.c[i] > 0.0 ? u[i] * (d.b[i] / d.c[i]) : cplx{u[i], 0.0};
  }
  return v;
}

ComplexVector phase_align(std::span<const cplx> v, std::span<const cplx> b) {
  if (v.size() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch, "phase_align: lengths differ");
  }
  double magnitude_product = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) magnitude_product += std::abs(v[i]) * std::abs(b[i]);
  if (magnitude_product == 0.0) {
    throw Error(ErrorCode::ZeroVector, "phase_align: |v|^T |b| is zero");
  }
  const double alpha = linalg::dot(v, b).real() / magnitude_product;
  ComplexVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double mag = std::abs(b[i]);
    const cplx phase = mag > 0.0 ? b[i] / mag : cplx{1.0, 0.0};
    out[i] = alpha * std::abs(v[i]) * phase;
  }
  return out;
}

ComplexVector recover(const DiagonalizedProblem& d, std::span<const double> u) {
  const ComplexVector v = align(d, u);
  ComplexVector x = linalg::matvec(d.context.U, std::span<const cplx>(v));
  if (!d.context.V.empty()) x = linalg::adjoint_matvec(d.context.V, std::span<const cplx>(x));
  return linalg::solve_upper(d.context.B, std::span<const cplx>(x));
}

RealVector reduce(const DiagonalizedProblem& d, std::span<const cplx> w) {
  // B is upper triangular, so B w is a plain upper-triangular product.
  const std::size_t n = d.size();
  if (w.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "reduce: w has wrong length");
  }
  ComplexVector x(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = d.context.B.row(i);
    cplx acc{};
    for (std::size_t j = i; j < n; ++j) acc += row[j] * w[j];
    x[i] = acc;
  }
  if (!d.context.V.empty()) x = linalg::matvec(d.context.V, std::span<const cplx>(x));
  const ComplexVector v = linalg::adjoint_matvec(d.context.U, std::span<const cplx>(x));
  RealVector u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = std::abs(v[i]);
  return u;
}

SolveOutcome solve(const RabProblem& p, const Options& opts) {
  SolveOutcome out;
  out.diagonalized = diagonalize(p, opts);
  const DiagonalizedProblem& d = out.diagonalized;
  out.classification = classify(d, opts);

  KktPoint point;
  switch (out.classification.verdict) {
    case Verdict::Infeasible:
    case Verdict::NoFiniteSolution:
      return out;
    case Verdict::Unique:
      point = kkt_interior(d, opts);
      break;
    case Verdict::NonUnique:
      point = kkt_degenerate(d, opts);
      break;
  }

  Solution sol;
  sol.w = recover(d, point.u);
  sol.u = std::move(point.u);
  sol.mu = point.mu;
  sol.k = point.k;
  const ComplexVector rw = linalg::matvec(p.R, std::span<const cplx>(sol.w));
  sol.objective = std::max(0.0, linalg::dot(std::span<const cplx>(sol.w), std::span<const cplx>(rw)).real());
  sol.classification = out.classification;
  out.solution = std::move(sol);
  return out;
}

}  // namespace rab::dtpak
