#include "rab/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace rab::certify {

double constraint_satisfaction(const RabProblem& p, std::span<const cplx> w) {
  const cplx wa = linalg::dot(w, std::span<const cplx>(p.a));
  const ComplexVector aw = linalg::matvec(p.A, w);
  const double c1 = wa.real() - (p.epsilon * linalg::norm2<cplx>(aw) + 1.0);
  const double c2 = wa.imag();
  return std::abs(std::min(c1, 0.0)) + std::abs(c2);
}

double objective(const RabProblem& p, std::span<const cplx> w) {
  const ComplexVector rw = linalg::matvec(p.R, w);
  return linalg::dot(w, std::span<const cplx>(rw)).real();
}

Certificate kkt_certificate(const RabProblem& p, const dtpak::DiagonalizedProblem& d, std::span<const double> u,
                            double mu, double k) {
  (void)k;  // k = mu eps / ||u|| is implied by (u, mu); accepted for symmetry with the solver output
  if (u.size() != d.size()) {
    throw Error(ErrorCode::DimensionMismatch, "kkt_certificate: u has wrong length");
  }
  const double norm_u = linalg::norm2<double>(u);
  if (norm_u == 0.0) {
    throw Error(ErrorCode::ZeroVector, "u = 0 is never feasible");
  }
  const RealVector lambda = d.effective_lambda();
  Certificate cert;
  double weighted = 0.0;
  double reduced_objective = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double grad = 2.0 * lambda[i] * u[i] - mu * (d.c[i] - d.epsilon * u[i] / norm_u);
    cert.stationarity_residual = std::max(cert.stationarity_residual, std::abs(grad));
    weighted += d.c[i] * u[i];
    reduced_objective += d.lambda[i] * u[i] * u[i];
  }
  const double slack = weighted - d.epsilon * norm_u - 1.0;
  cert.comp_slackness_residual = std::abs(mu * slack);
  cert.dual_feasibility = mu >= 0.0;

  const ComplexVector w = dtpak::recover(d, u);
  cert.constraint_satisfaction = constraint_satisfaction(p, w);
  cert.objective = objective(p, w);
  cert.transform_consistency = std::abs(cert.objective - reduced_objective);
  return cert;
}

Multipliers estimate_multipliers(const dtpak::DiagonalizedProblem& d, std::span<const double> u) {
  const double norm_u = linalg::norm2<double>(u);
  if (norm_u == 0.0) {
    throw Error(ErrorCode::ZeroVector, "u = 0 is never feasible");
  }
  const RealVector lambda = d.effective_lambda();
  double quad = 0.0;
  double weighted = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    quad += lambda[i] * u[i] * u[i];
    weighted += d.c[i] * u[i];
  }
  const double margin = weighted - d.epsilon * norm_u;
  Multipliers out;
  if (margin > 0.0) {
    out.mu = 2.0 * quad / margin;
    out.k = out.mu * d.epsilon / norm_u;
  }
  return out;
}

Certificate certify_weights(const RabProblem& p, const dtpak::DiagonalizedProblem& d, std::span<const cplx> w) {
  const RealVector u = dtpak::reduce(d, w);
  if (linalg::norm2<double>(u) == 0.0) {
    Certificate cert;
    cert.constraint_satisfaction = constraint_satisfaction(p, w);
    cert.objective = objective(p, w);
    return cert;
  }
  const auto multipliers = estimate_multipliers(d, u);
  Certificate cert = kkt_certificate(p, d, u, multipliers.mu, multipliers.k);
  // Judge the claimed vector itself, not its phase-aligned image.
  cert.constraint_satisfaction = constraint_satisfaction(p, w);
  cert.objective = objective(p, w);
  double reduced_objective = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) reduced_objective += d.lambda[i] * u[i] * u[i];
  cert.transform_consistency = std::abs(cert.objective - reduced_objective);
  return cert;
}

namespace {

struct Real2dProblem {
  double r11, r12, r22;
  double a1, a2;
  RealMatrix A;
  double epsilon;

  double objective(double x, double y) const { return r11 * x * x + 2.0 * r12 * x * y + r22 * y * y; }

  bool feasible(double x, double y) const {
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < A.rows(); ++i) {
      const double t = A(i, 0) * x + A(i, 1) * y;
      norm_sq += t * t;
    }
    return a1 * x + a2 * y - epsilon * std::sqrt(norm_sq) - 1.0 >= 0.0;
  }
};

struct GridBest {
  bool found = false;
  double objective = std::numeric_limits<double>::infinity();
  double x = 0.0;
  double y = 0.0;
};

GridBest scan(const Real2dProblem& q, double cx, double cy, double half, int points) {
  GridBest best;
  const double pitch = 2.0 * half / (points - 1);
  for (int i = 0; i < points; ++i) {
    const double x = cx - half + pitch * i;
    for (int j = 0; j < points; ++j) {
      const double y = cy - half + pitch * j;
      if (!q.feasible(x, y)) continue;
      const double f = q.objective(x, y);
      if (f < best.objective) {
        best = {true, f, x, y};
      }
    }
  }
  return best;
}

constexpr int kGridPoints = 401;
constexpr int kAngles = 3600;
constexpr int kAngleRefinements = 8;
constexpr int kAngleSamples = 401;

// Along the ray w = t d (t > 0) the constraint reads t g(d) >= 1 with
// g(d) = a^T d - eps ||A d||, and the objective is t^2 d^T R d. The best point
// on a ray with g > 0 is t = 1 / g.
struct RayValue {
  bool feasible = false;
  double objective = std::numeric_limits<double>::infinity();
  double x = 0.0;
  double y = 0.0;
};

RayValue ray(const Real2dProblem& q, double theta) {
  const double dx = std::cos(theta);
  const double dy = std::sin(theta);
  double norm_sq = 0.0;
  for (std::size_t i = 0; i < q.A.rows(); ++i) {
    const double t = q.A(i, 0) * dx + q.A(i, 1) * dy;
    norm_sq += t * t;
  }
  const double g = q.a1 * dx + q.a2 * dy - q.epsilon * std::sqrt(norm_sq);
  if (!(g > 0.0)) return {};
  const double t = 1.0 / g;
  return {true, t * t * q.objective(dx, dy), t * dx, t * dy};
}

}  // namespace

OracleResult oracle_2d(const RabProblem& p) {
  if (p.n() != 2) {
    throw Error(ErrorCode::DimensionMismatch, "oracle_2d handles two-dimensional problems only");
  }
  auto is_real = [](std::span<const cplx> v) {
    return std::all_of(v.begin(), v.end(), [](const cplx& z) { return z.imag() == 0.0; });
  };
  if (!is_real(p.R.entries()) || !is_real(p.a) || !is_real(p.A.entries())) {
    throw Error(ErrorCode::PreconditionViolated, "oracle_2d needs all-real data");
  }

  Real2dProblem q{p.R(0, 0).real(), 0.5 * (p.R(0, 1).real() + p.R(1, 0).real()), p.R(1, 1).real(),
                  p.a[0].real(),    p.a[1].real(),
                  RealMatrix(p.A.rows(), 2),
                  p.epsilon};
  for (std::size_t i = 0; i < p.A.rows(); ++i) {
    q.A(i, 0) = p.A(i, 0).real();
    q.A(i, 1) = p.A(i, 1).real();
  }

  // G = A^T A in closed form; a^T G^{-1} a is the feasibility mass, and the
  // smallest singular value of A converts whitened lengths back to w.
  double g11 = 0.0, g12 = 0.0, g22 = 0.0;
  for (std::size_t i = 0; i < q.A.rows(); ++i) {
    g11 += q.A(i, 0) * q.A(i, 0);
    g12 += q.A(i, 0) * q.A(i, 1);
    g22 += q.A(i, 1) * q.A(i, 1);
  }
  const double det = g11 * g22 - g12 * g12;
  OracleResult out;
  if (!(det > 0.0)) return out;
  const double mass = (g22 * q.a1 * q.a1 - 2.0 * g12 * q.a1 * q.a2 + g11 * q.a2 * q.a2) / det;
  const double trace = g11 + g22;
  const double min_eig = 0.5 * (trace - std::sqrt(std::max(0.0, trace * trace - 4.0 * det)));
  const double sigma_min = std::sqrt(std::max(min_eig, std::numeric_limits<double>::min()));
  const double gap = std::sqrt(mass) - p.epsilon;
  out.half_width = 10.0 * (1.0 + (gap > 0.0 ? 1.0 / gap : 0.0)) / sigma_min;

  const GridBest coarse = scan(q, 0.0, 0.0, out.half_width, kGridPoints);
  out.resolution = 2.0 * out.half_width / (kGridPoints - 1);

  // Refine over ray directions: a uniform sweep, then repeated zooms around
  // the best angle. The coarse grid point seeds the incumbent.
  RayValue best;
  if (coarse.found) best = {true, coarse.objective, coarse.x, coarse.y};
  double best_theta = coarse.found ? std::atan2(coarse.y, coarse.x) : 0.0;
  const double two_pi = 2.0 * std::numbers::pi;
  double step = two_pi / kAngles;
  for (int i = 0; i < kAngles; ++i) {
    const double theta = step * i;
    const RayValue r = ray(q, theta);
    if (r.feasible && r.objective < best.objective) {
      best = r;
      best_theta = theta;
    }
  }
  if (!best.feasible) return out;
  for (int level = 0; level < kAngleRefinements; ++level) {
    const double lo = best_theta - 2.0 * step;
    const double width = 4.0 * step;
    step = width / (kAngleSamples - 1);
    for (int i = 0; i < kAngleSamples; ++i) {
      const double theta = lo + step * i;
      const RayValue r = ray(q, theta);
      if (r.feasible && r.objective < best.objective) {
        best = r;
        best_theta = theta;
      }
    }
  }

  out.feasible = true;
  out.objective = best.objective;
  out.w = {best.x, best.y};
  out.resolution = std::min(out.resolution, step);
  return out;
}

double optimality_gap(const RabProblem& p, std::span<const cplx> w, double reference_objective) {
  return std::abs(objective(p, w) - reference_objective);
}

}  // namespace rab::certify
