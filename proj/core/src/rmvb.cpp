#include "rab/rmvb.hpp"

#include <cmath>
#include <string>

#include "rab/certify.hpp"

namespace rab::rmvb {

RealMatrix embed_matrix(const ComplexMatrix& m) {
  const std::size_t r = m.rows();
  const std::size_t c = m.cols();
  RealMatrix out(2 * r, 2 * c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      const cplx z = m(i, j);
      out(i, j) = z.real();
      out(i, j + c) = -z.imag();
      out(i + r, j) = z.imag();
      out(i + r, j + c) = z.real();
    }
  }
  return out;
}

RealVector embed_vector(std::span<const cplx> v) {
  const std::size_t n = v.size();
  RealVector out(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = v[i].real();
    out[i + n] = v[i].imag();
  }
  return out;
}

ComplexVector unembed_vector(std::span<const double> v) {
  if (v.size() % 2 != 0) {
    throw Error(ErrorCode::DimensionMismatch, "embedded vector must have even length");
  }
  const std::size_t n = v.size() / 2;
  ComplexVector out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {v[i], v[i + n]};
  return out;
}

RealEmbedding embed(const RabProblem& p) {
  RealEmbedding e;
  e.R_check = embed_matrix(p.R);
  e.A_check = embed_matrix(p.A);
  e.a_check = embed_vector(p.a);
  e.R_factor = linalg::cholesky_upper(e.R_check);

  e.Q_check = linalg::gram(e.A_check);
  const double eps_sq = p.epsilon * p.epsilon;
  const std::size_t n2 = e.a_check.size();
  for (std::size_t i = 0; i < n2; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      e.Q_check(i, j) = eps_sq * e.Q_check(i, j) - e.a_check[i] * e.a_check[j];
    }
  }
  return e;
}

double secular_S(double zeta, std::span<const double> gamma, std::span<const double> b_check, double pole_tolerance) {
  if (gamma.size() != b_check.size()) {
    throw Error(ErrorCode::DimensionMismatch, "secular_S: gamma and b have different lengths");
  }
  double quadratic = 0.0;
  double linear = 0.0;
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    const double denom = 1.0 + zeta * gamma[i];
    if (std::abs(denom) <= pole_tolerance) {
      throw Error(ErrorCode::PoleHit, "zeta = " + std::to_string(zeta) + " sits on a pole");
    }
    const double b_sq = b_check[i] * b_check[i];
    quadratic += b_sq * gamma[i] / (denom * denom);
    linear += b_sq / denom;
  }
  return zeta * zeta * quadratic - 2.0 * zeta * linear - 1.0;
}

namespace {

struct Whitened {
  RealVector gamma;
  RealVector b_check;
  RealMatrix V_check;
};

Whitened whiten(const RealEmbedding& e) {
  const RealMatrix& g = e.R_factor;
  // G^{-T} Q G^{-1}, with Q symmetric.
  const RealMatrix left = linalg::solve_upper_adjoint(g, e.Q_check);
  const RealMatrix m = linalg::hermitian_part(linalg::solve_upper_adjoint(g, linalg::adjoint(left)));
  auto evd = linalg::hermitian_evd(m);
  const RealVector a_white = linalg::solve_upper(g, std::span<const double>(e.a_check), linalg::Side::Adjoint);
  Whitened out;
  out.b_check = linalg::adjoint_matvec(evd.vectors, std::span<const double>(a_white));
  out.gamma = std::move(evd.values);
  out.V_check = std::move(evd.vectors);
  return out;
}

ComplexVector beamformer(const RealEmbedding& e, const Whitened& wh, double zeta) {
  RealVector x(wh.gamma.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = -zeta * wh.b_check[i] / (1.0 + zeta * wh.gamma[i]);
  const RealVector y = linalg::matvec(wh.V_check, std::span<const double>(x));
  const RealVector w_check = linalg::solve_upper(e.R_factor, std::span<const double>(y));
  return unembed_vector(w_check);
}

}  // namespace

Result rmvb_solve(const RabProblem& p, const Options& opts) {
  const RealEmbedding e = embed(p);
  const Whitened wh = whiten(e);

  const double gamma_min = wh.gamma.back();
  if (!(gamma_min < 0.0)) {
    throw Error(ErrorCode::RootNotFound, "Q has no negative eigenvalue; the constraint set is empty");
  }
  const double pole = -1.0 / gamma_min;
  auto S = [&](double z) { return secular_S(z, wh.gamma, wh.b_check); };

  // Geometric scan above the pole; S tends to -inf there and to a positive
  // limit as zeta grows whenever the problem is feasible.
  double prev_z = pole * (1.0 + 1e-12);
  double prev_s = S(prev_z);
  for (int step = 1; step < 400; ++step) {
    const double z = pole * (1.0 + 1e-12 * std::ldexp(1.0, step));
    if (!std::isfinite(z)) break;
    const double s = S(z);
    if ((prev_s < 0.0) != (s < 0.0)) {
      double lo = prev_z;
      double hi = z;
      double s_lo = prev_s;
      double s_hi = s;
      for (int it = 0; it < opts.max_iterations && hi - lo > opts.bisection_tolerance * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double s_mid = S(mid);
        if ((s_mid < 0.0) == (s_lo < 0.0)) {
          lo = mid;
          s_lo = s_mid;
        } else {
          hi = mid;
          s_hi = s_mid;
        }
      }
      const double root = std::abs(s_lo) <= std::abs(s_hi) ? lo : hi;
      Result candidate{beamformer(e, wh, root), root, std::abs(s_lo) <= std::abs(s_hi) ? s_lo : s_hi};
      if (certify::constraint_satisfaction(p, candidate.w) <= opts.feasibility_tolerance) {
        return candidate;
      }
    }
    prev_z = z;
    prev_s = s;
  }
  throw Error(ErrorCode::RootNotFound, "no root of S above the pole gives a feasible beamformer");
}

}  // namespace rab::rmvb
