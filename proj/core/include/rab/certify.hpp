#pragma once

#include <array>
#include <span>

#include "rab/dtpak.hpp"
#include "rab/problem.hpp"

namespace rab::certify {

struct Certificate {
  double constraint_satisfaction = 0.0;
  double stationarity_residual = 0.0;
  double comp_slackness_residual = 0.0;
  bool dual_feasibility = true;
  double objective = 0.0;
  double transform_consistency = 0.0;
};

/// |min(C1(w), 0)| + |C2(w)| with C1 = Re[w^H a] - (eps ||A w|| + 1) and
/// C2 = Im[w^H a].
double constraint_satisfaction(const RabProblem& p, std::span<const cplx> w);

/// w^H R w (real part).
double objective(const RabProblem& p, std::span<const cplx> w);

/// KKT residuals of the reduced real problem at (u, mu, k), plus the
/// feasibility metric and objective of the recovered w = recover(d, u).
/// Throws ZeroVector for u = 0.
Certificate kkt_certificate(const RabProblem& p, const dtpak::DiagonalizedProblem& d, std::span<const double> u,
                            double mu, double k);

struct Multipliers {
  double mu = 0.0;
  double k = 0.0;
};

/// Multipliers implied by a reduced point when only u is known (another
/// solver's output): projecting stationarity onto u gives
/// 2 sum lambda u^2 = mu (c^T u - eps ||u||).
Multipliers estimate_multipliers(const dtpak::DiagonalizedProblem& d, std::span<const double> u);

/// Certificate for an arbitrary claimed w: reduce to u, estimate multipliers,
/// and evaluate everything in the original coordinates.
Certificate certify_weights(const RabProblem& p, const dtpak::DiagonalizedProblem& d, std::span<const cplx> w);

struct OracleResult {
  bool feasible = false;
  double objective = 0.0;
  std::array<double, 2> w{};
  double half_width = 0.0;  // L, half the side of the coarse search box
  double resolution = 0.0;  // final angular step of the ray refinement
};

/// Grid search over real w in [-L, L]^2 for two-dimensional problems with
/// all-real data, refined by a search over ray directions (on each ray the
/// best feasible point is available in closed form). Independent of the
/// closed-form pipeline: only direct 2x2 arithmetic is used.
OracleResult oracle_2d(const RabProblem& p);

/// |w^H R w - reference_objective|.
double optimality_gap(const RabProblem& p, std::span<const cplx> w, double reference_objective);

}  // namespace rab::certify
