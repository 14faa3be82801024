#pragma once

// Baseline Lagrange-multiplier solver working on the real 2N-dimensional
// embedding of the problem. Needs a positive definite covariance.

#include <span>

#include "rab/linalg.hpp"
#include "rab/problem.hpp"

namespace rab::rmvb {

/// Real representation of the complex operands. For a complex matrix X the
/// embedding is [[Re X, -Im X], [Im X, Re X]]; vectors stack [Re; Im].
struct RealEmbedding {
  RealMatrix R_check;  // 2n x 2n
  RealMatrix A_check;  // 2m x 2n
  RealVector a_check;  // 2n
  RealMatrix Q_check;  // eps^2 A_check^T A_check - a_check a_check^T
  RealMatrix R_factor;  // upper Cholesky factor G of R_check (G^T G = R_check)
};

RealMatrix embed_matrix(const ComplexMatrix& m);
RealVector embed_vector(std::span<const cplx> v);
ComplexVector unembed_vector(std::span<const double> v);

/// Throws NotPositiveDefinite when R is singular.
RealEmbedding embed(const RabProblem& p);

/// S(z) = z^2 sum b_n^2 g_n / (1 + z g_n)^2 - 2 z sum b_n^2 / (1 + z g_n) - 1.
/// Throws PoleHit when some |1 + z g_n| is below `pole_tolerance`.
double secular_S(double zeta, std::span<const double> gamma, std::span<const double> b_check,
                 double pole_tolerance = 1e-300);

struct Options {
  /// Relative bracket width at which bisection on zeta stops.
  double bisection_tolerance = 1e-15;
  int max_iterations = 400;
  /// A candidate root is accepted only if its beamformer meets this
  /// constraint-satisfaction level.
  double feasibility_tolerance = 1e-8;
};

struct Result {
  ComplexVector w;
  double zeta = 0.0;
  double secular_value = 0.0;  // S at the accepted root
};

/// Scans zeta upward from just above the pole -1/gamma_min, bisects each sign
/// change of S, and returns the first root whose beamformer is feasible.
Result rmvb_solve(const RabProblem& p, const Options& opts = {});

}  // namespace rab::rmvb
