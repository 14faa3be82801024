#pragma once

// Closed-form solver for the robust beamforming SOCP in three stages:
// diagonalization transform, phase alignment, and KKT solution. Also hosts the
// existence/uniqueness classifier.

#include <optional>
#include <string_view>
#include <vector>

#include "rab/linalg.hpp"
#include "rab/problem.hpp"

namespace rab::dtpak {

struct Options {
  /// lambda_n <= rank_tolerance * lambda_max is treated as an exact zero.
  double rank_tolerance = 1e-12;
  /// |eps^2 - zero_mass| within boundary_band * max(1, eps^2) is reported as
  /// NoFiniteSolution; eps^2 >= (1 - boundary_band) * total_mass is Infeasible.
  double boundary_band = 1e-10;
  /// Relative bracket width at which bisection on k stops.
  double bisection_tolerance = 1e-14;
  int max_iterations = 200;
  /// Computed eigenvalues below -psd_tolerance * lambda_max reject R as not PSD.
  double psd_tolerance = 1e-10;
};

/// Maps between the original variable w and the diagonal frame v:
/// v = U^H V B w, where B is the upper Cholesky factor of A^H A and V an
/// optional extra unitary (identity when empty) so that (VB)^H (VB) = A^H A.
struct TransformContext {
  ComplexMatrix B;
  ComplexMatrix V;
  ComplexMatrix U;
};

struct DiagonalizedProblem {
  RealVector lambda;  // nonincreasing, >= 0
  ComplexVector b;
  RealVector c;  // |b|
  double epsilon = 0.0;
  double rank_tolerance = 1e-12;
  TransformContext context;

  std::size_t size() const noexcept { return lambda.size(); }
  /// Membership of the zero-eigenvalue set I0.
  std::vector<bool> zero_set() const;
  /// lambda with members of I0 set to exactly zero.
  RealVector effective_lambda() const;
  double zero_mass() const;   // sum over I0 of c_n^2
  double total_mass() const;  // sum of c_n^2
};

DiagonalizedProblem diagonalize(const RabProblem& p, const Options& opts = {});

/// Same transform with B replaced by V*B for a caller-supplied unitary V.
/// The optimum is invariant to this choice; exposed for verifying that.
DiagonalizedProblem diagonalize(const RabProblem& p, const ComplexMatrix& extra_unitary,
                                const Options& opts = {});

enum class Verdict { Infeasible, NoFiniteSolution, Unique, NonUnique };

std::string_view to_string(Verdict v);

struct Classification {
  Verdict verdict = Verdict::Unique;
  double zero_mass = 0.0;
  double total_mass = 0.0;
  /// eps^2 fell inside a tolerance band around one of the two thresholds.
  bool near_boundary = false;

  bool has_solution() const noexcept { return verdict == Verdict::Unique || verdict == Verdict::NonUnique; }
};

Classification classify(const DiagonalizedProblem& d, const Options& opts = {});

/// f(k) = sum_{I0} c_n^2 + sum_{not I0} (c_n k / (2 lambda_n + k))^2.
double secular_f(double k, const DiagonalizedProblem& d);

/// Root of f(k) = eps^2 by bracketing then bisection. Throws BracketFailure
/// outside the Unique regime, where no root exists.
double solve_k(const DiagonalizedProblem& d, const Options& opts = {});

/// mu = [sum_n 2 lambda_n c_n^2 / (2 lambda_n + k)^2]^{-1}.
double solve_mu(const DiagonalizedProblem& d, double k);

struct KktPoint {
  RealVector u;
  double mu = 0.0;
  double k = 0.0;
};

/// u_n = mu c_n / (2 lambda_n + k) with k and mu from the two scalar equations.
KktPoint kkt_interior(const DiagonalizedProblem& d, const Options& opts = {});

/// Canonical point of the non-unique solution set: zero off I0, and on I0
/// u_n = c_n / (S - eps sqrt(S)) with S the zero mass. Multipliers are zero.
KktPoint kkt_degenerate(const DiagonalizedProblem& d, const Options& opts = {});

/// v = u .* exp(j arg b) with arg(0) = 0.
ComplexVector align(const DiagonalizedProblem& d, std::span<const double> u);

/// Phase-alignment improvement of a feasible diagonal-frame point:
/// alpha |v| .* exp(j arg b) with alpha = Re[v^H b] / (|v|^T |b|).
ComplexVector phase_align(std::span<const cplx> v, std::span<const cplx> b);

/// w = (VB)^{-1} U [u .* exp(j arg b)].
ComplexVector recover(const DiagonalizedProblem& d, std::span<const double> u);

/// Inverse map of recover up to phase: |U^H V B w|.
RealVector reduce(const DiagonalizedProblem& d, std::span<const cplx> w);

struct Solution {
  ComplexVector w;
  RealVector u;
  double mu = 0.0;
  double k = 0.0;
  double objective = 0.0;  // w^H R w
  Classification classification;
};

struct SolveOutcome {
  Classification classification;
  std::optional<Solution> solution;  // present iff classification.has_solution()
  DiagonalizedProblem diagonalized;
};

/// Full pipeline: diagonalize, classify, then the interior or degenerate
/// KKT branch followed by recovery.
SolveOutcome solve(const RabProblem& p, const Options& opts = {});

}  // namespace rab::dtpak
