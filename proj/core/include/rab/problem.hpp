#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rab/linalg.hpp"

namespace rab {

/// minimize w^H R w  s.t.  w^H a >= eps * ||A w||_2 + 1,  Im[w^H a] = 0.
struct RabProblem {
  ComplexMatrix R;  // n x n sample covariance, Hermitian PSD
  ComplexVector a;  // steering vector
  ComplexMatrix A;  // m x n, full column rank
  double epsilon = 0.0;

  std::size_t n() const noexcept { return a.size(); }
  std::size_t m() const noexcept { return A.rows(); }

  bool operator==(const RabProblem&) const = default;
};

/// Outcome of checking the standing assumptions on a problem.
struct ValidationReport {
  bool dimensions_ok = true;
  bool finite = true;
  bool covariance_hermitian = true;
  bool covariance_psd = true;
  bool covariance_nonzero = true;
  bool epsilon_positive = true;
  bool steering_nonzero = true;
  bool transform_full_column_rank = true;
  std::vector<std::string> messages;

  bool ok() const noexcept {
    return dimensions_ok && finite && covariance_hermitian && covariance_psd && covariance_nonzero &&
           epsilon_positive && steering_nonzero && transform_full_column_rank;
  }
};

ValidationReport validate(const RabProblem& p);

/// Half-wavelength ULA response: a_k = exp(-j*pi*k*sin(theta)), k = 0..n-1.
ComplexVector steering_vector(double theta, std::size_t n);

enum class SteeringKind { Steering };

enum class TransformKind { Tall5N, SquareN, Identity, CovarianceLike };

enum class EpsilonRule { FullRankThird, RankDefLarge, RankDefSmall, Explicit };

std::string_view to_string(TransformKind kind);
std::string_view to_string(EpsilonRule rule);
std::optional<TransformKind> parse_transform_kind(std::string_view text);
std::optional<EpsilonRule> parse_epsilon_rule(std::string_view text);

struct GeneratorConfig {
  std::size_t n = 10;
  std::size_t covariance_rank = 0;  // columns of F in R = tau F F^T + sigma I; 0 means n
  double sigma = 0.1;
  SteeringKind a_kind = SteeringKind::Steering;
  std::optional<double> a_theta;  // drawn uniformly from [-pi, pi] when unset
  TransformKind A_kind = TransformKind::SquareN;
  EpsilonRule epsilon_rule = EpsilonRule::FullRankThird;
  double explicit_epsilon_sq = 0.0;  // used by EpsilonRule::Explicit
  std::uint64_t seed = 0;
};

/// Diagonal loading used for CovarianceLike transforms when cfg.sigma is 0,
/// so that A stays positive definite in the rank-deficient recipe.
inline constexpr double kTransformLoading = 0.1;

/// Random instance following the simulation recipe: R = tau F F^T + sigma I
/// with tau ~ chi^2(1) and F real Gaussian n x r, a steering vector at a
/// random angle, A drawn per `A_kind`, and eps^2 fixed by `epsilon_rule`
/// relative to the c-masses of the diagonalized problem. Deterministic in cfg.
RabProblem generate(const GeneratorConfig& cfg);

/// The small two-dimensional worked examples (R diagonal, A = I, a = [1, 2]).
struct ReferenceExample {
  std::string name;
  RabProblem problem;
};
std::vector<ReferenceExample> reference_examples();

// Problem files: JSON with complex entries as [re, im] pairs.

struct LoadedProblem {
  RabProblem problem;
  std::vector<std::string> warnings;  // failed standing assumptions
};

std::string serialize_problem(const RabProblem& p);
LoadedProblem parse_problem(std::string_view text);
void save_problem(const RabProblem& p, const std::filesystem::path& path);
LoadedProblem load_problem(const std::filesystem::path& path);

/// A claimed beamformer. Fields other than `w` are informational.
struct SolutionFile {
  ComplexVector w;
  std::string verdict;
  std::optional<double> objective;
  std::optional<double> mu;
  std::optional<double> k;
};

std::string serialize_solution(const SolutionFile& s);
SolutionFile parse_solution(std::string_view text);
void save_solution(const SolutionFile& s, const std::filesystem::path& path);
SolutionFile load_solution(const std::filesystem::path& path);

}  // namespace rab
