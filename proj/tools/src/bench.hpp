#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rab/problem.hpp"

namespace rab::cli {

struct BenchRecord {
  std::size_t n = 0;
  std::string a_kind;
  std::size_t rank = 0;
  double epsilon_sq = 0.0;
  std::string solver;
  std::int64_t wall_ns = 0;
  double constraint_satisfaction = 0.0;
  double stationarity_residual = 0.0;
  double objective = 0.0;
  std::string verdict;
};

struct BenchConfig {
  std::vector<std::size_t> dims;
  std::size_t count = 10;
  std::vector<std::string> solvers{"dtpak", "rmvb"};
  std::uint64_t seed = 0;
  TransformKind A_kind = TransformKind::SquareN;
  double rank_ratio = 1.0;  // covariance rank = round(rank_ratio * n)
  double sigma = 0.1;       // forced to 0 when the rank is deficient
  EpsilonRule epsilon_rule = EpsilonRule::FullRankThird;
  double explicit_epsilon_sq = 0.0;
  unsigned threads = 1;
};

/// Generator settings for instance `index` at dimension `n`.
GeneratorConfig instance_config(const BenchConfig& cfg, std::size_t n, std::size_t index);

/// One record per (instance, solver), ordered by n, then instance, then solver.
std::vector<BenchRecord> run_bench(const BenchConfig& cfg);

struct MeanTime {
  std::size_t n = 0;
  std::string solver;
  double mean_ns = 0.0;
  std::size_t samples = 0;
};

/// Mean wall time per (n, solver) over records that produced a solution.
std::vector<MeanTime> summarize(const std::vector<BenchRecord>& records);

inline constexpr const char* kCsvHeader =
    "n,a_kind,rank,epsilon_sq,solver,wall_ns,constraint_satisfaction,stationarity_residual,objective,verdict";

void write_csv(std::ostream& out, const std::vector<BenchRecord>& records, const std::string& a_kind);

}  // namespace rab::cli
