#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "bench.hpp"
#include "rab/certify.hpp"
#include "rab/dtpak.hpp"
#include "rab/random.hpp"

namespace rab::cli {

namespace {

constexpr double kFeasibilityThreshold = 1e-8;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("RAB_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
    }
  }
  return 0;
}

int verdict_exit_code(dtpak::Verdict v) {
  switch (v) {
    case dtpak::Verdict::Infeasible: return kExitInfeasible;
    case dtpak::Verdict::NoFiniteSolution: return kExitNoFiniteSolution;
    default: return kExitOk;
  }
}

// Loads a problem and treats any failed standing assumption as an error.
std::optional<RabProblem> load_checked(const std::string& path, std::ostream& err) {
  const auto loaded = load_problem(path);
  if (!loaded.warnings.empty()) {
    for (const auto& w : loaded.warnings) err << "invalid problem: " << w << '\n';
    return std::nullopt;
  }
  return loaded.problem;
}

void print_vector(std::ostream& out, const char* name, const ComplexVector& w) {
  out << name << ":\n";
  for (std::size_t i = 0; i < w.size(); ++i) {
    out << "  [" << w[i].real() << ", " << w[i].imag() << "]\n";
  }
}

void print_certificate(std::ostream& out, const certify::Certificate& c) {
  out << "constraint_satisfaction: " << c.constraint_satisfaction << '\n'
      << "stationarity_residual: " << c.stationarity_residual << '\n'
      << "comp_slackness_residual: " << c.comp_slackness_residual << '\n'
      << "dual_feasibility: " << (c.dual_feasibility ? "yes" : "no") << '\n'
      << "transform_consistency: " << c.transform_consistency << '\n';
}

// --- gen -------------------------------------------------------------------

struct GenArgs {
  std::size_t n = 10;
  std::optional<std::size_t> rank;
  double sigma = 0.1;
  std::string a_kind = "square";
  std::optional<double> theta;
  std::string eps_rule = "full-rank-third";
  std::optional<double> eps_sq;
  std::uint64_t seed = 0;
  std::string output;
};

int cmd_gen(const GenArgs& a, std::ostream& out, std::ostream& err) {
  GeneratorConfig cfg;
  cfg.n = a.n;
  cfg.covariance_rank = a.rank.value_or(a.n);
  cfg.sigma = a.sigma;
  cfg.a_theta = a.theta;
  cfg.seed = a.seed;
  const auto kind = parse_transform_kind(a.a_kind);
  if (!kind) {
    err << "unknown --a-kind '" << a.a_kind << "'\n";
    return kExitError;
  }
  cfg.A_kind = *kind;
  auto rule = parse_epsilon_rule(a.eps_rule);
  if (!rule) {
    err << "unknown --eps-rule '" << a.eps_rule << "'\n";
    return kExitError;
  }
  if (a.eps_sq) {
    rule = EpsilonRule::Explicit;
    cfg.explicit_epsilon_sq = *a.eps_sq;
  } else if (*rule == EpsilonRule::Explicit) {
    err << "--eps-rule explicit needs --eps-sq\n";
    return kExitError;
  }
  cfg.epsilon_rule = *rule;

  const RabProblem p = generate(cfg);
  if (!a.output.empty()) save_problem(p, a.output);
  const auto cls = dtpak::classify(dtpak::diagonalize(p));
  out << "verdict: " << dtpak::to_string(cls.verdict) << '\n';
  return kExitOk;
}

// --- solve / classify --------------------------------------------------------

int cmd_solve(const std::string& file, const std::string& output, std::ostream& out, std::ostream& err) {
  const auto p = load_checked(file, err);
  if (!p) return kExitError;
  const auto result = dtpak::solve(*p);
  out << "verdict: " << dtpak::to_string(result.classification.verdict) << '\n';
  if (!result.solution) return verdict_exit_code(result.classification.verdict);

  const auto& s = *result.solution;
  print_vector(out, "w", s.w);
  out << "objective: " << s.objective << '\n' << "mu: " << s.mu << '\n' << "k: " << s.k << '\n';
  print_certificate(out, certify::kkt_certificate(*p, result.diagonalized, s.u, s.mu, s.k));
  if (!output.empty()) {
    SolutionFile sol;
    sol.w = s.w;
    sol.verdict = std::string(dtpak::to_string(result.classification.verdict));
    sol.objective = s.objective;
    sol.mu = s.mu;
    sol.k = s.k;
    save_solution(sol, output);
  }
  return kExitOk;
}

int cmd_classify(const std::string& file, std::ostream& out, std::ostream& err) {
  const auto p = load_checked(file, err);
  if (!p) return kExitError;
  const auto cls = dtpak::classify(dtpak::diagonalize(*p));
  out << "verdict: " << dtpak::to_string(cls.verdict) << '\n'
      << "epsilon_sq: " << p->epsilon * p->epsilon << '\n'
      << "zero_mass: " << cls.zero_mass << '\n'
      << "total_mass: " << cls.total_mass << '\n'
      << "near_boundary: " << (cls.near_boundary ? "yes" : "no") << '\n';
  return verdict_exit_code(cls.verdict);
}

int cmd_verify(const std::string& file, const std::string& solution_file, std::ostream& out, std::ostream& err) {
  const auto p = load_checked(file, err);
  if (!p) return kExitError;
  const auto sol = load_solution(solution_file);
  if (sol.w.size() != p->n()) {
    err << "solution has " << sol.w.size() << " entries, problem has n = " << p->n() << '\n';
    return kExitError;
  }
  const auto d = dtpak::diagonalize(*p);
  const auto cert = certify::certify_weights(*p, d, sol.w);
  out << "objective: " << cert.objective << '\n';
  print_certificate(out, cert);
  const bool pass = cert.constraint_satisfaction <= kFeasibilityThreshold;
  out << "result: " << (pass ? "pass" : "fail") << '\n';
  return pass ? kExitOk : kExitVerifyFailed;
}

// --- examples ----------------------------------------------------------------

struct ExampleCheck {
  bool pass;
  std::string detail;
};

ExampleCheck check_example(std::size_t index, const RabProblem& p) {
  constexpr double kTol = 1e-3;
  const auto result = dtpak::solve(p);
  const auto verdict = result.classification.verdict;
  auto near = [&](const ComplexVector& w, double x0, double x1) {
    return std::abs(w[0] - cplx(x0)) <= kTol && std::abs(w[1] - cplx(x1)) <= kTol;
  };
  std::ostringstream detail;
  detail << dtpak::to_string(verdict);
  if (result.solution) {
    const auto& w = result.solution->w;
    detail << std::fixed << std::setprecision(4) << " w = [" << w[0].real() << ", " << w[1].real() << "]";
  }
  bool pass = false;
  switch (index) {
    case 0:
      pass = verdict == dtpak::Verdict::Unique && near(result.solution->w, 0.5537, 0.6501);
      break;
    case 1: pass = verdict == dtpak::Verdict::Infeasible; break;
    case 2:
      pass = verdict == dtpak::Verdict::NonUnique && std::abs(result.solution->objective) <= 1e-12 &&
             std::abs(result.solution->w[0]) <= 1e-12;
      break;
    case 3:
      pass = verdict == dtpak::Verdict::Unique && near(result.solution->w, 3.4142, 9.6569);
      break;
    case 4: pass = verdict == dtpak::Verdict::NoFiniteSolution; break;
    default: break;
  }
  return {pass, detail.str()};
}

int cmd_examples(std::ostream& out) {
  const auto examples = reference_examples();
  std::size_t passed = 0;
  out << std::left << std::setw(4) << "#" << std::setw(36) << "example" << std::setw(6) << "check"
      << "result\n";
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto check = check_example(i, examples[i].problem);
    passed += check.pass;
    out << std::left << std::setw(4) << i + 1 << std::setw(36) << examples[i].name << std::setw(6)
        << (check.pass ? "pass" : "FAIL") << check.detail << '\n';
  }
  out << passed << "/" << examples.size() << " examples pass\n";
  return passed == examples.size() ? kExitOk : kExitError;
}

// --- bench -------------------------------------------------------------------

struct BenchArgs {
  std::vector<std::size_t> dims{50, 100, 200};
  std::size_t count = 10;
  std::vector<std::string> solvers{"dtpak", "rmvb"};
  std::uint64_t seed = 0;
  std::string a_kind = "square";
  double rank_ratio = 1.0;
  double sigma = 0.1;
  std::string eps_rule = "full-rank-third";
  std::optional<double> eps_sq;
  unsigned threads = 1;
  std::string output;
};

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  BenchConfig cfg;
  cfg.dims = a.dims;
  cfg.count = a.count;
  cfg.solvers = a.solvers;
  cfg.seed = a.seed;
  cfg.rank_ratio = a.rank_ratio;
  cfg.sigma = a.sigma;
  cfg.threads = a.threads;
  const auto kind = parse_transform_kind(a.a_kind);
  auto rule = parse_epsilon_rule(a.eps_rule);
  if (!kind || !rule) {
    err << "unknown --a-kind or --eps-rule\n";
    return kExitError;
  }
  cfg.A_kind = *kind;
  if (a.eps_sq) {
    rule = EpsilonRule::Explicit;
    cfg.explicit_epsilon_sq = *a.eps_sq;
  }
  cfg.epsilon_rule = *rule;
  for (const auto& s : cfg.solvers) {
    if (s != "dtpak" && s != "rmvb") {
      err << "unknown solver '" << s << "' (expected dtpak or rmvb)\n";
      return kExitError;
    }
  }
  if (std::find(cfg.dims.begin(), cfg.dims.end(), std::size_t{0}) != cfg.dims.end()) {
    err << "--dims entries must be positive\n";
    return kExitError;
  }

  const auto records = run_bench(cfg);
  if (a.output.empty()) {
    write_csv(out, records, a.a_kind);
  } else {
    std::ofstream file(a.output);
    if (!file) {
      err << "cannot write " << a.output << '\n';
      return kExitError;
    }
    write_csv(file, records, a.a_kind);
    out << "wrote " << records.size() << " rows to " << a.output << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Closed-form robust adaptive beamforming solver", "rab"};
  app.require_subcommand(1);

  GenArgs gen;
  gen.seed = default_seed();
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random problem instance");
  gen_cmd->add_option("--n", gen.n, "Array size")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--rank", gen.rank, "Covariance rank (default n)")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--sigma", gen.sigma, "Diagonal loading of the covariance")->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--a-kind", gen.a_kind, "Transform A: tall5n, square, identity, covariance");
  gen_cmd->add_option("--theta", gen.theta, "Steering angle in radians (random when omitted)");
  gen_cmd->add_option("--eps-rule", gen.eps_rule, "full-rank-third, rankdef-large, rankdef-small, explicit");
  gen_cmd->add_option("--eps-sq", gen.eps_sq, "Explicit eps^2 (implies --eps-rule explicit)")
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen.seed, "Random seed (default $RAB_SEED or 0)");
  gen_cmd->add_option("-o,--output", gen.output, "Problem file to write");

  std::string solve_file, solve_output;
  auto* solve_cmd = app.add_subcommand("solve", "Solve a problem file with the closed-form solver");
  solve_cmd->add_option("file", solve_file, "Problem file")->required();
  solve_cmd->add_option("-o,--output", solve_output, "Solution file to write");

  std::string classify_file;
  auto* classify_cmd = app.add_subcommand("classify", "Report existence/uniqueness of the optimum");
  classify_cmd->add_option("file", classify_file, "Problem file")->required();

  std::string verify_file, verify_solution;
  auto* verify_cmd = app.add_subcommand("verify", "Certify a claimed solution");
  verify_cmd->add_option("file", verify_file, "Problem file")->required();
  verify_cmd->add_option("solution", verify_solution, "Solution file")->required();

  auto* examples_cmd = app.add_subcommand("examples", "Run the built-in worked examples");

  BenchArgs bench;
  bench.seed = default_seed();
  auto* bench_cmd = app.add_subcommand("bench", "Time the solvers on random instances and emit CSV");
  bench_cmd->add_option("--dims", bench.dims, "Comma-separated array sizes")->delimiter(',');
  bench_cmd->add_option("--count", bench.count, "Instances per size")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--solvers", bench.solvers, "Comma-separated: dtpak, rmvb")->delimiter(',');
  bench_cmd->add_option("--seed", bench.seed, "Random seed (default $RAB_SEED or 0)");
  bench_cmd->add_option("--a-kind", bench.a_kind, "Transform A: tall5n, square, identity, covariance");
  bench_cmd->add_option("--rank-ratio", bench.rank_ratio, "Covariance rank as a fraction of n")
      ->check(CLI::Range(0.0, 1.0));
  bench_cmd->add_option("--sigma", bench.sigma, "Diagonal loading for full-rank covariances")
      ->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--eps-rule", bench.eps_rule, "full-rank-third, rankdef-large, rankdef-small");
  bench_cmd->add_option("--eps-sq", bench.eps_sq, "Explicit eps^2")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--threads", bench.threads, "Worker threads")->check(CLI::PositiveNumber);
  bench_cmd->add_option("-o,--output", bench.output, "CSV file (stdout when omitted)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen, out, err);
    if (*solve_cmd) return cmd_solve(solve_file, solve_output, out, err);
    if (*classify_cmd) return cmd_classify(classify_file, out, err);
    if (*verify_cmd) return cmd_verify(verify_file, verify_solution, out, err);
    if (*examples_cmd) return cmd_examples(out);
    if (*bench_cmd) return cmd_bench(bench, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace rab::cli
