#include "bench.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <thread>

#include "rab/certify.hpp"
#include "rab/dtpak.hpp"
#include "rab/random.hpp"
#include "rab/rmvb.hpp"

namespace rab::cli {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::int64_t elapsed_ns(std::chrono::steady_clock::time_point start) {
  const auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start);
  return std::max<std::int64_t>(1, ns.count());
}

BenchRecord run_dtpak(const RabProblem& p) {
  BenchRecord rec;
  rec.solver = "dtpak";
  const auto start = std::chrono::steady_clock::now();
  try {
    const auto out = dtpak::solve(p);
    rec.wall_ns = elapsed_ns(start);
    rec.verdict = dtpak::to_string(out.classification.verdict);
    if (out.solution) {
      const auto& s = *out.solution;
      const auto cert = certify::kkt_certificate(p, out.diagonalized, s.u, s.mu, s.k);
      rec.constraint_satisfaction = cert.constraint_satisfaction;
      rec.stationarity_residual = cert.stationarity_residual;
      rec.objective = s.objective;
    } else {
      rec.constraint_satisfaction = rec.stationarity_residual = rec.objective = kNan;
    }
  } catch (const Error& e) {
    rec.wall_ns = elapsed_ns(start);
    rec.verdict = std::string(to_string(e.code()));
    rec.constraint_satisfaction = rec.stationarity_residual = rec.objective = kNan;
  }
  return rec;
}

BenchRecord run_rmvb(const RabProblem& p) {
  BenchRecord rec;
  rec.solver = "rmvb";
  const auto start = std::chrono::steady_clock::now();
  try {
    const auto result = rmvb::rmvb_solve(p);
    rec.wall_ns = elapsed_ns(start);
    rec.verdict = "Solved";
    const auto d = dtpak::diagonalize(p);
    const auto cert = certify::certify_weights(p, d, result.w);
    rec.constraint_satisfaction = cert.constraint_satisfaction;
    rec.stationarity_residual = cert.stationarity_residual;
    rec.objective = cert.objective;
  } catch (const Error& e) {
    rec.wall_ns = elapsed_ns(start);
    rec.verdict = std::string(to_string(e.code()));
    rec.constraint_satisfaction = rec.stationarity_residual = rec.objective = kNan;
  }
  return rec;
}

void put_real(std::ostream& out, double x) {
  if (std::isfinite(x)) {
    out << x;
  } else {
    out << "nan";
  }
}

}  // namespace

GeneratorConfig instance_config(const BenchConfig& cfg, std::size_t n, std::size_t index) {
  GeneratorConfig g;
  g.n = n;
  const auto rank = static_cast<std::size_t>(std::llround(cfg.rank_ratio * static_cast<double>(n)));
  g.covariance_rank = std::clamp<std::size_t>(rank, 1, n);
  g.sigma = g.covariance_rank < n ? 0.0 : cfg.sigma;
  g.A_kind = cfg.A_kind;
  g.epsilon_rule = cfg.epsilon_rule;
  g.explicit_epsilon_sq = cfg.explicit_epsilon_sq;
  g.seed = mix_seed(mix_seed(cfg.seed, n), index);
  return g;
}

std::vector<BenchRecord> run_bench(const BenchConfig& cfg) {
  struct Job {
    std::size_t n;
    std::size_t index;
  };
  std::vector<Job> jobs;
  for (std::size_t n : cfg.dims)
    for (std::size_t i = 0; i < cfg.count; ++i) jobs.push_back({n, i});

  const std::size_t per_job = cfg.solvers.size();
  std::vector<BenchRecord> records(jobs.size() * per_job);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      const auto g = instance_config(cfg, jobs[j].n, jobs[j].index);
      const RabProblem p = generate(g);
      for (std::size_t s = 0; s < per_job; ++s) {
        BenchRecord rec = cfg.solvers[s] == "rmvb" ? run_rmvb(p) : run_dtpak(p);
        rec.n = g.n;
        rec.a_kind = std::string(to_string(cfg.A_kind));
        rec.rank = g.covariance_rank;
        rec.epsilon_sq = p.epsilon * p.epsilon;
        records[j * per_job + s] = std::move(rec);
      }
    }
  };
  const unsigned threads = std::max(1u, cfg.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return records;
}

std::vector<MeanTime> summarize(const std::vector<BenchRecord>& records) {
  std::map<std::pair<std::size_t, std::string>, std::pair<double, std::size_t>> acc;
  for (const auto& r : records) {
    if (!std::isfinite(r.objective)) continue;
    auto& slot = acc[{r.n, r.solver}];
    slot.first += static_cast<double>(r.wall_ns);
    ++slot.second;
  }
  std::vector<MeanTime> out;
  for (const auto& [key, value] : acc) out.push_back({key.first, key.second, value.first / value.second, value.second});
  return out;
}

void write_csv(std::ostream& out, const std::vector<BenchRecord>& records, const std::string& a_kind) {
  const auto old_precision = out.precision(17);
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.n << ',' << r.a_kind << ',' << r.rank << ',';
    put_real(out, r.epsilon_sq);
    out << ',' << r.solver << ',' << r.wall_ns << ',';
    put_real(out, r.constraint_satisfaction);
    out << ',';
    put_real(out, r.stationarity_residual);
    out << ',';
    put_real(out, r.objective);
    out << ',' << r.verdict << '\n';
  }
  // Summary rows reuse the schema: blank per-instance fields, verdict "mean".
  for (const auto& m : summarize(records)) {
    out << m.n << ',' << a_kind << ",,," << m.solver << ',' << std::llround(m.mean_ns) << ",,,,mean\n";
  }
  out.precision(old_precision);
}

}  // namespace rab::cli
