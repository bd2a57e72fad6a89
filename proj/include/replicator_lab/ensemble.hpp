#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "engine.hpp"
#include "errors.hpp"
#include "rng.hpp"

namespace rlab {

/// Worker count: `requested` if nonzero, else hardware concurrency; capped
/// by REPLICATOR_LAB_THREADS when set.
inline std::size_t worker_count(std::size_t requested = 0) {
  std::size_t n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("REPLICATOR_LAB_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min<std::size_t>(n, static_cast<std::size_t>(cap));
  }
  return n;
}

/// Evaluate fn(k, run_seed(master_seed, k)) for k < n, possibly concurrently,
/// returning results in index order. The first failing index (lowest k)
/// is rethrown as EnsembleError.
template <class R, class Fn>
std::vector<R> parallel_runs(std::size_t n, std::uint64_t master_seed, Fn&& fn, std::size_t threads = 0) {
  if (n == 0) throw InvalidArgument("ensemble: need at least one run");
  std::vector<std::optional<R>> out(n);
  std::vector<std::string> errors(n);
  std::vector<char> failed(n, 0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      try {
        out[k].emplace(fn(k, run_seed(master_seed, k)));
      } catch (const std::exception& e) {
        failed[k] = 1;
        errors[k] = e.what();
      }
    }
  };
  const std::size_t w = std::min(worker_count(threads), n);
  if (w <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < w; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (std::size_t k = 0; k < n; ++k)
    if (failed[k]) throw EnsembleError(errors[k], k, run_seed(master_seed, k));
  std::vector<R> res;
  res.reserve(n);
  for (auto& o : out) res.push_back(std::move(*o));
  return res;
}

struct Statistic {
  std::string name;
  std::function<double(const Trajectory&)> extract;
};

struct StatSummary {
  double mean = 0.0;
  /// Sample standard deviation over sqrt(count); 0 for a single run.
  double stderr_ = 0.0;
  std::size_t count = 0;
};

inline StatSummary summarize(const std::vector<double>& v) {
  StatSummary s;
  s.count = v.size();
  if (v.empty()) return s;
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  s.mean = m;
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    s.stderr_ = std::sqrt(ss / static_cast<double>(v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
  }
  return s;
}

struct EnsembleStats {
  std::size_t runs = 0;
  std::uint64_t master_seed = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<MixedProfile> terminal_states;
  /// values[name][k]: statistic of run k.
  std::map<std::string, std::vector<double>> values;
  std::map<std::string, StatSummary> stats;
};

/// Run `job(seed)` -> Trajectory for n runs with seeds run_seed(master, k)
/// and reduce the statistics in run order.
template <class Job>
EnsembleStats run_ensemble(Job&& job, std::size_t n_runs, std::uint64_t master_seed,
                           const std::vector<Statistic>& statistics, std::size_t threads = 0) {
  struct RunResult {
    MixedProfile terminal;
    std::vector<double> stats;
  };
  auto results = parallel_runs<RunResult>(
      n_runs, master_seed,
      [&](std::size_t, std::uint64_t seed) {
        const Trajectory tr = job(seed);
        RunResult r{tr.terminal(), {}};
        for (const auto& s : statistics) r.stats.push_back(s.extract(tr));
        return r;
      },
      threads);
  EnsembleStats es;
  es.runs = n_runs;
  es.master_seed = master_seed;
  for (std::size_t k = 0; k < n_runs; ++k) es.seeds.push_back(run_seed(master_seed, k));
  for (std::size_t j = 0; j < statistics.size(); ++j) {
    auto& col = es.values[statistics[j].name];
    for (const auto& r : results) col.push_back(r.stats[j]);
    es.stats[statistics[j].name] = summarize(col);
  }
  for (auto& r : results) es.terminal_states.push_back(std::move(r.terminal));
  return es;
}

}  // namespace rlab
