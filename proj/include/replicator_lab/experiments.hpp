#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "analysis/extinction.hpp"
#include "dominance.hpp"
#include "dynamics.hpp"
#include "engine.hpp"
#include "ensemble.hpp"

namespace rlab {

/// Terminal probability of every (i, alpha), named "x[i][alpha]".
inline std::vector<Statistic> terminal_probability_stats(const GameDef& g) {
  std::vector<Statistic> out;
  for (std::size_t i = 0; i < g.num_players(); ++i)
    for (std::size_t a = 0; a < g.strategy_count(i); ++a)
      out.push_back({"x[" + std::to_string(i) + "][" + std::to_string(a) + "]",
                     [i, a](const Trajectory& t) { return t.terminal().at(i, a); }});
  return out;
}

/// n paths of `spec` from x0, run k seeded with run_seed(master_seed, k).
inline EnsembleStats ensemble_experiment(const DynamicsSpec& spec, const GameDef& g, const MixedProfile& x0,
                                         const SimConfig& sim, std::size_t runs, std::uint64_t master_seed) {
  return run_ensemble(
      [&](std::uint64_t seed) {
        SimConfig c = sim;
        c.seed = seed;
        return simulate(spec, g, x0, c);
      },
      runs, master_seed, terminal_probability_stats(g));
}

/// The same paths kept whole (for reports that need the time series).
inline std::vector<Trajectory> ensemble_paths(const DynamicsSpec& spec, const GameDef& g, const MixedProfile& x0,
                                              const SimConfig& sim, std::size_t runs, std::uint64_t master_seed) {
  return parallel_runs<Trajectory>(runs, master_seed, [&](std::size_t, std::uint64_t seed) {
    SimConfig c = sim;
    c.seed = seed;
    return simulate(spec, g, x0, c);
  });
}

/// Ensemble from x0 and an extinction report for every strategy removed by
/// iterated elimination.
inline ExtinctionReport extinction_experiment(const DynamicsSpec& spec, const GameDef& g, const MixedProfile& x0,
                                              const SimConfig& sim, std::size_t runs, std::uint64_t master_seed,
                                              double M) {
  const auto dominated = dominated_strategies(iterated_elimination(g));
  if (dominated.empty()) throw InvalidArgument("extinction: the game has no dominated strategies");
  const auto paths = ensemble_paths(spec, g, x0, sim, runs, master_seed);
  std::vector<double> rates;
  for (std::size_t i = 0; i < g.num_players(); ++i) rates.push_back(spec.rate(i));
  const NoiseModel noise = is_stochastic(spec.variant) ? spec.noise : NoiseModel::zero(g.strategy_counts());
  return extinction_report(g, noise, rates, x0, paths, dominated, M);
}

}  // namespace rlab
