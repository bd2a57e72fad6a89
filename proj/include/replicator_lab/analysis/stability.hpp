#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "../dominance.hpp"
#include "../dynamics.hpp"
#include "../engine.hpp"
#include "../ensemble.hpp"
#include "../errors.hpp"
#include "sampling.hpp"

namespace rlab {

struct WilsonInterval {
  double low = 0.0;
  double high = 1.0;
};

/// Wilson score interval for k successes in n trials (95% by default).
inline WilsonInterval wilson_interval(std::size_t k, std::size_t n, double z = 1.959963984540054) {
  if (n == 0 || k > n) throw InvalidArgument("wilson_interval: need 0 <= k <= n, n > 0");
  const double nn = static_cast<double>(n), p = static_cast<double>(k) / nn, z2 = z * z;
  const double centre = (p + z2 / (2 * nn)) / (1 + z2 / nn);
  const double half = z / (1 + z2 / nn) * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn));
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

struct StabilityEstimate {
  PureProfile equilibrium;
  double delta = 0.0;
  double stay_radius = 0.0;
  double tol = 0.0;
  double horizon = 0.0;
  std::size_t runs = 0;
  std::size_t stayed = 0;     // never left the stay radius
  std::size_t successes = 0;  // stayed and ended within tol
  double estimate = 0.0;
  WilsonInterval interval;
  std::uint64_t master_seed = 0;
};

struct StabilityOptions {
  double delta = 0.05;
  double stay_radius = 0.3;
  double tol = 1e-2;
  std::size_t runs = 200;
  std::uint64_t master_seed = 0;
  /// Integrator settings; horizon and seed are taken from here per run.
  SimConfig sim;
};

/// Monte Carlo estimate of P{X stays within stay_radius of q0 on the record
/// grid and ends within tol of q0 at the horizon}, for starts drawn in the
/// l1 ball of radius delta. Run k draws its start point and noise from
/// run_seed(master_seed, k).
inline StabilityEstimate stability_probe(const DynamicsSpec& spec, const GameDef& g, const PureProfile& q0,
                                         const StabilityOptions& opt) {
  if (!(opt.delta > 0.0)) throw InvalidArgument("stability_probe: delta must be positive (interior start)");
  if (!(opt.delta < opt.stay_radius)) throw InvalidArgument("stability_probe: need delta < stay_radius");
  if (!(opt.tol > 0.0)) throw InvalidArgument("stability_probe: tol must be positive");
  if (!is_strict_equilibrium(g, q0)) throw InvalidArgument("stability_probe: q0 is not a strict equilibrium");
  spec.validate(g);
  const MixedProfile target = MixedProfile::vertex(g.strategy_counts(), q0);
  struct Outcome {
    bool stayed;
    bool success;
  };
  const auto outcomes = parallel_runs<Outcome>(opt.runs, opt.master_seed, [&](std::size_t, std::uint64_t seed) {
    CounterStream rng(hash_combine(seed, 0x5354415254ULL));
    const MixedProfile x0 = sample_near_vertex(rng, g.strategy_counts(), q0, opt.delta);
    SimConfig cfg = opt.sim;
    cfg.seed = seed;
    const Trajectory tr = simulate(spec, g, x0, cfg);
    bool stayed = true;
    for (const auto& x : tr.states)
      if (l1_distance(x, target) > opt.stay_radius) {
        stayed = false;
        break;
      }
    return Outcome{stayed, stayed && l1_distance(tr.terminal(), target) <= opt.tol};
  });
  StabilityEstimate est;
  est.equilibrium = q0;
  est.delta = opt.delta;
  est.stay_radius = opt.stay_radius;
  est.tol = opt.tol;
  est.horizon = opt.sim.horizon;
  est.runs = opt.runs;
  est.master_seed = opt.master_seed;
  for (const auto& o : outcomes) {
    est.stayed += o.stayed;
    est.successes += o.success;
  }
  est.estimate = static_cast<double>(est.successes) / static_cast<double>(est.runs);
  est.interval = wilson_interval(est.successes, est.runs);
  return est;
}

}  // namespace rlab
