#pragma once

#include <cstddef>
#include <vector>

#include "../congestion.hpp"
#include "../dominance.hpp"
#include "../dynamics.hpp"
#include "../engine.hpp"
#include "../errors.hpp"
#include "extinction.hpp"

namespace rlab {

/// V(x(t)) on the record grid.
inline TimeSeries potential_along(const Trajectory& traj, const PotentialFn& V) {
  TimeSeries s;
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    s.t.push_back(traj.times[k]);
    s.v.push_back(V(traj.states[k]));
  }
  return s;
}

/// Largest increase between consecutive samples (<= 0 for a non-increasing series).
inline double max_increase(const TimeSeries& s) {
  double worst = 0.0;
  for (std::size_t k = 1; k < s.v.size(); ++k) worst = std::max(worst, s.v[k] - s.v[k - 1]);
  return worst;
}

struct PotentialConditionEntry {
  std::size_t player = 0;
  std::size_t deviation = 0;
  double lhs = 0.0;  // V(q_{-i}; mu) - V(q)
  double rhs = 0.0;  // l_i / 2 (c_{i mu}^2 + c_{i q_i}^2)
  bool holds = false;
};

/// Sufficient condition for stochastic stability of q in a potential game:
/// V(q_{-i}; mu) - V(q) > l_i/2 (eta_{i mu}^2 + eta_{i q_i}^2) for every
/// player i and deviation mu != q_i. Constant noise only.
inline std::vector<PotentialConditionEntry> check_potential_condition(const GameDef& g, const PotentialFn& V,
                                                                      const PureProfile& q,
                                                                      const std::vector<double>& rates,
                                                                      const NoiseModel& noise) {
  if (!is_strict_equilibrium(g, q)) throw InvalidArgument("check_potential_condition: q is not a strict equilibrium");
  if (noise.kind() != NoiseKind::Constant)
    throw InvalidArgument("check_potential_condition: constant noise coefficients required");
  noise.check_shape(g.strategy_counts());
  if (!rates.empty() && rates.size() != g.num_players())
    throw InvalidArgument("check_potential_condition: one rate per player required");
  if (V.shape() != g.strategy_counts()) throw InvalidArgument("check_potential_condition: potential shape mismatch");
  std::vector<PotentialConditionEntry> out;
  const double vq = V.at(q);
  for (std::size_t i = 0; i < g.num_players(); ++i) {
    const double l = rates.empty() ? 1.0 : rates[i];
    const auto& c = noise.coefficients()[i];
    PureProfile dev = q;
    for (std::size_t m = 0; m < g.strategy_count(i); ++m) {
      if (m == q[i]) continue;
      dev[i] = m;
      PotentialConditionEntry e;
      e.player = i;
      e.deviation = m;
      e.lhs = V.at(dev) - vq;
      e.rhs = 0.5 * l * (c[m] * c[m] + c[q[i]] * c[q[i]]);
      e.holds = e.lhs > e.rhs;
      out.push_back(e);
    }
  }
  return out;
}

}  // namespace rlab
