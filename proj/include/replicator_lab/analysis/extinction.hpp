#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "../dominance.hpp"
#include "../dynamics.hpp"
#include "../engine.hpp"
#include "../errors.hpp"
#include "../information.hpp"
#include "bounds.hpp"

namespace rlab {

struct TimeSeries {
  std::vector<double> t;
  std::vector<double> v;
};

/// d_KL(q, X_i(t)) on the record grid; +inf where supp q leaves supp X_i.
inline TimeSeries kl_series(const Trajectory& traj, std::size_t i, std::span<const double> q) {
  TimeSeries s;
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const auto& x = traj.states[k];
    if (i >= x.num_players() || q.size() != x.size(i)) throw InvalidArgument("kl_series: q does not match player");
    s.t.push_back(traj.times[k]);
    s.v.push_back(kl_divergence(q, x[i]));
  }
  return s;
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Least-squares line through the finite points with t in [from, to].
inline LineFit fit_line(const TimeSeries& s, double from, double to) {
  double n = 0, st = 0, sv = 0;
  for (std::size_t k = 0; k < s.t.size(); ++k)
    if (s.t[k] >= from && s.t[k] <= to && std::isfinite(s.v[k])) {
      n += 1;
      st += s.t[k];
      sv += s.v[k];
    }
  if (n < 2) throw UndefinedResult("kl_growth_slope: fewer than two finite points in the window");
  const double mt = st / n, mv = sv / n;
  double sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < s.t.size(); ++k)
    if (s.t[k] >= from && s.t[k] <= to && std::isfinite(s.v[k])) {
      sxx += (s.t[k] - mt) * (s.t[k] - mt);
      sxy += (s.t[k] - mt) * (s.v[k] - mv);
    }
  if (!(sxx > 0.0)) throw UndefinedResult("kl_growth_slope: window has no time spread");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = mv - f.slope * mt;
  return f;
}

/// Fit over the second half [T/2, T] of the series' time span.
inline LineFit kl_growth_slope(const TimeSeries& s) {
  if (s.t.empty()) throw UndefinedResult("kl_growth_slope: empty series");
  const double T = s.t.back();
  return fit_line(s, T / 2, T);
}

/// v_i = min over surviving pure opponent profiles of u_i(a_{-i}; q') - u_i(a_{-i}; q).
inline double dominance_margin(const GameDef& g, std::size_t i, std::span<const double> q,
                               std::span<const double> q_prime, const StrategySets& survivors) {
  double v = std::numeric_limits<double>::infinity();
  for (const auto& opp : opponent_profiles(survivors, i))
    v = std::min(v, payoff_against_pure(g, i, q_prime, opp) - payoff_against_pure(g, i, q, opp));
  return v;
}

struct DominatedStrategy {
  std::size_t player = 0;
  std::size_t strategy = 0;
};

/// Every strategy removed by iterated elimination, in removal order.
inline std::vector<DominatedStrategy> dominated_strategies(const EliminationTrace& trace) {
  std::vector<DominatedStrategy> out;
  for (const auto& r : trace.rounds)
    for (std::size_t i = 0; i < r.removed.size(); ++i)
      for (std::size_t a : r.removed[i]) out.push_back({i, a});
  return out;
}

struct ExtinctionEntry {
  std::size_t player = 0;
  std::size_t strategy = 0;
  /// False when no dominator exists in the full game: the bound does not apply.
  bool guaranteed = false;
  std::vector<double> dominator;
  double v = 0.0;
  double h = 0.0;
  double threshold = 0.0;  // e^{-M}
  /// Per run: first recorded time with X_{i alpha} < e^{-M}.
  std::vector<std::optional<double>> first_passage;
  std::vector<double> terminal_mass;
  std::vector<double> slopes;  // KL growth slope per run (NaN when undefined)
  TimeSeries kl_first_run;
  double empirical = 0.0;
  double empirical_stderr = 0.0;
  BoundValue bound;
  /// empirical >= bound - 3 stderr (only meaningful when bound.valid).
  bool consistent = false;
};

struct ExtinctionReport {
  double M = 0.0;
  std::size_t runs = 0;
  double horizon = 0.0;
  std::vector<ExtinctionEntry> entries;
};

/// Extinction statistics for each listed strategy over an ensemble of paths
/// started at x0, compared against the erfc bound. `rates` are the learning
/// rates of the dynamics (empty = all 1); eta_i is the noise bound of player i.
inline ExtinctionReport extinction_report(const GameDef& g, const NoiseModel& noise, const std::vector<double>& rates,
                                          const MixedProfile& x0, const std::vector<Trajectory>& runs,
                                          const std::vector<DominatedStrategy>& strategies, double M) {
  if (strategies.empty()) throw InvalidArgument("extinction_report: no strategies given");
  if (runs.empty()) throw InvalidArgument("extinction_report: empty ensemble");
  if (!(M > 0.0)) throw InvalidArgument("extinction_report: M must be positive");
  g.check_profile(x0);
  ExtinctionReport rep;
  rep.M = M;
  rep.runs = runs.size();
  rep.horizon = runs.front().horizon();
  const auto full = full_strategy_sets(g);
  for (const auto& ds : strategies) {
    g.check_player(ds.player);
    if (ds.strategy >= g.strategy_count(ds.player)) throw InvalidArgument("extinction_report: strategy out of range");
    ExtinctionEntry e;
    e.player = ds.player;
    e.strategy = ds.strategy;
    e.threshold = std::exp(-M);
    std::vector<double> q(g.strategy_count(ds.player), 0.0);
    q[ds.strategy] = 1.0;
    if (auto dom = find_dominator(g, ds.player, q, full)) {
      e.guaranteed = true;
      e.dominator = *dom;
      e.v = dominance_margin(g, ds.player, q, e.dominator, full);
      e.h = bound_offset(x0[ds.player], ds.strategy, e.dominator);
    }
    std::size_t hits = 0;
    for (std::size_t r = 0; r < runs.size(); ++r) {
      const auto& tr = runs[r];
      std::optional<double> fp;
      for (std::size_t k = 0; k < tr.states.size(); ++k)
        if (tr.states[k].at(ds.player, ds.strategy) < e.threshold) {
          fp = tr.times[k];
          break;
        }
      e.first_passage.push_back(fp);
      const double mass = tr.terminal().at(ds.player, ds.strategy);
      e.terminal_mass.push_back(mass);
      hits += mass < e.threshold;
      const auto series = kl_series(tr, ds.player, q);
      double slope = std::numeric_limits<double>::quiet_NaN();
      try {
        slope = kl_growth_slope(series).slope;
      } catch (const UndefinedResult&) {
      }
      e.slopes.push_back(slope);
      if (r == 0) e.kl_first_run = series;
    }
    const double n = static_cast<double>(runs.size());
    e.empirical = static_cast<double>(hits) / n;
    e.empirical_stderr = std::sqrt(e.empirical * (1.0 - e.empirical) / n);
    if (e.guaranteed) {
      const double eta = noise.bound(ds.player);
      const double lam = rates.empty() ? 1.0 : rates.at(ds.player);
      if (eta > 0.0) {
        e.bound = rate_adjusted_erfc_bound(M, e.h, e.v, eta, g.strategy_count(ds.player), lam, rep.horizon);
      } else {
        // Deterministic limit of the bound: a step at the threshold time.
        e.bound.threshold_time = (M - e.h) / (lam * e.v);
        e.bound.valid = rep.horizon > e.bound.threshold_time;
        e.bound.value = e.bound.valid ? 1.0 : 0.0;
      }
      e.consistent = e.empirical >= e.bound.value - 3.0 * e.empirical_stderr;
    }
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

}  // namespace rlab
