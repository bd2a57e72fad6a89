#pragma once

#include <algorithm>
#include <cstddef>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "game.hpp"
#include "lp.hpp"

namespace rlab {

/// Strictness margin for payoff comparisons.
inline constexpr double kPayoffMargin = 1e-12;
/// Minimum LP gap for a mixed strategy to count as a dominator.
inline constexpr double kDominanceGap = 1e-9;

/// Surviving pure strategies, one sorted index list per player.
using StrategySets = std::vector<std::vector<std::size_t>>;

inline StrategySets full_strategy_sets(const GameDef& g) {
  StrategySets s(g.num_players());
  for (std::size_t i = 0; i < g.num_players(); ++i)
    for (std::size_t a = 0; a < g.strategy_count(i); ++a) s[i].push_back(a);
  return s;
}

/// Every pure opponent profile of player i drawn from `sets` (entry i of each
/// returned profile is 0 and meaningless).
inline std::vector<PureProfile> opponent_profiles(const StrategySets& sets, std::size_t i) {
  std::vector<PureProfile> out;
  const std::size_t n = sets.size();
  std::vector<std::size_t> cursor(n, 0);
  for (;;) {
    PureProfile p(n, 0);
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) p[j] = sets[j][cursor[j]];
    out.push_back(std::move(p));
    std::size_t j = n;
    while (j-- > 0) {
      if (j == i) continue;
      if (++cursor[j] < sets[j].size()) break;
      cursor[j] = 0;
    }
    if (j == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

/// True iff q' earns strictly more than q against every pure opponent profile.
/// Multilinearity makes the vertex check equivalent to checking all mixed p_{-i}.
inline bool dominates(const GameDef& g, std::size_t i, std::span<const double> q,
                      std::span<const double> q_prime) {
  g.check_player(i);
  if (q.size() != g.strategy_count(i) || q_prime.size() != g.strategy_count(i))
    throw InvalidArgument("dominates: strategy vector has wrong length");
  for (const auto& opp : opponent_profiles(full_strategy_sets(g), i)) {
    if (!(payoff_against_pure(g, i, q_prime, opp) - payoff_against_pure(g, i, q, opp) > kPayoffMargin))
      return false;
  }
  return true;
}

/// Mixed strategy on player i's surviving support that strictly dominates q
/// against every surviving pure opponent profile, or nothing.
///
/// Solves  max eps  s.t.  sum_mu y_mu u_i(a_{-i}; mu) - u_i(a_{-i}; q) >= eps
/// for all surviving a_{-i}, y in the restricted simplex. The free variable
/// eps is shifted by K = max|gap| + 1 so that the program has a feasible
/// slack basis; with all shifted gains positive the optimum saturates
/// sum y = 1.
inline std::optional<std::vector<double>> find_dominator(const GameDef& g, std::size_t i,
                                                         std::span<const double> q,
                                                         const StrategySets& survivors) {
  g.check_player(i);
  if (survivors.size() != g.num_players()) throw InvalidArgument("find_dominator: survivor sets have wrong size");
  if (q.size() != g.strategy_count(i)) throw InvalidArgument("find_dominator: q has wrong length");
  const auto& own = survivors[i];
  for (std::size_t a = 0; a < q.size(); ++a)
    if (q[a] > 0.0 && !std::binary_search(own.begin(), own.end(), a))
      throw InvalidArgument("find_dominator: q is not supported on the surviving strategies");

  const auto opps = opponent_profiles(survivors, i);
  const std::size_t m = own.size();
  std::vector<std::vector<double>> gain(opps.size(), std::vector<double>(m));
  double k = 0.0;
  for (std::size_t r = 0; r < opps.size(); ++r) {
    PureProfile p = opps[r];
    const double base = payoff_against_pure(g, i, q, p);
    for (std::size_t c = 0; c < m; ++c) {
      p[i] = own[c];
      gain[r][c] = g.payoff(i, p) - base;
      k = std::max(k, std::abs(gain[r][c]));
    }
  }
  k += 1.0;

  // variables: y_0..y_{m-1}, t ; eps = t - k
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  for (const auto& row : gain) {
    std::vector<double> a(m + 1);
    for (std::size_t c = 0; c < m; ++c) a[c] = -(row[c] + k);
    a[m] = 1.0;
    A.push_back(std::move(a));
    b.push_back(0.0);
  }
  std::vector<double> sum_row(m + 1, 1.0);
  sum_row[m] = 0.0;
  A.push_back(std::move(sum_row));
  b.push_back(1.0);
  std::vector<double> c(m + 1, 0.0);
  c[m] = 1.0;

  const auto res = lp::maximize(A, b, c);
  if (res.status != lp::Status::Optimal)
    throw InternalError(std::string("find_dominator: LP solver failed with status ") + lp::to_string(res.status));
  const double eps = res.objective - k;
  if (!(eps > kDominanceGap)) return std::nullopt;

  double total = 0.0;
  for (std::size_t cidx = 0; cidx < m; ++cidx) total += std::max(0.0, res.solution[cidx]);
  if (!(total > 0.0)) throw InternalError("find_dominator: LP returned an empty strategy");
  std::vector<double> y(g.strategy_count(i), 0.0);
  for (std::size_t cidx = 0; cidx < m; ++cidx) y[own[cidx]] = std::max(0.0, res.solution[cidx]) / total;
  return y;
}

struct EliminationRound {
  /// removed[i]: pure strategies of player i deleted in this round.
  StrategySets removed;
  /// survivors[i]: pure strategies of player i left after this round.
  StrategySets survivors;
};

/// Rounds that removed at least one strategy; the elimination stops at the
/// first round that would remove nothing, so `rounds` can be empty.
struct EliminationTrace {
  std::vector<EliminationRound> rounds;
  StrategySets admissible;

  /// Round (1-based) in which (i, alpha) was removed; 0 when it survives.
  std::size_t removal_round(std::size_t i, std::size_t alpha) const {
    for (std::size_t r = 0; r < rounds.size(); ++r) {
      const auto& rem = rounds[r].removed[i];
      if (std::find(rem.begin(), rem.end(), alpha) != rem.end()) return r + 1;
    }
    return 0;
  }

  bool dominance_solvable() const {
    return std::all_of(admissible.begin(), admissible.end(), [](const auto& s) { return s.size() == 1; });
  }
};

/// Iterated elimination of strictly dominated pure strategies (by pure or
/// mixed dominators), all players simultaneously per round.
inline EliminationTrace iterated_elimination(const GameDef& g, StrategySets start = {}) {
  EliminationTrace trace;
  StrategySets cur = start.empty() ? full_strategy_sets(g) : std::move(start);
  for (;;) {
    StrategySets removed(g.num_players());
    bool any = false;
    for (std::size_t i = 0; i < g.num_players(); ++i) {
      if (cur[i].size() < 2) continue;
      for (std::size_t a : cur[i]) {
        std::vector<double> vertex(g.strategy_count(i), 0.0);
        vertex[a] = 1.0;
        if (find_dominator(g, i, vertex, cur)) {
          removed[i].push_back(a);
          any = true;
        }
      }
    }
    if (!any) break;
    for (std::size_t i = 0; i < g.num_players(); ++i) {
      std::vector<std::size_t> keep;
      std::set_difference(cur[i].begin(), cur[i].end(), removed[i].begin(), removed[i].end(),
                          std::back_inserter(keep));
      if (keep.empty()) throw InternalError("iterated_elimination: a player lost every strategy");
      cur[i] = std::move(keep);
    }
    trace.rounds.push_back({std::move(removed), cur});
  }
  trace.admissible = std::move(cur);
  return trace;
}

/// Pure profiles where every unilateral deviation strictly lowers the deviator's payoff.
inline std::vector<PureProfile> strict_equilibria(const GameDef& g) {
  std::vector<PureProfile> out;
  const auto& counts = g.strategy_counts();
  PureProfile q(g.num_players(), 0);
  do {
    bool strict = true;
    for (std::size_t i = 0; i < g.num_players() && strict; ++i) {
      const double base = g.payoff(i, q);
      PureProfile dev = q;
      for (std::size_t a = 0; a < counts[i]; ++a) {
        if (a == q[i]) continue;
        dev[i] = a;
        if (!(base - g.payoff(i, dev) > kPayoffMargin)) {
          strict = false;
          break;
        }
      }
    }
    if (strict) out.push_back(q);
  } while (tensor::next_profile(counts, q));
  return out;
}

inline bool is_strict_equilibrium(const GameDef& g, const PureProfile& q) {
  if (q.size() != g.num_players()) return false;
  for (std::size_t i = 0; i < q.size(); ++i)
    if (q[i] >= g.strategy_count(i)) return false;
  for (std::size_t i = 0; i < q.size(); ++i) {
    PureProfile dev = q;
    for (std::size_t a = 0; a < g.strategy_count(i); ++a) {
      if (a == q[i]) continue;
      dev[i] = a;
      if (!(g.payoff(i, q) - g.payoff(i, dev) > kPayoffMargin)) return false;
    }
  }
  return true;
}

}  // namespace rlab
