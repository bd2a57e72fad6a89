#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "game.hpp"

namespace rlab {

/// Potential V over pure profiles, extended multilinearly to the product simplex.
class PotentialFn {
 public:
  PotentialFn(std::vector<std::size_t> shape, std::vector<double> values)
      : shape_(std::move(shape)), values_(std::move(values)) {
    if (values_.size() != tensor::profile_count(shape_)) throw InvalidArgument("PotentialFn: size mismatch");
  }

  const std::vector<std::size_t>& shape() const { return shape_; }
  const std::vector<double>& values() const { return values_; }

  double at(std::span<const std::size_t> pure) const { return values_[tensor::linear_index(shape_, pure)]; }

  double operator()(const MixedProfile& x) const { return tensor::contract_all(values_, shape_, x); }

  /// dV/dx_{i alpha} = V(x_{-i}; alpha), for every alpha of player i.
  std::vector<double> partials(const MixedProfile& x, std::size_t i) const {
    return tensor::contract_except(values_, shape_, x, i);
  }

  /// Second derivatives across two distinct players i != j: V(x_{-ij}; alpha, beta),
  /// returned row-major [alpha][beta]. Within one player V is linear.
  std::vector<double> cross_partials(const MixedProfile& x, std::size_t i, std::size_t j) const {
    std::vector<double> out(shape_[i] * shape_[j], 0.0);
    std::vector<std::vector<double>> comps = x.to_nested();
    for (std::size_t a = 0; a < shape_[i]; ++a)
      for (std::size_t b = 0; b < shape_[j]; ++b) {
        comps[i].assign(shape_[i], 0.0);
        comps[i][a] = 1.0;
        comps[j].assign(shape_[j], 0.0);
        comps[j][b] = 1.0;
        out[a * shape_[j] + b] = tensor::contract_all(values_, shape_, MixedProfile(comps));
      }
    return out;
  }

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> values_;
};

/// Number of players in `pure` sharing facility f.
inline std::size_t facility_load(const PureProfile& pure, std::size_t f) {
  std::size_t n = 0;
  for (std::size_t a : pure) n += (a == f);
  return n;
}

/// Congestion game: every player picks one of the facilities and earns
/// u_a(N_a), where N_a counts players on the same facility a.
/// `facility_payoffs[a][k-1]` holds u_a(k) for k = 1..N.
inline GameDef congestion_game(std::size_t num_players, std::vector<std::vector<double>> facility_payoffs) {
  if (num_players == 0) throw InvalidArgument("congestion_game: need at least one player");
  if (facility_payoffs.empty()) throw InvalidArgument("congestion_game: need at least one facility");
  for (const auto& u : facility_payoffs)
    if (u.size() != num_players)
      throw InvalidArgument("congestion_game: every facility needs payoffs for k = 1.." + std::to_string(num_players));
  const std::size_t f = facility_payoffs.size();
  GameDef g = GameDef::from_function(std::vector<std::size_t>(num_players, f),
                                     [&](std::size_t i, const PureProfile& p) {
                                       return facility_payoffs[p[i]][facility_load(p, p[i]) - 1];
                                     });
  return g.with_congestion({std::move(facility_payoffs)});
}

inline GameDef congestion_game(std::size_t num_players, std::size_t num_facilities,
                               const std::function<double(std::size_t facility, std::size_t load)>& u) {
  std::vector<std::vector<double>> table(num_facilities, std::vector<double>(num_players));
  for (std::size_t a = 0; a < num_facilities; ++a)
    for (std::size_t k = 1; k <= num_players; ++k) table[a][k - 1] = u(a, k);
  return congestion_game(num_players, std::move(table));
}

/// Rosenthal potential with the sign convention u_i(q) - u_i(q') = -(V(q) - V(q')):
/// V(a) = -sum_f sum_{k=1}^{N_f} u_f(k). Validated on every single-deviation pair.
inline PotentialFn rosenthal_potential(const GameDef& g, double tol = 1e-9) {
  if (!g.congestion()) throw InvalidArgument("rosenthal_potential: game has no congestion structure");
  const auto& table = g.congestion()->facility_payoffs;
  const auto& counts = g.strategy_counts();
  std::vector<double> values(g.profile_count());
  PureProfile p(g.num_players(), 0);
  std::size_t idx = 0;
  do {
    double v = 0.0;
    for (std::size_t f = 0; f < table.size(); ++f) {
      const std::size_t load = facility_load(p, f);
      for (std::size_t k = 1; k <= load; ++k) v -= table[f][k - 1];
    }
    values[idx++] = v;
  } while (tensor::next_profile(counts, p));

  PotentialFn pot(counts, std::move(values));
  std::fill(p.begin(), p.end(), 0);
  do {
    for (std::size_t i = 0; i < g.num_players(); ++i) {
      PureProfile dev = p;
      for (std::size_t a = 0; a < counts[i]; ++a) {
        dev[i] = a;
        const double lhs = g.payoff(i, p) - g.payoff(i, dev);
        const double rhs = -(pot.at(p) - pot.at(dev));
        if (std::abs(lhs - rhs) > tol)
          throw InternalError("rosenthal_potential: payoff tensor is not a congestion game");
      }
    }
  } while (tensor::next_profile(counts, p));
  return pot;
}

/// Two-facility game paying `win` to players on the strictly less crowded
/// side and `lose` otherwise. Odd N only, so no ties; a lone player always
/// counts as the minority.
inline GameDef minority_game(std::size_t num_players, double win, double lose) {
  if (num_players == 0 || num_players % 2 == 0)
    throw InvalidArgument("minority_game: number of players must be odd");
  if (!(win > lose)) throw InvalidArgument("minority_game: win payoff must exceed lose payoff");
  return congestion_game(num_players, 2, [&](std::size_t, std::size_t load) {
    return num_players == 1 || 2 * load < num_players ? win : lose;
  });
}

}  // namespace rlab
