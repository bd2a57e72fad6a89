#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "profile.hpp"

namespace rlab {

/// Default cap on dense payoff storage (players x pure profiles).
inline constexpr std::size_t kMaxTensorEntries = 10'000'000;

/// Pure profile: one strategy index per player.
using PureProfile = std::vector<std::size_t>;

namespace tensor {

/// Number of pure profiles for the given strategy counts.
inline std::size_t profile_count(std::span<const std::size_t> shape) {
  std::size_t n = 1;
  for (std::size_t s : shape) n *= s;
  return n;
}

/// Row-major linear index of a pure profile (player 0 most significant).
inline std::size_t linear_index(std::span<const std::size_t> shape, std::span<const std::size_t> pure) {
  std::size_t idx = 0;
  for (std::size_t j = 0; j < shape.size(); ++j) idx = idx * shape[j] + pure[j];
  return idx;
}

/// Advance `pure` to the next profile in row-major order; false after the last.
inline bool next_profile(std::span<const std::size_t> shape, std::span<std::size_t> pure) {
  for (std::size_t j = shape.size(); j-- > 0;) {
    if (++pure[j] < shape[j]) return true;
    pure[j] = 0;
  }
  return false;
}

/// Contract every axis except `keep` against the profile. Returns a vector of
/// length shape[keep]. Work is O(prod shape).
inline std::vector<double> contract_except(std::span<const double> data,
                                           std::span<const std::size_t> shape,
                                           const MixedProfile& p, std::size_t keep) {
  std::vector<double> cur(data.begin(), data.end());
  std::size_t n = shape.size();
  // trailing axes
  for (std::size_t j = n; j-- > keep + 1;) {
    const std::size_t s = shape[j];
    const auto pj = p[j];
    std::vector<double> next(cur.size() / s, 0.0);
    for (std::size_t r = 0; r < next.size(); ++r) {
      double acc = 0.0;
      for (std::size_t a = 0; a < s; ++a) acc += cur[r * s + a] * pj[a];
      next[r] = acc;
    }
    cur.swap(next);
  }
  // leading axes
  for (std::size_t j = 0; j < keep; ++j) {
    const std::size_t s = shape[j];
    const auto pj = p[j];
    const std::size_t rest = cur.size() / s;
    std::vector<double> next(rest, 0.0);
    for (std::size_t a = 0; a < s; ++a) {
      const double w = pj[a];
      if (w == 0.0) continue;
      for (std::size_t r = 0; r < rest; ++r) next[r] += w * cur[a * rest + r];
    }
    cur.swap(next);
  }
  return cur;
}

/// Full multilinear contraction.
inline double contract_all(std::span<const double> data, std::span<const std::size_t> shape,
                           const MixedProfile& p) {
  if (shape.empty()) return data[0];
  auto v = contract_except(data, shape, p, 0);
  double acc = 0.0;
  for (std::size_t a = 0; a < v.size(); ++a) acc += v[a] * p.at(0, a);
  return acc;
}

}  // namespace tensor

/// Facility payoff table of a congestion game: facility_payoffs[a][k-1] = u_a(k).
struct CongestionStructure {
  std::vector<std::vector<double>> facility_payoffs;
};

/// Finite normal-form game with a dense payoff tensor.
///
/// `payoffs` is laid out as [player][pure profile], pure profiles in
/// row-major order with player 0 most significant. Immutable after
/// construction.
class GameDef {
 public:
  GameDef(std::vector<std::size_t> strategy_counts, std::vector<double> payoffs,
          std::size_t max_entries = kMaxTensorEntries)
      : counts_(std::move(strategy_counts)), payoffs_(std::move(payoffs)) {
    if (counts_.empty()) throw InvalidArgument("GameDef: at least one player required");
    std::size_t profiles = 1;
    for (std::size_t s : counts_) {
      if (s == 0) throw InvalidArgument("GameDef: every player needs at least one strategy");
      if (profiles > max_entries / s) throw InvalidArgument("GameDef: payoff tensor exceeds the configured cap");
      profiles *= s;
    }
    if (profiles > max_entries / counts_.size())
      throw InvalidArgument("GameDef: payoff tensor exceeds the configured cap of " +
                            std::to_string(max_entries) + " entries");
    profiles_ = profiles;
    if (payoffs_.size() != counts_.size() * profiles_)
      throw InvalidArgument("GameDef: expected " + std::to_string(counts_.size() * profiles_) +
                            " payoff entries, got " + std::to_string(payoffs_.size()));
    for (double v : payoffs_)
      if (!std::isfinite(v)) throw InvalidArgument("GameDef: non-finite payoff entry");
  }

  /// Build from a callback u(i, pure profile).
  static GameDef from_function(std::vector<std::size_t> counts,
                               const std::function<double(std::size_t, const PureProfile&)>& u) {
    std::size_t profiles = tensor::profile_count(counts);
    std::vector<double> data(counts.size() * profiles);
    PureProfile pure(counts.size(), 0);
    std::size_t k = 0;
    do {
      for (std::size_t i = 0; i < counts.size(); ++i) data[i * profiles + k] = u(i, pure);
      ++k;
    } while (tensor::next_profile(counts, pure));
    return GameDef(std::move(counts), std::move(data));
  }

  /// Two-player bimatrix game; a[r][c] for the row player, b[r][c] for the column player.
  static GameDef bimatrix(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b) {
    if (a.empty() || a.size() != b.size()) throw InvalidArgument("bimatrix: row count mismatch");
    std::size_t rows = a.size(), cols = a[0].size();
    for (std::size_t r = 0; r < rows; ++r)
      if (a[r].size() != cols || b[r].size() != cols) throw InvalidArgument("bimatrix: ragged matrix");
    return from_function({rows, cols}, [&](std::size_t i, const PureProfile& p) {
      return i == 0 ? a[p[0]][p[1]] : b[p[0]][p[1]];
    });
  }

  /// Symmetric two-player game from the row player's matrix.
  static GameDef symmetric(const std::vector<std::vector<double>>& a) {
    std::vector<std::vector<double>> b(a.size(), std::vector<double>(a.size()));
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (a[r].size() != a.size()) throw InvalidArgument("symmetric: matrix must be square");
      for (std::size_t c = 0; c < a.size(); ++c) b[r][c] = a[c][r];
    }
    return bimatrix(a, b);
  }

  std::size_t num_players() const { return counts_.size(); }
  const std::vector<std::size_t>& strategy_counts() const { return counts_; }
  std::size_t strategy_count(std::size_t i) const { return counts_.at(i); }
  std::size_t profile_count() const { return profiles_; }
  const std::vector<double>& payoff_data() const { return payoffs_; }

  std::span<const double> player_slice(std::size_t i) const {
    return {payoffs_.data() + i * profiles_, profiles_};
  }

  double payoff(std::size_t i, std::span<const std::size_t> pure) const {
    return payoffs_[i * profiles_ + tensor::linear_index(counts_, pure)];
  }

  const std::optional<CongestionStructure>& congestion() const { return congestion_; }
  GameDef with_congestion(CongestionStructure c) const {
    GameDef g = *this;
    g.congestion_ = std::move(c);
    return g;
  }

  /// True for two-player games with u2 equal to the transpose of u1.
  bool is_symmetric_two_player(double tol = 1e-12) const {
    if (num_players() != 2 || counts_[0] != counts_[1]) return false;
    for (std::size_t r = 0; r < counts_[0]; ++r)
      for (std::size_t c = 0; c < counts_[1]; ++c) {
        std::size_t rc[2] = {r, c}, cr[2] = {c, r};
        if (std::abs(payoff(1, rc) - payoff(0, cr)) > tol) return false;
      }
    return true;
  }

  void check_profile(const MixedProfile& p) const {
    if (p.num_players() != num_players())
      throw InvalidArgument("profile has " + std::to_string(p.num_players()) + " players, game has " +
                            std::to_string(num_players()));
    for (std::size_t i = 0; i < num_players(); ++i)
      if (p.size(i) != counts_[i])
        throw InvalidArgument("profile component " + std::to_string(i) + " has wrong length");
  }

  void check_player(std::size_t i) const {
    if (i >= num_players()) throw InvalidArgument("player index out of range");
  }

 private:
  std::vector<std::size_t> counts_;
  std::vector<double> payoffs_;
  std::size_t profiles_ = 1;
  std::optional<CongestionStructure> congestion_;
};

/// Expected payoff u_i(p).
inline double mixed_payoff(const GameDef& g, const MixedProfile& p, std::size_t i) {
  g.check_profile(p);
  g.check_player(i);
  return tensor::contract_all(g.player_slice(i), g.strategy_counts(), p);
}

/// u_{i alpha}(p) for every alpha of player i at once.
inline std::vector<double> payoff_vector(const GameDef& g, const MixedProfile& p, std::size_t i) {
  g.check_profile(p);
  g.check_player(i);
  return tensor::contract_except(g.player_slice(i), g.strategy_counts(), p, i);
}

/// Payoff to player i when i switches to pure strategy alpha against p_{-i}.
inline double pure_strategy_payoff(const GameDef& g, const MixedProfile& p, std::size_t i, std::size_t alpha) {
  g.check_player(i);
  if (alpha >= g.strategy_count(i)) throw InvalidArgument("strategy index out of range");
  return payoff_vector(g, p, i)[alpha];
}

/// Payoff to player i of mixed strategy q against the pure opponent profile
/// in `opp` (entry i of `opp` is ignored).
inline double payoff_against_pure(const GameDef& g, std::size_t i, std::span<const double> q,
                                  PureProfile opp) {
  double acc = 0.0;
  for (std::size_t a = 0; a < q.size(); ++a) {
    if (q[a] == 0.0) continue;
    opp[i] = a;
    acc += q[a] * g.payoff(i, opp);
  }
  return acc;
}

}  // namespace rlab
