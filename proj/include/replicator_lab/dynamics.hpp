#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "game.hpp"
#include "profile.hpp"

namespace rlab {

enum class NoiseKind { Constant, OwnPureVanishing };

/// Payoff noise coefficients eta_{i alpha}(x).
///
/// Constant:          eta_{i alpha}(x) = c_{i alpha}
/// OwnPureVanishing:  eta_{i alpha}(x) = c_{i alpha} (1 - x_{i alpha}),
///                    exact observations of a strategy that is played for sure.
/// Both are bounded on the simplex by c_i = max_alpha c_{i alpha}.
class NoiseModel {
 public:
  NoiseModel() = default;
  NoiseModel(NoiseKind kind, std::vector<std::vector<double>> coefficients)
      : kind_(kind), coeffs_(std::move(coefficients)) {
    for (const auto& row : coeffs_)
      for (double c : row)
        if (!std::isfinite(c) || c < 0.0) throw InvalidArgument("NoiseModel: coefficients must be finite and nonnegative");
  }

  static NoiseModel constant(const std::vector<std::size_t>& counts, double c) {
    std::vector<std::vector<double>> k;
    for (std::size_t s : counts) k.emplace_back(s, c);
    return NoiseModel(NoiseKind::Constant, std::move(k));
  }
  static NoiseModel zero(const std::vector<std::size_t>& counts) { return constant(counts, 0.0); }

  NoiseKind kind() const { return kind_; }
  const std::vector<std::vector<double>>& coefficients() const { return coeffs_; }

  void check_shape(const std::vector<std::size_t>& counts) const {
    if (coeffs_.size() != counts.size()) throw InvalidArgument("NoiseModel: player count does not match the game");
    for (std::size_t i = 0; i < counts.size(); ++i)
      if (coeffs_[i].size() != counts[i]) throw InvalidArgument("NoiseModel: strategy count does not match the game");
  }

  double eta(const MixedProfile& x, std::size_t i, std::size_t a) const {
    const double c = coeffs_[i][a];
    return kind_ == NoiseKind::Constant ? c : c * (1.0 - x.at(i, a));
  }

  /// eta for every (i, alpha), flat and aligned with x.flat().
  std::vector<double> evaluate(const MixedProfile& x) const {
    std::vector<double> out(x.flat().size());
    for (std::size_t i = 0; i < x.num_players(); ++i)
      for (std::size_t a = 0; a < x.size(i); ++a) out[x.offsets()[i] + a] = eta(x, i, a);
    return out;
  }

  double bound(std::size_t i) const {
    return coeffs_.at(i).empty() ? 0.0 : *std::max_element(coeffs_[i].begin(), coeffs_[i].end());
  }

  bool is_zero() const {
    for (const auto& row : coeffs_)
      for (double c : row)
        if (c != 0.0) return false;
    return true;
  }

 private:
  NoiseKind kind_ = NoiseKind::Constant;
  std::vector<std::vector<double>> coeffs_;
};

enum class Variant { RD, LRD, SRD, SLRD, ASRD, SRD1, ASRD1 };

inline std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::RD: return "RD";
    case Variant::LRD: return "LRD";
    case Variant::SRD: return "SRD";
    case Variant::SLRD: return "SLRD";
    case Variant::ASRD: return "ASRD";
    case Variant::SRD1: return "SRD1";
    case Variant::ASRD1: return "ASRD1";
  }
  return "?";
}

inline Variant variant_from_string(std::string_view s) {
  for (Variant v : {Variant::RD, Variant::LRD, Variant::SRD, Variant::SLRD, Variant::ASRD, Variant::SRD1, Variant::ASRD1})
    if (to_string(v) == s) return v;
  throw InvalidArgument("unknown dynamics variant '" + std::string(s) + "'");
}

inline bool is_stochastic(Variant v) { return v != Variant::RD && v != Variant::LRD; }
inline bool is_single_population(Variant v) { return v == Variant::SRD1 || v == Variant::ASRD1; }
inline bool uses_rates(Variant v) { return v == Variant::LRD || v == Variant::SLRD; }

struct DynamicsSpec {
  Variant variant = Variant::SRD;
  /// Per-player learning rates; empty means all ones.
  std::vector<double> rates;
  NoiseModel noise;

  /// Learning rate actually applied to player i (1 for unadjusted variants).
  double rate(std::size_t i) const {
    if (!uses_rates(variant) || rates.empty()) return 1.0;
    return rates.at(i);
  }

  void validate(const GameDef& g) const {
    if (!rates.empty()) {
      if (rates.size() != g.num_players()) throw InvalidArgument("DynamicsSpec: one learning rate per player required");
      for (double r : rates)
        if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("DynamicsSpec: learning rates must be positive");
    }
    if (is_stochastic(variant)) noise.check_shape(g.strategy_counts());
    if (is_single_population(variant) && !g.is_symmetric_two_player())
      throw InvalidArgument("DynamicsSpec: single-population variants need a symmetric two-player game");
  }
};

/// Drift and diffusion of the profile SDE at one point. drift is flat and
/// aligned with the profile; diffusion[i] is S_i x S_i row-major with row
/// alpha holding the loading of dX_{i alpha} on dW_{i beta}.
struct TangentField {
  std::vector<double> drift;
  std::vector<std::vector<double>> diffusion;

  double sigma(const MixedProfile& x, std::size_t i, std::size_t a, std::size_t b) const {
    return diffusion[i][a * x.size(i) + b];
  }
};

namespace detail {

/// Field of player i's block given its payoff vector, noise and rate.
inline void player_field(std::span<const double> x, std::span<const double> u, std::span<const double> eta,
                         Variant variant, double rate, std::span<double> drift, std::vector<double>& sigma) {
  const std::size_t s = x.size();
  double ubar = 0.0;
  for (std::size_t a = 0; a < s; ++a) ubar += x[a] * u[a];

  const bool stochastic = is_stochastic(variant);
  const bool aggregate = variant == Variant::ASRD || variant == Variant::ASRD1;
  const double lam = rate;

  double ito_mean = 0.0;  // sum_b eta_b^2 x_b (1 - 2 x_b)
  double agg_mean = 0.0;  // sum_b eta_b^2 x_b^2
  if (stochastic) {
    for (std::size_t b = 0; b < s; ++b) {
      const double e2 = eta[b] * eta[b];
      ito_mean += e2 * x[b] * (1.0 - 2.0 * x[b]);
      agg_mean += e2 * x[b] * x[b];
    }
  }
  for (std::size_t a = 0; a < s; ++a) {
    double d = lam * x[a] * (u[a] - ubar);
    if (stochastic) {
      const double e2 = eta[a] * eta[a];
      if (aggregate)
        d -= x[a] * (e2 * x[a] - agg_mean);
      else
        d += lam * lam * x[a] * 0.5 * (e2 * (1.0 - 2.0 * x[a]) - ito_mean);
    }
    drift[a] = d;
  }
  sigma.assign(s * s, 0.0);
  if (stochastic) {
    for (std::size_t a = 0; a < s; ++a)
      for (std::size_t b = 0; b < s; ++b)
        sigma[a * s + b] = lam * x[a] * ((a == b ? 1.0 : 0.0) - x[b]) * eta[b];
  }
}

/// Population state of a single-population variant: both components of the
/// profile replaced by component 0.
inline MixedProfile population_profile(const MixedProfile& x) {
  auto c = x.to_nested();
  c[1] = c[0];
  return MixedProfile(c);
}

}  // namespace detail

/// Drift and diffusion of the chosen dynamic at x.
///
/// Single-population variants (SRD1, ASRD1) read the population state from
/// component 0 and return the same block for both components.
inline TangentField eval_field(const DynamicsSpec& spec, const GameDef& g, const MixedProfile& x) {
  g.check_profile(x);
  spec.validate(g);
  TangentField f;
  f.drift.assign(x.flat().size(), 0.0);
  f.diffusion.resize(x.num_players());

  const bool stochastic = is_stochastic(spec.variant);
  if (is_single_population(spec.variant)) {
    const MixedProfile pop = detail::population_profile(x);
    const auto u = payoff_vector(g, pop, 0);
    std::vector<double> eta(pop.size(0), 0.0);
    if (stochastic)
      for (std::size_t a = 0; a < eta.size(); ++a) eta[a] = spec.noise.eta(pop, 0, a);
    detail::player_field(pop[0], u, eta, spec.variant, 1.0, {f.drift.data(), pop.size(0)}, f.diffusion[0]);
    std::copy_n(f.drift.begin(), pop.size(0), f.drift.begin() + static_cast<std::ptrdiff_t>(x.offsets()[1]));
    f.diffusion[1] = f.diffusion[0];
    return f;
  }

  for (std::size_t i = 0; i < x.num_players(); ++i) {
    const auto u = payoff_vector(g, x, i);
    std::vector<double> eta(x.size(i), 0.0);
    if (stochastic)
      for (std::size_t a = 0; a < eta.size(); ++a) eta[a] = spec.noise.eta(x, i, a);
    detail::player_field(x[i], u, eta, spec.variant, spec.rate(i), {f.drift.data() + x.offsets()[i], x.size(i)},
                         f.diffusion[i]);
  }
  return f;
}

/// Coefficients of the score SDE dU = u(X) dt + eta(X) dW (diagonal noise).
struct ScoreField {
  std::vector<double> drift;
  std::vector<double> diffusion;
};

inline ScoreField score_field(const GameDef& g, const NoiseModel& noise, const MixedProfile& x) {
  g.check_profile(x);
  noise.check_shape(g.strategy_counts());
  ScoreField s;
  s.drift.reserve(x.flat().size());
  for (std::size_t i = 0; i < x.num_players(); ++i) {
    const auto u = payoff_vector(g, x, i);
    s.drift.insert(s.drift.end(), u.begin(), u.end());
  }
  s.diffusion = noise.evaluate(x);
  return s;
}

using ScoreTable = std::vector<std::vector<double>>;

/// In-place softmax of one player's scores at inverse temperature `rate`.
inline void softmax_into(std::span<const double> scores, double rate, std::span<double> out) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : scores) hi = std::max(hi, rate * v);
  double sum = 0.0;
  for (std::size_t a = 0; a < scores.size(); ++a) {
    out[a] = std::exp(rate * scores[a] - hi);
    sum += out[a];
  }
  for (double& v : out) v /= sum;
}

/// Logit choice map x_{i alpha} = exp(l_i U_{i alpha}) / sum_beta exp(l_i U_{i beta}).
inline MixedProfile logit_map(const ScoreTable& scores, const std::vector<double>& rates = {}) {
  if (!rates.empty() && rates.size() != scores.size()) throw InvalidArgument("logit_map: one rate per player required");
  std::vector<std::vector<double>> x;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    for (double v : scores[i])
      if (!std::isfinite(v)) throw InvalidArgument("logit_map: non-finite score");
    x.emplace_back(scores[i].size());
    softmax_into(scores[i], rates.empty() ? 1.0 : rates[i], x.back());
  }
  return MixedProfile(x);
}

/// Drift correction between the Ito and Stratonovich forms of the SRD noise,
/// c_{i alpha} = 1/2 sum_{beta,gamma} sigma_{i,gamma beta} d sigma_{i,alpha beta} / d x_{i gamma},
/// for constant eta.
inline std::vector<double> stratonovich_correction(const NoiseModel& noise, const MixedProfile& x) {
  if (noise.kind() != NoiseKind::Constant)
    throw UnsupportedOperation("Stratonovich form is only available for constant noise coefficients");
  std::vector<double> c(x.flat().size(), 0.0);
  for (std::size_t i = 0; i < x.num_players(); ++i) {
    const auto xi = x[i];
    const auto& eta = noise.coefficients()[i];
    const std::size_t s = xi.size();
    auto sigma = [&](std::size_t a, std::size_t b) { return xi[a] * ((a == b ? 1.0 : 0.0) - xi[b]) * eta[b]; };
    for (std::size_t a = 0; a < s; ++a) {
      double acc = 0.0;
      // d sigma_{ab} / d x_g = eta_b [delta_ag (delta_ab - x_b) - x_a delta_bg]
      for (std::size_t b = 0; b < s; ++b)
        acc += eta[b] * (sigma(a, b) * ((a == b ? 1.0 : 0.0) - xi[b]) - xi[a] * sigma(b, b));
      c[x.offsets()[i] + a] = 0.5 * acc;
    }
  }
  return c;
}

/// SRD Ito drift minus the Stratonovich correction. For constant eta this is
/// X_{i alpha}(u_{i alpha} - u_i): the noise leaves the payoff drift untouched.
inline std::vector<double> stratonovich_drift_identity(const GameDef& g, const NoiseModel& noise, const MixedProfile& x) {
  if (noise.kind() != NoiseKind::Constant)
    throw UnsupportedOperation("Stratonovich form is only available for constant noise coefficients");
  DynamicsSpec spec{Variant::SRD, {}, noise};
  auto drift = eval_field(spec, g, x).drift;
  const auto corr = stratonovich_correction(noise, x);
  for (std::size_t k = 0; k < drift.size(); ++k) drift[k] -= corr[k];
  return drift;
}

}  // namespace rlab
