#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "../congestion.hpp"
#include "../dominance.hpp"
#include "../dynamics.hpp"
#include "../errors.hpp"
#include "generator.hpp"
#include "sampling.hpp"

namespace rlab {

enum class LyapunovFamily { InverseY, ExpLogit, PotentialV };

inline std::string_view to_string(LyapunovFamily f) {
  switch (f) {
    case LyapunovFamily::InverseY: return "inverse_y";
    case LyapunovFamily::ExpLogit: return "exp_logit";
    case LyapunovFamily::PotentialV: return "potential";
  }
  return "?";
}

inline LyapunovFamily lyapunov_family_from_string(std::string_view s) {
  for (auto f : {LyapunovFamily::InverseY, LyapunovFamily::ExpLogit, LyapunovFamily::PotentialV})
    if (to_string(f) == s) return f;
  throw InvalidArgument("unknown Lyapunov family '" + std::string(s) + "'");
}

struct LyapunovReport {
  LyapunovFamily family = LyapunovFamily::InverseY;
  PureProfile equilibrium;
  double delta = 0.0;
  std::size_t samples = 0;
  /// min over samples of -Lf/f; the certificate holds on the samples iff k > 0.
  double k = 0.0;
  std::vector<MixedProfile> violations;
  bool certified() const { return k > 0.0; }
};

/// Test function of the chosen family around q0. `params` holds the
/// per-player exponents (l_i for InverseY, a_i for ExpLogit; empty = all 1)
/// and is unused for PotentialV.
inline ScalarField lyapunov_function(const GameDef& g, const PureProfile& q0, LyapunovFamily family,
                                     const std::vector<double>& params) {
  std::vector<double> p = params.empty() ? std::vector<double>(g.num_players(), 1.0) : params;
  if (family != LyapunovFamily::PotentialV && p.size() != g.num_players())
    throw InvalidArgument("lyapunov_certificate: one exponent per player required");
  switch (family) {
    case LyapunovFamily::InverseY: return inverse_y_field(q0, p);
    case LyapunovFamily::ExpLogit:
      for (std::size_t s : g.strategy_counts())
        if (s != 2) throw InvalidArgument("lyapunov_certificate: exp_logit needs a dyadic game");
      return exp_logit_field(g.strategy_counts(), q0, p);
    case LyapunovFamily::PotentialV:
      if (!g.congestion()) throw InvalidArgument("lyapunov_certificate: potential family needs a congestion game");
      return potential_field(rosenthal_potential(g), q0);
  }
  throw InvalidArgument("unknown Lyapunov family");
}

/// Sample n interior profiles within l1 distance delta of q0 and report the
/// largest k with Lf <= -k f on all of them.
inline LyapunovReport lyapunov_certificate(const DynamicsSpec& spec, const GameDef& g, const PureProfile& q0,
                                           LyapunovFamily family, const std::vector<double>& params, std::size_t n,
                                           double delta, std::uint64_t seed = 0) {
  if (!is_strict_equilibrium(g, q0)) throw InvalidArgument("lyapunov_certificate: q0 is not a strict equilibrium");
  if (n == 0) throw InvalidArgument("lyapunov_certificate: need at least one sample");
  spec.validate(g);
  const ScalarField f = lyapunov_function(g, q0, family, params);
  LyapunovReport rep;
  rep.family = family;
  rep.equilibrium = q0;
  rep.delta = delta;
  rep.samples = n;
  rep.k = std::numeric_limits<double>::infinity();
  CounterStream rng(seed);
  for (std::size_t s = 0; s < n; ++s) {
    const MixedProfile x = sample_near_vertex(rng, g.strategy_counts(), q0, delta);
    const double fx = f.value(x);
    const double lf = apply_generator(spec, g, f, x);
    const double ratio = fx > 0.0 ? -lf / fx : -std::numeric_limits<double>::infinity();
    if (!(ratio > 0.0)) rep.violations.push_back(x);
    rep.k = std::min(rep.k, ratio);
  }
  return rep;
}

}  // namespace rlab
