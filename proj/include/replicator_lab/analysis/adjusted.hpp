#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "../errors.hpp"
#include "../game.hpp"
#include "../profile.hpp"

namespace rlab {

/// Adjusted-score coordinates of an interior profile relative to an anchor
/// pure profile: per player the ratio Y_0 = x_0^l / sum_mu x_mu^l and the
/// direction Y_mu = x_mu^l / sum_nu x_nu^l over the non-anchor strategies.
struct AdjustedCoords {
  PureProfile anchor;
  std::vector<double> lambda;
  std::vector<double> y0;
  /// direction[i] has S_i - 1 entries, non-anchor strategies in index order.
  std::vector<std::vector<double>> direction;
};

inline AdjustedCoords adjusted_coords(const MixedProfile& x, const std::vector<double>& lambda,
                                      const PureProfile& anchor) {
  if (lambda.size() != x.num_players() || anchor.size() != x.num_players())
    throw InvalidArgument("adjusted_coords: one rate and anchor per player required");
  if (!x.is_interior()) throw DomainError("adjusted_coords: profile must be interior");
  AdjustedCoords c{anchor, lambda, {}, {}};
  for (std::size_t i = 0; i < x.num_players(); ++i) {
    if (anchor[i] >= x.size(i)) throw InvalidArgument("adjusted_coords: anchor out of range");
    if (!(lambda[i] > 0.0)) throw InvalidArgument("adjusted_coords: rates must be positive");
    if (x.size(i) < 2) throw InvalidArgument("adjusted_coords: players need at least two strategies");
    // Work with logs and a common shift so that large l stays finite.
    std::vector<double> lw;
    for (std::size_t m = 0; m < x.size(i); ++m)
      if (m != anchor[i]) lw.push_back(lambda[i] * std::log(x.at(i, m)));
    double hi = lw[0];
    for (double v : lw) hi = std::max(hi, v);
    double sum = 0.0;
    for (double v : lw) sum += std::exp(v - hi);
    std::vector<double> dir;
    for (double v : lw) dir.push_back(std::exp(v - hi) / sum);
    c.y0.push_back(std::exp(lambda[i] * std::log(x.at(i, anchor[i])) - hi - std::log(sum)));
    c.direction.push_back(std::move(dir));
  }
  return c;
}

/// Inverse map: w_mu proportional to Y_mu^{1/l}, r = (Y_0 sum w^l)^{1/l},
/// x_mu = w_mu / (1 + r), x_anchor = r / (1 + r), with sum w = 1.
inline MixedProfile inverse_adjusted(const AdjustedCoords& c) {
  std::vector<std::vector<double>> x;
  for (std::size_t i = 0; i < c.y0.size(); ++i) {
    const double l = c.lambda.at(i);
    if (!(c.y0[i] > 0.0) || !std::isfinite(c.y0[i])) throw DomainError("inverse_adjusted: Y_0 must be positive");
    std::vector<double> w;
    double ws = 0.0;
    for (double y : c.direction[i]) {
      if (!(y > 0.0)) throw DomainError("inverse_adjusted: direction must be interior");
      w.push_back(std::pow(y, 1.0 / l));
      ws += w.back();
    }
    double wl = 0.0;
    for (double& v : w) {
      v /= ws;
      wl += std::pow(v, l);
    }
    const double r = std::pow(c.y0[i] * wl, 1.0 / l);
    const double s = 1.0 / (1.0 + r);
    std::vector<double> xi;
    std::size_t k = 0;
    for (std::size_t m = 0; m <= w.size(); ++m) xi.push_back(m == c.anchor[i] ? r * s : w[k++] * s);
    x.push_back(std::move(xi));
  }
  return MixedProfile(x);
}

}  // namespace rlab
