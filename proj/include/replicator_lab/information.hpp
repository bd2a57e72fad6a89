#pragma once

#include <cmath>
#include <limits>
#include <span>

#include "errors.hpp"

namespace rlab {

/// Shannon entropy with the convention 0 log 0 = 0.
inline double entropy(std::span<const double> x) {
  double h = 0.0;
  for (double v : x)
    if (v > 0.0) h -= v * std::log(v);
  return h;
}

/// H(q, x) = -sum_{q_a > 0} q_a log x_a; +inf when x misses part of supp(q).
inline double cross_entropy(std::span<const double> q, std::span<const double> x) {
  if (q.size() != x.size()) throw InvalidArgument("cross_entropy: length mismatch");
  double h = 0.0;
  for (std::size_t a = 0; a < q.size(); ++a) {
    if (!(q[a] > 0.0)) continue;
    if (!(x[a] > 0.0)) return std::numeric_limits<double>::infinity();
    h -= q[a] * std::log(x[a]);
  }
  return h;
}

/// Relative entropy d_KL(q, x), evaluated termwise as sum q log(q/x) so that
/// it is exactly zero at q == x.
inline double kl_divergence(std::span<const double> q, std::span<const double> x) {
  if (q.size() != x.size()) throw InvalidArgument("kl_divergence: length mismatch");
  double d = 0.0;
  for (std::size_t a = 0; a < q.size(); ++a) {
    if (!(q[a] > 0.0)) continue;
    if (!(x[a] > 0.0)) return std::numeric_limits<double>::infinity();
    d += q[a] * std::log(q[a] / x[a]);
  }
  return d > 0.0 ? d : 0.0;  // rounding can leave -1e-17 near q == x
}

}  // namespace rlab
