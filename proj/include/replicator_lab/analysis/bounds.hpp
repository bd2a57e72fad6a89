#pragma once

#include <cmath>
#include <cstddef>
#include <span>

#include "../errors.hpp"

namespace rlab {

struct BoundValue {
  double value = 0.0;
  /// False when t <= (M - h) / (l v): the bound is not asserted there.
  bool valid = false;
  double threshold_time = 0.0;
};

/// Lower bound on P{X_{i alpha}(t) < e^{-M}} for a strictly dominated alpha,
///   1/2 erfc((M - h - l v t) / (2 l eta sqrt(S t))).
/// With l = 1 this is the unadjusted bound.
inline BoundValue rate_adjusted_erfc_bound(double M, double h, double v, double eta, std::size_t S, double lambda,
                                           double t) {
  if (!(t > 0.0)) throw InvalidArgument("erfc_bound: t must be positive");
  if (!(eta > 0.0)) throw InvalidArgument("erfc_bound: eta must be positive");
  if (S < 1) throw InvalidArgument("erfc_bound: S must be at least 1");
  if (!(lambda > 0.0)) throw InvalidArgument("erfc_bound: lambda must be positive");
  if (!(v > 0.0)) throw InvalidArgument("erfc_bound: v must be positive");
  BoundValue b;
  const double arg = (M - h - lambda * v * t) / (2.0 * lambda * eta * std::sqrt(static_cast<double>(S) * t));
  b.value = 0.5 * std::erfc(arg);
  b.threshold_time = (M - h) / (lambda * v);
  b.valid = t > b.threshold_time;
  return b;
}

inline BoundValue erfc_bound(double M, double h, double v, double eta, std::size_t S, double t) {
  return rate_adjusted_erfc_bound(M, h, v, eta, S, 1.0, t);
}

/// h_i(x_i) = log x_{i alpha} - sum_beta p_beta log x_{i beta}, with p the
/// dominator of alpha.
inline double bound_offset(std::span<const double> x, std::size_t alpha, std::span<const double> dominator) {
  if (x.size() != dominator.size() || alpha >= x.size()) throw InvalidArgument("bound_offset: size mismatch");
  if (!(x[alpha] > 0.0)) throw DomainError("bound_offset: x must be positive on the dominated strategy");
  double acc = std::log(x[alpha]);
  for (std::size_t b = 0; b < x.size(); ++b) {
    if (dominator[b] == 0.0) continue;
    if (!(x[b] > 0.0)) throw DomainError("bound_offset: x must be positive on the dominator's support");
    acc -= dominator[b] * std::log(x[b]);
  }
  return acc;
}

}  // namespace rlab
