#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "../congestion.hpp"
#include "../dynamics.hpp"
#include "../errors.hpp"
#include "../game.hpp"
#include "../profile.hpp"
#include "../rng.hpp"

namespace rlab {

/// A smooth function on (a neighbourhood of) the product simplex. Only
/// `value` is required; missing derivatives fall back to central
/// differences with step 1e-5. `hessian` returns one S_i x S_i row-major
/// block per player (cross-player blocks never enter the generator because
/// the players' noises are independent).
struct ScalarField {
  std::string name;
  std::function<double(const MixedProfile&)> value;
  std::function<std::vector<double>(const MixedProfile&)> gradient;
  std::function<std::vector<std::vector<double>>(const MixedProfile&)> hessian;
};

inline constexpr double kFiniteDifferenceStep = 1e-5;

namespace detail {

inline MixedProfile shifted(const MixedProfile& x, std::size_t a, double da, std::size_t b = 0, double db = 0.0) {
  std::vector<double> v = x.flat();
  v[a] += da;
  v[b] += db;
  return MixedProfile::unchecked(x.offsets(), std::move(v));
}

inline std::vector<double> fd_gradient(const ScalarField& f, const MixedProfile& x, double h) {
  std::vector<double> g(x.flat().size());
  for (std::size_t k = 0; k < g.size(); ++k)
    g[k] = (f.value(shifted(x, k, h)) - f.value(shifted(x, k, -h))) / (2 * h);
  return g;
}

/// Second derivative d^2 f / dx_a dx_b by central differences on flat indices.
inline double fd_second(const ScalarField& f, const MixedProfile& x, std::size_t a, std::size_t b, double h) {
  if (a == b)
    return (f.value(shifted(x, a, h)) - 2 * f.value(x) + f.value(shifted(x, a, -h))) / (h * h);
  return (f.value(shifted(x, a, h, b, h)) - f.value(shifted(x, a, h, b, -h)) - f.value(shifted(x, a, -h, b, h)) +
          f.value(shifted(x, a, -h, b, -h))) /
         (4 * h * h);
}

inline std::vector<std::vector<double>> fd_hessian(const ScalarField& f, const MixedProfile& x, double h) {
  std::vector<std::vector<double>> H(x.num_players());
  for (std::size_t i = 0; i < x.num_players(); ++i) {
    const std::size_t s = x.size(i), o = x.offsets()[i];
    H[i].assign(s * s, 0.0);
    for (std::size_t a = 0; a < s; ++a)
      for (std::size_t b = a; b < s; ++b) H[i][a * s + b] = H[i][b * s + a] = fd_second(f, x, o + a, o + b, h);
  }
  return H;
}

}  // namespace detail

/// Lf(x) = sum b . grad f + 1/2 sum_i tr(sigma_i sigma_i^T H_i).
///
/// Single-population variants move both components together under one
/// Brownian motion, so the cross blocks between the two copies enter as
/// well; they are always taken by finite differences.
inline double apply_generator(const DynamicsSpec& spec, const GameDef& g, const ScalarField& f, const MixedProfile& x) {
  if (!f.value) throw InvalidArgument("apply_generator: field has no value function");
  const TangentField tf = eval_field(spec, g, x);
  const std::vector<double> grad = f.gradient ? f.gradient(x) : detail::fd_gradient(f, x, kFiniteDifferenceStep);
  if (grad.size() != x.flat().size()) throw InvalidArgument("apply_generator: gradient has wrong size");
  double lf = 0.0;
  for (std::size_t k = 0; k < grad.size(); ++k) lf += tf.drift[k] * grad[k];
  if (!is_stochastic(spec.variant)) return lf;

  auto covariance = [&](const std::vector<double>& sig, std::size_t s) {
    std::vector<double> c(s * s, 0.0);
    for (std::size_t a = 0; a < s; ++a)
      for (std::size_t b = 0; b < s; ++b)
        for (std::size_t m = 0; m < s; ++m) c[a * s + b] += sig[a * s + m] * sig[b * s + m];
    return c;
  };

  if (is_single_population(spec.variant)) {
    const std::size_t s = x.size(0);
    const auto c = covariance(tf.diffusion[0], s);
    double acc = 0.0;
    for (std::size_t p = 0; p < 2; ++p)
      for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t a = 0; a < s; ++a)
          for (std::size_t b = 0; b < s; ++b)
            acc += c[a * s + b] * detail::fd_second(f, x, p * s + a, r * s + b, kFiniteDifferenceStep);
    return lf + 0.5 * acc;
  }

  const auto H = f.hessian ? f.hessian(x) : detail::fd_hessian(f, x, kFiniteDifferenceStep);
  for (std::size_t i = 0; i < x.num_players(); ++i) {
    const std::size_t s = x.size(i);
    const auto c = covariance(tf.diffusion[i], s);
    for (std::size_t k = 0; k < s * s; ++k) lf += 0.5 * c[k] * H[i][k];
  }
  return lf;
}

// ---- standard test functions ----

/// f(x) = x_{i alpha}.
inline ScalarField coordinate_field(const std::vector<std::size_t>& counts, std::size_t i, std::size_t alpha) {
  ScalarField f;
  f.name = "x[" + std::to_string(i) + "][" + std::to_string(alpha) + "]";
  f.value = [i, alpha](const MixedProfile& x) { return x.at(i, alpha); };
  f.gradient = [i, alpha](const MixedProfile& x) {
    std::vector<double> g(x.flat().size(), 0.0);
    g[x.offsets()[i] + alpha] = 1.0;
    return g;
  };
  f.hessian = [counts](const MixedProfile&) {
    std::vector<std::vector<double>> H;
    for (std::size_t s : counts) H.emplace_back(s * s, 0.0);
    return H;
  };
  return f;
}

/// f(x) = sum_i x_{i,q_i}^{-l_i} sum_{mu != q_i} x_{i mu}^{l_i}, i.e. sum_i 1/Y_{i,0}
/// in adjusted coordinates anchored at the pure profile q.
inline ScalarField inverse_y_field(const PureProfile& anchor, const std::vector<double>& lambda) {
  if (anchor.size() != lambda.size()) throw InvalidArgument("inverse_y_field: one exponent per player required");
  for (double l : lambda)
    if (!(l > 0.0)) throw InvalidArgument("inverse_y_field: exponents must be positive");
  ScalarField f;
  f.name = "inverse_y";
  f.value = [anchor, lambda](const MixedProfile& x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < anchor.size(); ++i) {
      const double l = lambda[i];
      double b = 0.0;
      for (std::size_t m = 0; m < x.size(i); ++m)
        if (m != anchor[i]) b += std::pow(x.at(i, m), l);
      acc += std::pow(x.at(i, anchor[i]), -l) * b;
    }
    return acc;
  };
  f.gradient = [anchor, lambda](const MixedProfile& x) {
    std::vector<double> g(x.flat().size(), 0.0);
    for (std::size_t i = 0; i < anchor.size(); ++i) {
      const double l = lambda[i], x0 = x.at(i, anchor[i]);
      const double a = std::pow(x0, -l);
      double b = 0.0;
      for (std::size_t m = 0; m < x.size(i); ++m) {
        if (m == anchor[i]) continue;
        b += std::pow(x.at(i, m), l);
        g[x.offsets()[i] + m] = a * l * std::pow(x.at(i, m), l - 1);
      }
      g[x.offsets()[i] + anchor[i]] = -l * std::pow(x0, -l - 1) * b;
    }
    return g;
  };
  f.hessian = [anchor, lambda](const MixedProfile& x) {
    std::vector<std::vector<double>> H(x.num_players());
    for (std::size_t i = 0; i < anchor.size(); ++i) {
      const std::size_t s = x.size(i), z = anchor[i];
      const double l = lambda[i], x0 = x.at(i, z);
      H[i].assign(s * s, 0.0);
      double b = 0.0;
      for (std::size_t m = 0; m < s; ++m) {
        if (m == z) continue;
        const double xm = x.at(i, m);
        b += std::pow(xm, l);
        H[i][m * s + m] = std::pow(x0, -l) * l * (l - 1) * std::pow(xm, l - 2);
        H[i][m * s + z] = H[i][z * s + m] = -l * l * std::pow(x0, -l - 1) * std::pow(xm, l - 1);
      }
      H[i][z * s + z] = l * (l + 1) * std::pow(x0, -l - 2) * b;
    }
    return H;
  };
  return f;
}

/// f(x) = sum_i exp(-a_i y_i), y_i = logit x_{i,q_i}, for dyadic games. In
/// x coordinates this is sum_i ((1 - x_{i,q_i}) / x_{i,q_i})^{a_i}.
inline ScalarField exp_logit_field(const std::vector<std::size_t>& counts, const PureProfile& anchor,
                                   const std::vector<double>& a) {
  for (std::size_t s : counts)
    if (s != 2) throw InvalidArgument("exp_logit_field: game must be dyadic");
  ScalarField f = inverse_y_field(anchor, a);
  f.name = "exp_logit";
  return f;
}

/// f(x) = V(x) - V(q). V is multilinear, so each player's Hessian block is zero.
inline ScalarField potential_field(const PotentialFn& V, const PureProfile& q) {
  ScalarField f;
  f.name = "potential";
  const double vq = V.at(q);
  f.value = [V, vq](const MixedProfile& x) { return V(x) - vq; };
  f.gradient = [V](const MixedProfile& x) {
    std::vector<double> g;
    for (std::size_t i = 0; i < x.num_players(); ++i) {
      const auto p = V.partials(x, i);
      g.insert(g.end(), p.begin(), p.end());
    }
    return g;
  };
  f.hessian = [](const MixedProfile& x) {
    std::vector<std::vector<double>> H;
    for (std::size_t i = 0; i < x.num_players(); ++i) H.emplace_back(x.size(i) * x.size(i), 0.0);
    return H;
  };
  return f;
}

inline ScalarField linear_combination(double a, const ScalarField& f, double b, const ScalarField& g) {
  ScalarField h;
  h.name = "combination";
  h.value = [=](const MixedProfile& x) { return a * f.value(x) + b * g.value(x); };
  if (f.gradient && g.gradient)
    h.gradient = [=](const MixedProfile& x) {
      auto u = f.gradient(x);
      const auto v = g.gradient(x);
      for (std::size_t k = 0; k < u.size(); ++k) u[k] = a * u[k] + b * v[k];
      return u;
    };
  if (f.hessian && g.hessian)
    h.hessian = [=](const MixedProfile& x) {
      auto u = f.hessian(x);
      const auto v = g.hessian(x);
      for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t k = 0; k < u[i].size(); ++k) u[i][k] = a * u[i][k] + b * v[i][k];
      return u;
    };
  return h;
}

// ---- Monte Carlo probe ----

struct GeneratorProbe {
  MixedProfile x;
  std::string function;
  Variant variant = Variant::SRD;
  double analytic = 0.0;
  double empirical = 0.0;
  double stderr_ = 0.0;
  double h = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

/// One micro-step of length h from x under the given variant, driven by the
/// standard normals of `seed`. Each variant steps the object it is defined
/// through: scores for SRD/SLRD (then logit), the unnormalized population
/// Z <- Z (1 + u h + eta sqrt(h) xi) for ASRD (then normalize), and the
/// drift alone for RD/LRD.
inline MixedProfile micro_step(const DynamicsSpec& spec, const GameDef& g, const MixedProfile& x, double h,
                               std::uint64_t seed) {
  const bool single = is_single_population(spec.variant);
  const MixedProfile base = single ? detail::population_profile(x) : x;
  const std::size_t players = single ? 1 : base.num_players();
  std::vector<std::vector<double>> next = base.to_nested();
  const double sq = std::sqrt(h);
  for (std::size_t i = 0; i < players; ++i) {
    const auto u = payoff_vector(g, base, i);
    const std::size_t s = base.size(i);
    switch (spec.variant) {
      case Variant::RD:
      case Variant::LRD: {
        double ubar = 0.0;
        for (std::size_t a = 0; a < s; ++a) ubar += base.at(i, a) * u[a];
        for (std::size_t a = 0; a < s; ++a) next[i][a] += spec.rate(i) * base.at(i, a) * (u[a] - ubar) * h;
        break;
      }
      case Variant::SRD:
      case Variant::SLRD:
      case Variant::SRD1: {
        const double l = spec.rate(i);
        std::vector<double> U(s);
        for (std::size_t a = 0; a < s; ++a) {
          if (!(base.at(i, a) > 0.0)) throw DomainError("micro_step: x must be interior");
          U[a] = std::log(base.at(i, a)) / l + u[a] * h +
                 spec.noise.eta(base, i, a) * sq * standard_normal(seed, 0, i, a);
        }
        softmax_into(U, l, next[i]);
        break;
      }
      case Variant::ASRD:
      case Variant::ASRD1: {
        double total = 0.0;
        for (std::size_t a = 0; a < s; ++a) {
          next[i][a] = base.at(i, a) *
                       (1.0 + u[a] * h + spec.noise.eta(base, i, a) * sq * standard_normal(seed, 0, i, a));
          if (next[i][a] < 0.0) next[i][a] = 0.0;
          total += next[i][a];
        }
        for (double& v : next[i]) v /= total;
        break;
      }
    }
  }
  if (single) next[1] = next[0];
  return MixedProfile::unchecked(base.offsets(), [&] {
    std::vector<double> flat;
    for (const auto& c : next) flat.insert(flat.end(), c.begin(), c.end());
    return flat;
  }());
}

/// Empirical drift [E f(X(h)) - f(x)] / h over n micro-steps against Lf(x).
inline GeneratorProbe generator_consistency_probe(const DynamicsSpec& spec, const GameDef& g, const ScalarField& f,
                                                  const MixedProfile& x, double h, std::size_t n, std::uint64_t seed) {
  if (!(h > 0.0) || h > 1e-2) throw InvalidArgument("generator_consistency_probe: need 0 < h <= 1e-2");
  if (n < 2) throw InvalidArgument("generator_consistency_probe: need at least two runs");
  if (!x.is_interior()) throw InvalidArgument("generator_consistency_probe: x must be interior");
  spec.validate(g);
  const MixedProfile base = is_single_population(spec.variant) ? detail::population_profile(x) : x;
  GeneratorProbe p;
  p.x = base;
  p.function = f.name;
  p.variant = spec.variant;
  p.h = h;
  p.n = n;
  p.seed = seed;
  p.analytic = apply_generator(spec, g, f, base);
  const double f0 = f.value(base);
  double mean = 0.0, m2 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = (f.value(micro_step(spec, g, base, h, run_seed(seed, k))) - f0) / h;
    const double delta = d - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (d - mean);
  }
  p.empirical = mean;
  p.stderr_ = std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
  return p;
}

}  // namespace rlab
