#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dynamics.hpp"
#include "errors.hpp"
#include "game.hpp"
#include "profile.hpp"
#include "rng.hpp"

namespace rlab {

enum class Integrator { ScoreSpace, SimplexSpace, DeterministicRK4, DiscreteLearning };

inline std::string_view to_string(Integrator k) {
  switch (k) {
    case Integrator::ScoreSpace: return "score_space";
    case Integrator::SimplexSpace: return "simplex_space";
    case Integrator::DeterministicRK4: return "rk4";
    case Integrator::DiscreteLearning: return "discrete";
  }
  return "?";
}

inline Integrator integrator_from_string(std::string_view s) {
  for (Integrator k : {Integrator::ScoreSpace, Integrator::SimplexSpace, Integrator::DeterministicRK4,
                       Integrator::DiscreteLearning})
    if (to_string(k) == s) return k;
  throw InvalidArgument("unknown integrator '" + std::string(s) + "'");
}

struct SimConfig {
  double horizon = 100.0;
  double dt = 1e-2;
  Integrator integrator = Integrator::ScoreSpace;
  std::size_t record_stride = 10;
  std::uint64_t seed = 0;
  /// Keep score snapshots alongside states (score-space and discrete only).
  bool record_scores = false;

  void validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("SimConfig: dt must be positive");
    if (!(horizon >= dt) || !std::isfinite(horizon)) throw InvalidArgument("SimConfig: need 0 < dt <= horizon");
    if (record_stride == 0) throw InvalidArgument("SimConfig: record_stride must be at least 1");
  }

  /// Number of steps; the last recorded time is >= horizon - dt.
  std::uint64_t steps() const {
    const double n = std::ceil(horizon / dt - 1e-9);
    return static_cast<std::uint64_t>(n < 1.0 ? 1.0 : n);
  }

  std::uint64_t hash() const {
    std::uint64_t h = mix64(std::bit_cast<std::uint64_t>(horizon));
    h = hash_combine(h, std::bit_cast<std::uint64_t>(dt));
    h = hash_combine(h, static_cast<std::uint64_t>(integrator));
    h = hash_combine(h, record_stride);
    h = hash_combine(h, seed);
    return hash_combine(h, record_scores ? 1 : 0);
  }
};

struct Trajectory {
  std::vector<double> times;
  std::vector<MixedProfile> states;
  std::vector<ScoreTable> scores;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  std::uint64_t steps = 0;
  /// Steps on which the simplex projection had to clamp a negative entry.
  std::uint64_t projection_events = 0;

  const MixedProfile& terminal() const { return states.back(); }
  double horizon() const { return times.back(); }
};

namespace detail {

inline bool should_record(std::uint64_t step, std::uint64_t last, std::size_t stride) {
  return step % stride == 0 || step == last;
}

inline ScoreTable unflatten(const std::vector<double>& flat, const std::vector<std::size_t>& offsets) {
  ScoreTable t;
  for (std::size_t i = 0; i + 1 < offsets.size(); ++i)
    t.emplace_back(flat.begin() + static_cast<std::ptrdiff_t>(offsets[i]),
                   flat.begin() + static_cast<std::ptrdiff_t>(offsets[i + 1]));
  return t;
}

inline std::vector<std::size_t> offsets_of(const std::vector<std::size_t>& counts) {
  std::vector<std::size_t> off{0};
  for (std::size_t s : counts) off.push_back(off.back() + s);
  return off;
}

inline void check_scores(const GameDef& g, const ScoreTable& scores) {
  if (scores.size() != g.num_players()) throw InvalidArgument("score table has wrong player count");
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (scores[i].size() != g.strategy_count(i)) throw InvalidArgument("score table has wrong strategy count");
}

inline void check_rates(const GameDef& g, const std::vector<double>& rates) {
  if (rates.empty()) return;
  if (rates.size() != g.num_players()) throw InvalidArgument("one learning rate per player required");
  for (double r : rates)
    if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("learning rates must be positive");
}

/// Logit of flat scores into `x` (same layout).
inline void logit_flat(const std::vector<double>& u, const std::vector<std::size_t>& off,
                       const std::vector<double>& rates, std::vector<double>& x) {
  for (std::size_t i = 0; i + 1 < off.size(); ++i)
    softmax_into({u.data() + off[i], off[i + 1] - off[i]}, rates.empty() ? 1.0 : rates[i],
                 {x.data() + off[i], off[i + 1] - off[i]});
}

inline void recenter(std::vector<double>& u, const std::vector<std::size_t>& off) {
  for (std::size_t i = 0; i + 1 < off.size(); ++i) {
    double m = 0.0;
    for (std::size_t k = off[i]; k < off[i + 1]; ++k) m += u[k];
    m /= static_cast<double>(off[i + 1] - off[i]);
    for (std::size_t k = off[i]; k < off[i + 1]; ++k) u[k] -= m;
  }
}

inline Trajectory start_trajectory(const SimConfig& cfg) {
  cfg.validate();
  Trajectory tr;
  tr.seed = cfg.seed;
  tr.config_hash = cfg.hash();
  tr.steps = cfg.steps();
  return tr;
}

/// Shared loop of the score-space and discrete integrators; `scale` is dt
/// for the SDE and 1 for the learning recursion.
template <class Noise>
Trajectory run_scores(const GameDef& g, const NoiseModel& noise, const std::vector<double>& rates,
                      const ScoreTable& init, const SimConfig& cfg, const Noise& source, double scale) {
  check_scores(g, init);
  check_rates(g, rates);
  noise.check_shape(g.strategy_counts());
  Trajectory tr = start_trajectory(cfg);
  const auto off = offsets_of(g.strategy_counts());
  std::vector<double> u;
  for (const auto& row : init)
    for (double v : row) {
      if (!std::isfinite(v)) throw InvalidArgument("initial scores must be finite");
      u.push_back(v);
    }
  std::vector<double> x(u.size());
  logit_flat(u, off, rates, x);
  MixedProfile state = MixedProfile::unchecked(off, x);

  auto record = [&](std::uint64_t step) {
    tr.times.push_back(static_cast<double>(step) * cfg.dt);
    tr.states.push_back(state);
    if (cfg.record_scores) tr.scores.push_back(unflatten(u, off));
  };
  record(0);
  const bool noisy = !noise.is_zero();
  for (std::uint64_t k = 0; k < tr.steps; ++k) {
    for (std::size_t i = 0; i < g.num_players(); ++i) {
      const auto pay = payoff_vector(g, state, i);
      for (std::size_t a = 0; a < pay.size(); ++a) {
        double du = pay[a] * scale;
        if (noisy) du += noise.eta(state, i, a) * source.increment(k, i, a, scale);
        u[off[i] + a] += du;
      }
    }
    recenter(u, off);
    for (double v : u)
      if (!std::isfinite(v)) throw SimulationError("non-finite score", static_cast<long long>(k + 1));
    logit_flat(u, off, rates, x);
    state = MixedProfile::unchecked(off, x);
    if (should_record(k + 1, tr.steps, cfg.record_stride)) record(k + 1);
  }
  return tr;
}

}  // namespace detail

/// Euler-Maruyama on the scores, U <- U + u(X) dt + eta(X) dW, X = logit(l U).
/// Scores are re-centred per player each step; the simplex is exact.
template <class Noise = BrownianNoise>
Trajectory simulate_scores(const GameDef& g, const NoiseModel& noise, const std::vector<double>& rates,
                           const ScoreTable& init_scores, const SimConfig& cfg, const Noise& source) {
  if (cfg.integrator != Integrator::ScoreSpace) throw InvalidArgument("simulate_scores: integrator must be score_space");
  return detail::run_scores(g, noise, rates, init_scores, cfg, source, cfg.dt);
}

inline Trajectory simulate_scores(const GameDef& g, const NoiseModel& noise, const std::vector<double>& rates,
                                  const ScoreTable& init_scores, const SimConfig& cfg) {
  return simulate_scores(g, noise, rates, init_scores, cfg, BrownianNoise{cfg.seed, 1});
}

/// Scores whose logit image is x (x must be interior).
inline ScoreTable scores_for(const MixedProfile& x, const std::vector<double>& rates = {}) {
  ScoreTable u;
  for (std::size_t i = 0; i < x.num_players(); ++i) {
    const double l = rates.empty() ? 1.0 : rates.at(i);
    u.emplace_back();
    for (double v : x[i]) {
      if (!(v > 0.0)) throw DomainError("scores_for: profile must be interior");
      u.back().push_back(std::log(v) / l);
    }
  }
  return u;
}

/// Euler-Maruyama on the profile itself, X <- X + b dt + sigma dW, followed
/// by clamp-and-renormalize. The only integrator for aggregate shocks.
template <class Noise = BrownianNoise>
Trajectory simulate_simplex(const DynamicsSpec& spec, const GameDef& g, const MixedProfile& x0, const SimConfig& cfg,
                            const Noise& source) {
  if (cfg.integrator != Integrator::SimplexSpace)
    throw InvalidArgument("simulate_simplex: integrator must be simplex_space");
  g.check_profile(x0);
  spec.validate(g);
  Trajectory tr = detail::start_trajectory(cfg);
  MixedProfile state = is_single_population(spec.variant) ? detail::population_profile(x0) : x0;
  const auto& off = state.offsets();
  const bool single = is_single_population(spec.variant);
  const bool noisy = is_stochastic(spec.variant) && !spec.noise.is_zero();
  std::vector<double> dw;

  tr.times.push_back(0.0);
  tr.states.push_back(state);
  for (std::uint64_t k = 0; k < tr.steps; ++k) {
    const TangentField f = eval_field(spec, g, state);
    std::vector<double> next = state.flat();
    for (std::size_t j = 0; j < next.size(); ++j) next[j] += f.drift[j] * cfg.dt;
    if (noisy) {
      for (std::size_t i = 0; i < state.num_players(); ++i) {
        const std::size_t s = state.size(i);
        const std::size_t src = single ? 0 : i;
        dw.resize(s);
        for (std::size_t b = 0; b < s; ++b) dw[b] = source.increment(k, src, b, cfg.dt);
        for (std::size_t a = 0; a < s; ++a) {
          double acc = 0.0;
          for (std::size_t b = 0; b < s; ++b) acc += f.diffusion[i][a * s + b] * dw[b];
          next[off[i] + a] += acc;
        }
      }
    }
    for (double v : next)
      if (!std::isfinite(v)) throw SimulationError("non-finite state", static_cast<long long>(k + 1));
    bool clamped = false;
    state = MixedProfile::project(off, std::move(next), &clamped);
    tr.projection_events += clamped;
    if (detail::should_record(k + 1, tr.steps, cfg.record_stride)) {
      tr.times.push_back(static_cast<double>(k + 1) * cfg.dt);
      tr.states.push_back(state);
    }
  }
  return tr;
}

inline Trajectory simulate_simplex(const DynamicsSpec& spec, const GameDef& g, const MixedProfile& x0,
                                   const SimConfig& cfg) {
  return simulate_simplex(spec, g, x0, cfg, BrownianNoise{cfg.seed, 1});
}

/// Classical RK4 on the drift of RD or LRD, renormalized every step.
inline Trajectory simulate_deterministic(const DynamicsSpec& spec, const GameDef& g, const MixedProfile& x0,
                                         const SimConfig& cfg) {
  if (cfg.integrator != Integrator::DeterministicRK4)
    throw InvalidArgument("simulate_deterministic: integrator must be rk4");
  if (is_stochastic(spec.variant)) throw InvalidArgument("simulate_deterministic: variant must be RD or LRD");
  g.check_profile(x0);
  spec.validate(g);
  Trajectory tr = detail::start_trajectory(cfg);
  MixedProfile state = x0;
  const auto& off = state.offsets();
  const double h = cfg.dt;
  auto drift = [&](const std::vector<double>& v) {
    return eval_field(spec, g, MixedProfile::unchecked(off, v)).drift;
  };
  auto axpy = [](const std::vector<double>& x, const std::vector<double>& k, double c) {
    std::vector<double> out(x);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += c * k[j];
    return out;
  };

  tr.times.push_back(0.0);
  tr.states.push_back(state);
  for (std::uint64_t step = 0; step < tr.steps; ++step) {
    const auto& x = state.flat();
    const auto k1 = drift(x);
    const auto k2 = drift(axpy(x, k1, h / 2));
    const auto k3 = drift(axpy(x, k2, h / 2));
    const auto k4 = drift(axpy(x, k3, h));
    std::vector<double> next(x);
    for (std::size_t j = 0; j < next.size(); ++j) next[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    for (double v : next)
      if (!std::isfinite(v)) throw SimulationError("non-finite state", static_cast<long long>(step + 1));
    bool clamped = false;
    state = MixedProfile::project(off, std::move(next), &clamped);
    tr.projection_events += clamped;
    if (detail::should_record(step + 1, tr.steps, cfg.record_stride)) {
      tr.times.push_back(static_cast<double>(step + 1) * h);
      tr.states.push_back(state);
    }
  }
  return tr;
}

/// Discrete exponential learning, U(t+1) = U(t) + u(p(t)) + eta(p(t)) xi,
/// p = logit(l U). `dt` is ignored beyond counting rounds: T rounds in all.
template <class Noise = BrownianNoise>
Trajectory simulate_discrete(const GameDef& g, const NoiseModel& noise, const std::vector<double>& rates,
                             const ScoreTable& init_scores, const SimConfig& cfg, const Noise& source) {
  if (cfg.integrator != Integrator::DiscreteLearning)
    throw InvalidArgument("simulate_discrete: integrator must be discrete");
  SimConfig rounds = cfg;
  rounds.dt = 1.0;
  if (rounds.horizon < 1.0) throw InvalidArgument("simulate_discrete: need at least one round");
  Trajectory tr = detail::run_scores(g, noise, rates, init_scores, rounds, source, 1.0);
  tr.config_hash = cfg.hash();
  return tr;
}

inline Trajectory simulate_discrete(const GameDef& g, const NoiseModel& noise, const std::vector<double>& rates,
                                    const ScoreTable& init_scores, const SimConfig& cfg) {
  return simulate_discrete(g, noise, rates, init_scores, cfg, BrownianNoise{cfg.seed, 1});
}

/// Dispatch on cfg.integrator. Score-based integrators start from the logit
/// preimage of x0, so x0 must be interior for them.
inline Trajectory simulate(const DynamicsSpec& spec, const GameDef& g, const MixedProfile& x0, const SimConfig& cfg) {
  spec.validate(g);
  switch (cfg.integrator) {
    case Integrator::ScoreSpace:
    case Integrator::DiscreteLearning: {
      if (spec.variant != Variant::SRD && spec.variant != Variant::SLRD && spec.variant != Variant::RD &&
          spec.variant != Variant::LRD)
        throw InvalidArgument(std::string("score-based integrators cannot run ") + std::string(to_string(spec.variant)));
      std::vector<double> rates;
      for (std::size_t i = 0; i < g.num_players(); ++i) rates.push_back(spec.rate(i));
      const NoiseModel noise = is_stochastic(spec.variant) ? spec.noise : NoiseModel::zero(g.strategy_counts());
      const ScoreTable u0 = scores_for(x0, rates);
      return cfg.integrator == Integrator::ScoreSpace ? simulate_scores(g, noise, rates, u0, cfg)
                                                      : simulate_discrete(g, noise, rates, u0, cfg);
    }
    case Integrator::SimplexSpace: return simulate_simplex(spec, g, x0, cfg);
    case Integrator::DeterministicRK4: return simulate_deterministic(spec, g, x0, cfg);
  }
  throw InvalidArgument("unknown integrator");
}

}  // namespace rlab
