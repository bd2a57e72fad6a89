#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>

namespace rlab {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  return mix64(h ^ (mix64(v) + 0x632be59bd9b4e019ULL));
}

/// Seed of run k in an ensemble: hash(master_seed, k).
constexpr std::uint64_t run_seed(std::uint64_t master_seed, std::uint64_t run) {
  return hash_combine(mix64(master_seed), run);
}

/// Uniform in the open interval (0, 1) from 53 high bits.
inline double to_open_unit(std::uint64_t h) {
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal addressed by a counter; Box-Muller on two hashed uniforms.
inline double normal_from_hash(std::uint64_t h) {
  const double u1 = to_open_unit(h);
  const double u2 = to_open_unit(mix64(h));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Standard normal for stream coordinate (seed, step, player, strategy). The
/// variate depends only on its coordinates, so paths are reproducible
/// regardless of evaluation order or threading.
inline double standard_normal(std::uint64_t seed, std::uint64_t step, std::uint64_t player, std::uint64_t strategy) {
  return normal_from_hash(hash_combine(hash_combine(hash_combine(seed, step), player), strategy));
}

/// Sequential counter-based stream for auxiliary sampling (start points,
/// random test points).
class CounterStream {
 public:
  explicit CounterStream(std::uint64_t seed) : seed_(mix64(seed)) {}

  std::uint64_t next_u64() { return hash_combine(seed_, counter_++); }
  double uniform() { return to_open_unit(next_u64()); }
  double normal() { return normal_from_hash(next_u64()); }
  double exponential() { return -std::log(uniform()); }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

/// Brownian increments on a grid of step dt. With refine = m the increment
/// of coarse step k is the sum of the m fine increments k*m .. k*m+m-1 of
/// the same seed, so a run at dt and a run at dt/m with refine = 1 see the
/// same Brownian path.
struct BrownianNoise {
  std::uint64_t seed = 0;
  std::uint64_t refine = 1;

  double increment(std::uint64_t step, std::size_t player, std::size_t strategy, double dt) const {
    if (refine == 1) return std::sqrt(dt) * standard_normal(seed, step, player, strategy);
    const double sub = dt / static_cast<double>(refine);
    double acc = 0.0;
    for (std::uint64_t j = 0; j < refine; ++j) acc += standard_normal(seed, step * refine + j, player, strategy);
    return std::sqrt(sub) * acc;
  }
};

}  // namespace rlab
