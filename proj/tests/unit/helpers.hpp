#pragma once

#include <random>
#include <vector>

#include "replicator_lab/replicator_lab.hpp"

namespace testutil {

inline rlab::GameDef pd() { return rlab::GameDef::symmetric({{3, 0}, {5, 1}}); }

inline rlab::GameDef matching_pennies() {
  return rlab::GameDef::bimatrix({{1, -1}, {-1, 1}}, {{-1, 1}, {1, -1}});
}

/// Rows A, B, C against columns a, b, c. C goes in round 1, b and c in
/// round 2, B in round 3.
inline rlab::GameDef dominance_3x3() {
  return rlab::GameDef::bimatrix({{4, 0, 0}, {2, 3, 3}, {1, -1, -1}}, {{3, 1, 0}, {3, 1, 0}, {0, 4, 4}});
}

inline rlab::GameDef random_game(std::mt19937_64& rng, const std::vector<std::size_t>& counts) {
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::vector<double> data(counts.size() * rlab::tensor::profile_count(counts));
  for (double& v : data) v = u(rng);
  return rlab::GameDef(counts, data);
}

inline std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t n, double floor = 0.0) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(n);
  double s = 0.0;
  for (double& v : w) s += (v = e(rng) + floor);
  for (double& v : w) v /= s;
  return w;
}

inline rlab::MixedProfile random_profile(std::mt19937_64& rng, const std::vector<std::size_t>& counts,
                                         double floor = 0.0) {
  std::vector<std::vector<double>> c;
  for (std::size_t s : counts) c.push_back(random_simplex(rng, s, floor));
  return rlab::MixedProfile(c);
}

inline rlab::MixedProfile profile(std::vector<std::vector<double>> c) { return rlab::MixedProfile(c); }

}  // namespace testutil
