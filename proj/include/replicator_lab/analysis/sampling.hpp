#pragma once

#include <cstddef>
#include <vector>

#include "../errors.hpp"
#include "../game.hpp"
#include "../profile.hpp"
#include "../rng.hpp"

namespace rlab {

/// Uniform point of the open simplex of dimension n - 1 (flat Dirichlet).
inline std::vector<double> sample_dirichlet(CounterStream& rng, std::size_t n) {
  std::vector<double> w(n);
  double s = 0.0;
  for (double& v : w) s += (v = rng.exponential());
  for (double& v : w) v /= s;
  return w;
}

/// Interior profile at l1 distance r in (0, delta] from the vertex q. The
/// radius is split across players by a Dirichlet draw; player i moves mass
/// r_i / 2 off q_i onto the other strategies in a Dirichlet direction.
inline MixedProfile sample_near_vertex(CounterStream& rng, const std::vector<std::size_t>& counts, const PureProfile& q,
                                       double delta) {
  if (!(delta > 0.0)) throw InvalidArgument("sample_near_vertex: radius must be positive");
  if (q.size() != counts.size()) throw InvalidArgument("sample_near_vertex: anchor has wrong size");
  const double r = delta * rng.uniform();
  const auto split = sample_dirichlet(rng, counts.size());
  std::vector<std::vector<double>> x;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (q[i] >= counts[i]) throw InvalidArgument("sample_near_vertex: anchor out of range");
    std::vector<double> xi(counts[i], 0.0);
    const double m = std::min(0.5 * r * split[i], 0.5);
    if (counts[i] == 1) {
      xi[0] = 1.0;
    } else {
      const auto dir = sample_dirichlet(rng, counts[i] - 1);
      std::size_t k = 0;
      for (std::size_t a = 0; a < counts[i]; ++a) xi[a] = a == q[i] ? 1.0 - m : m * dir[k++];
    }
    x.push_back(std::move(xi));
  }
  return MixedProfile(x);
}

}  // namespace rlab
