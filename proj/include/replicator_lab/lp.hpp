#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"

namespace rlab::lp {

enum class Status { Optimal, Unbounded, IterationLimit };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Unbounded: return "unbounded";
    case Status::IterationLimit: return "iteration-limit";
  }
  return "unknown";
}

struct Result {
  Status status = Status::IterationLimit;
  double objective = 0.0;
  std::vector<double> solution;
};

/// Dense tableau simplex for
///
///     maximize c^T z   subject to   A z <= b,  z >= 0,
///
/// with b >= 0 so that the slack basis is feasible. Bland's rule prevents
/// cycling. Intended for the small dominance programs (a few hundred rows).
inline Result maximize(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                       const std::vector<double>& c, std::size_t max_iterations = 100000) {
  const std::size_t m = A.size();
  const std::size_t n = c.size();
  constexpr double kEps = 1e-12;
  for (std::size_t r = 0; r < m; ++r) {
    if (A[r].size() != n) throw InvalidArgument("lp::maximize: ragged constraint matrix");
    if (b[r] < 0.0) throw InvalidArgument("lp::maximize: negative right-hand side");
  }
  // tableau rows: [A | I | b], objective row: [-c | 0 | 0]
  const std::size_t width = n + m + 1;
  std::vector<std::vector<double>> t(m + 1, std::vector<double>(width, 0.0));
  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t j = 0; j < n; ++j) t[r][j] = A[r][j];
    t[r][n + r] = 1.0;
    t[r][width - 1] = b[r];
    basis[r] = n + r;
  }
  for (std::size_t j = 0; j < n; ++j) t[m][j] = -c[j];

  Result res;
  for (std::size_t it = 0; it < max_iterations; ++it) {
    std::size_t enter = width;
    for (std::size_t j = 0; j + 1 < width; ++j)
      if (t[m][j] < -kEps) {
        enter = j;
        break;
      }
    if (enter == width) {
      res.status = Status::Optimal;
      res.objective = t[m][width - 1];
      res.solution.assign(n, 0.0);
      for (std::size_t r = 0; r < m; ++r)
        if (basis[r] < n) res.solution[basis[r]] = t[r][width - 1];
      return res;
    }
    std::size_t leave = m;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < m; ++r) {
      if (t[r][enter] > kEps) {
        double ratio = t[r][width - 1] / t[r][enter];
        if (ratio < best - kEps || (std::abs(ratio - best) <= kEps && leave < m && basis[r] < basis[leave])) {
          best = ratio;
          leave = r;
        }
      }
    }
    if (leave == m) {
      res.status = Status::Unbounded;
      return res;
    }
    const double piv = t[leave][enter];
    for (double& v : t[leave]) v /= piv;
    for (std::size_t r = 0; r <= m; ++r) {
      if (r == leave) continue;
      const double f = t[r][enter];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width; ++j) t[r][j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }
  res.status = Status::IterationLimit;
  return res;
}

}  // namespace rlab::lp
