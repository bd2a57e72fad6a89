#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "errors.hpp"

namespace rlab {

/// Tolerated deviation of a component sum from 1 before renormalization.
inline constexpr double kSimplexInputTolerance = 1e-6;

/// A point of the product simplex: one probability vector per player.
///
/// Storage is a single flat buffer with per-player offsets, so the state of
/// the dynamics can be updated in place by the integrators without
/// reallocating. Every constructor leaves the components nonnegative with
/// sums equal to 1 up to rounding of one division.
class MixedProfile {
 public:
  MixedProfile() = default;

  /// Validates and renormalizes. Rejects negative or non-finite entries and
  /// components whose sum is further than 1e-6 from 1.
  explicit MixedProfile(const std::vector<std::vector<double>>& components) {
    offsets_.reserve(components.size() + 1);
    offsets_.push_back(0);
    for (const auto& c : components) {
      if (c.empty()) throw InvalidArgument("MixedProfile: empty component");
      values_.insert(values_.end(), c.begin(), c.end());
      offsets_.push_back(values_.size());
    }
    for (std::size_t i = 0; i < num_players(); ++i) {
      double sum = 0.0;
      for (double v : (*this)[i]) {
        if (!std::isfinite(v) || v < 0.0)
          throw InvalidArgument("MixedProfile: player " + std::to_string(i) +
                                " has a negative or non-finite probability");
        sum += v;
      }
      if (std::abs(sum - 1.0) > kSimplexInputTolerance)
        throw InvalidArgument("MixedProfile: player " + std::to_string(i) +
                              " probabilities sum to " + std::to_string(sum));
      for (double& v : mutable_player(i)) v /= sum;
    }
  }

  static MixedProfile uniform(const std::vector<std::size_t>& counts) {
    std::vector<std::vector<double>> c;
    for (std::size_t s : counts) {
      if (s == 0) throw InvalidArgument("MixedProfile: zero strategy count");
      c.emplace_back(s, 1.0 / static_cast<double>(s));
    }
    return MixedProfile(c);
  }

  static MixedProfile vertex(const std::vector<std::size_t>& counts,
                             const std::vector<std::size_t>& pure) {
    if (counts.size() != pure.size()) throw InvalidArgument("MixedProfile::vertex: size mismatch");
    std::vector<std::vector<double>> c;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (pure[i] >= counts[i]) throw InvalidArgument("MixedProfile::vertex: index out of range");
      c.emplace_back(counts[i], 0.0);
      c.back()[pure[i]] = 1.0;
    }
    return MixedProfile(c);
  }

  /// Clamp negatives to zero and divide each component by its sum. Used by
  /// integrators to turn a raw state buffer into a profile. Returns false
  /// from `clamped` when nothing had to be clamped.
  static MixedProfile project(std::vector<std::size_t> offsets, std::vector<double> values,
                              bool* clamped = nullptr) {
    MixedProfile p;
    p.offsets_ = std::move(offsets);
    p.values_ = std::move(values);
    bool any = false;
    for (std::size_t i = 0; i < p.num_players(); ++i) {
      double sum = 0.0;
      for (double& v : p.mutable_player(i)) {
        if (!std::isfinite(v)) throw InvalidArgument("MixedProfile::project: non-finite entry");
        if (v < 0.0) {
          v = 0.0;
          any = true;
        }
        sum += v;
      }
      if (!(sum > 0.0)) throw InvalidArgument("MixedProfile::project: component collapsed to zero");
      for (double& v : p.mutable_player(i)) v /= sum;
    }
    if (clamped) *clamped = any;
    return p;
  }

  /// Wrap a raw buffer without validation; for integrator stages where the
  /// state may sit marginally off the simplex.
  static MixedProfile unchecked(std::vector<std::size_t> offsets, std::vector<double> values) {
    MixedProfile p;
    p.offsets_ = std::move(offsets);
    p.values_ = std::move(values);
    return p;
  }

  std::size_t num_players() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t size(std::size_t i) const { return offsets_[i + 1] - offsets_[i]; }
  std::vector<std::size_t> counts() const {
    std::vector<std::size_t> c(num_players());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = size(i);
    return c;
  }

  std::span<const double> operator[](std::size_t i) const {
    return {values_.data() + offsets_[i], size(i)};
  }
  double at(std::size_t i, std::size_t alpha) const { return values_[offsets_[i] + alpha]; }

  const std::vector<double>& flat() const { return values_; }
  const std::vector<std::size_t>& offsets() const { return offsets_; }

  std::vector<std::vector<double>> to_nested() const {
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < num_players(); ++i) out.emplace_back((*this)[i].begin(), (*this)[i].end());
    return out;
  }

  bool is_interior() const {
    for (double v : values_)
      if (!(v > 0.0)) return false;
    return true;
  }

  friend bool operator==(const MixedProfile&, const MixedProfile&) = default;

 private:
  std::span<double> mutable_player(std::size_t i) { return {values_.data() + offsets_[i], size(i)}; }

  std::vector<std::size_t> offsets_;
  std::vector<double> values_;
};

/// Sum of per-player l1 distances; the neighborhood metric on the product simplex.
inline double l1_distance(const MixedProfile& a, const MixedProfile& b) {
  if (a.offsets() != b.offsets()) throw InvalidArgument("l1_distance: shape mismatch");
  double d = 0.0;
  for (std::size_t k = 0; k < a.flat().size(); ++k) d += std::abs(a.flat()[k] - b.flat()[k]);
  return d;
}

/// True when `x` is a probability vector (nonnegative, sum 1 within `tol`).
inline bool is_simplex_vector(std::span<const double> x, double tol = kSimplexInputTolerance) {
  if (x.empty()) return false;
  double s = 0.0;
  for (double v : x) {
    if (!std::isfinite(v) || v < 0.0) return false;
    s += v;
  }
  return std::abs(s - 1.0) <= tol;
}

}  // namespace rlab
