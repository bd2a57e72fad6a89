#pragma once

// JSON and CSV formats. Requires nlohmann/json (vendor/json.hpp) on the
// include path; the rest of the library does not.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "analysis/extinction.hpp"
#include "analysis/generator.hpp"
#include "analysis/lyapunov.hpp"
#include "analysis/potential.hpp"
#include "analysis/stability.hpp"
#include "congestion.hpp"
#include "dominance.hpp"
#include "dynamics.hpp"
#include "engine.hpp"
#include "ensemble.hpp"

namespace rlab::io {

using json = nlohmann::json;

/// A configuration value is missing or malformed; `field` is a JSON path.
class ConfigError : public InvalidArgument {
 public:
  ConfigError(const std::string& field, const std::string& message)
      : InvalidArgument(field + ": " + message), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

namespace detail {

inline const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(path.empty() ? key : path + "." + key, "missing required field");
  return *it;
}

template <class T>
T get_as(const json& j, const std::string& path) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(path, "has the wrong type");
  }
}

inline std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

inline void flatten_payoffs(const json& j, std::size_t depth, const std::vector<std::size_t>& counts,
                            std::vector<double>& out, const std::string& path) {
  if (depth == counts.size()) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    out.push_back(j.get<double>());
    return;
  }
  if (!j.is_array() || j.size() != counts[depth])
    throw ConfigError(path, "expected an array of length " + std::to_string(counts[depth]));
  for (std::size_t k = 0; k < j.size(); ++k) flatten_payoffs(j[k], depth + 1, counts, out, path + "[" + std::to_string(k) + "]");
}

}  // namespace detail

// ---- games ----

inline GameDef game_from_json(const json& j, const std::string& path = "game") {
  using namespace detail;
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  const std::string kind = j.contains("kind") ? get_as<std::string>(j["kind"], join(path, "kind")) : "normal";
  try {
    if (kind == "normal") {
      const auto n = get_as<std::size_t>(require(j, "players", path), join(path, "players"));
      const auto counts = get_as<std::vector<std::size_t>>(require(j, "strategies", path), join(path, "strategies"));
      if (counts.size() != n) throw ConfigError(join(path, "strategies"), "needs one entry per player");
      const json& p = require(j, "payoffs", path);
      if (!p.is_array() || p.size() != n) throw ConfigError(join(path, "payoffs"), "needs one tensor per player");
      std::vector<double> data;
      for (std::size_t i = 0; i < n; ++i)
        flatten_payoffs(p[i], 0, counts, data, join(path, "payoffs") + "[" + std::to_string(i) + "]");
      return GameDef(counts, std::move(data));
    }
    if (kind == "symmetric")
      return GameDef::symmetric(get_as<std::vector<std::vector<double>>>(require(j, "matrix", path), join(path, "matrix")));
    if (kind == "bimatrix")
      return GameDef::bimatrix(get_as<std::vector<std::vector<double>>>(require(j, "row", path), join(path, "row")),
                               get_as<std::vector<std::vector<double>>>(require(j, "column", path), join(path, "column")));
    if (kind == "congestion")
      return congestion_game(get_as<std::size_t>(require(j, "players", path), join(path, "players")),
                             get_as<std::vector<std::vector<double>>>(require(j, "facilities", path),
                                                                      join(path, "facilities")));
    if (kind == "minority")
      return minority_game(get_as<std::size_t>(require(j, "players", path), join(path, "players")),
                           j.contains("win") ? get_as<double>(j["win"], join(path, "win")) : 1.0,
                           j.contains("lose") ? get_as<double>(j["lose"], join(path, "lose")) : 0.0);
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(join(path, "kind"), "unknown game kind '" + kind + "'");
}

inline json payoffs_to_json(const GameDef& g, std::size_t i) {
  // Build the nested array for player i by walking the row-major tensor.
  const auto& counts = g.strategy_counts();
  std::function<json(std::size_t, std::size_t&)> build = [&](std::size_t depth, std::size_t& k) -> json {
    json a = json::array();
    for (std::size_t c = 0; c < counts[depth]; ++c)
      a.push_back(depth + 1 == counts.size() ? json(g.player_slice(i)[k++]) : build(depth + 1, k));
    return a;
  };
  std::size_t k = 0;
  return build(0, k);
}

inline json game_to_json(const GameDef& g) {
  json p = json::array();
  for (std::size_t i = 0; i < g.num_players(); ++i) p.push_back(payoffs_to_json(g, i));
  return {{"players", g.num_players()}, {"strategies", g.strategy_counts()}, {"payoffs", p}};
}

// ---- dynamics ----

inline NoiseModel noise_from_json(const json& j, const std::vector<std::size_t>& counts, const std::string& path = "noise") {
  using namespace detail;
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  const std::string kind = j.contains("kind") ? get_as<std::string>(j["kind"], join(path, "kind")) : "constant";
  NoiseKind nk;
  if (kind == "constant")
    nk = NoiseKind::Constant;
  else if (kind == "own_pure_vanishing")
    nk = NoiseKind::OwnPureVanishing;
  else
    throw ConfigError(join(path, "kind"), "unknown noise kind '" + kind + "'");
  const json& c = require(j, "coefficients", path);
  std::vector<std::vector<double>> coeffs;
  if (c.is_number()) {
    for (std::size_t s : counts) coeffs.emplace_back(s, c.get<double>());
  } else {
    coeffs = get_as<std::vector<std::vector<double>>>(c, join(path, "coefficients"));
  }
  try {
    NoiseModel m(nk, std::move(coeffs));
    m.check_shape(counts);
    return m;
  } catch (const InvalidArgument& e) {
    throw ConfigError(join(path, "coefficients"), e.what());
  }
}

inline json noise_to_json(const NoiseModel& m) {
  return {{"kind", m.kind() == NoiseKind::Constant ? "constant" : "own_pure_vanishing"},
          {"coefficients", m.coefficients()}};
}

inline DynamicsSpec spec_from_json(const json& j, const GameDef& g, const std::string& path = "dynamics") {
  using namespace detail;
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  DynamicsSpec s;
  try {
    s.variant = variant_from_string(get_as<std::string>(require(j, "variant", path), join(path, "variant")));
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ConfigError(join(path, "variant"), e.what());
  }
  if (j.contains("rates")) s.rates = get_as<std::vector<double>>(j["rates"], join(path, "rates"));
  if (j.contains("noise"))
    s.noise = noise_from_json(j["noise"], g.strategy_counts(), join(path, "noise"));
  else
    s.noise = NoiseModel::zero(g.strategy_counts());
  try {
    s.validate(g);
  } catch (const InvalidArgument& e) {
    throw ConfigError(path, e.what());
  }
  return s;
}

inline json spec_to_json(const DynamicsSpec& s) {
  json j = {{"variant", std::string(to_string(s.variant))}, {"noise", noise_to_json(s.noise)}};
  if (!s.rates.empty()) j["rates"] = s.rates;
  return j;
}

inline SimConfig sim_from_json(const json& j, const std::string& path = "sim") {
  using namespace detail;
  SimConfig c;
  if (j.is_null()) return c;
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  if (j.contains("horizon")) c.horizon = get_as<double>(j["horizon"], join(path, "horizon"));
  if (j.contains("dt")) c.dt = get_as<double>(j["dt"], join(path, "dt"));
  if (j.contains("record_stride")) c.record_stride = get_as<std::size_t>(j["record_stride"], join(path, "record_stride"));
  if (j.contains("integrator")) {
    try {
      c.integrator = integrator_from_string(get_as<std::string>(j["integrator"], join(path, "integrator")));
    } catch (const ConfigError&) {
      throw;
    } catch (const InvalidArgument& e) {
      throw ConfigError(join(path, "integrator"), e.what());
    }
  }
  try {
    c.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(path, e.what());
  }
  return c;
}

inline json sim_to_json(const SimConfig& c) {
  return {{"horizon", c.horizon},
          {"dt", c.dt},
          {"integrator", std::string(to_string(c.integrator))},
          {"record_stride", c.record_stride}};
}

inline MixedProfile profile_from_json(const json& j, const GameDef& g, const std::string& path) {
  auto v = detail::get_as<std::vector<std::vector<double>>>(j, path);
  try {
    MixedProfile p(v);
    g.check_profile(p);
    return p;
  } catch (const InvalidArgument& e) {
    throw ConfigError(path, e.what());
  }
}

inline PureProfile pure_from_json(const json& j, const GameDef& g, const std::string& path) {
  auto q = detail::get_as<PureProfile>(j, path);
  if (q.size() != g.num_players()) throw ConfigError(path, "needs one strategy per player");
  for (std::size_t i = 0; i < q.size(); ++i)
    if (q[i] >= g.strategy_count(i)) throw ConfigError(path, "strategy index out of range");
  return q;
}

// ---- outputs ----

/// Shortest decimal form that reads back to the same double.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

/// Non-finite values become strings so the document stays valid JSON.
inline json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

inline std::string trajectory_csv(const Trajectory& t) {
  std::ostringstream out;
  out << "t,player,strategy,prob\n";
  for (std::size_t k = 0; k < t.states.size(); ++k) {
    const auto& x = t.states[k];
    for (std::size_t i = 0; i < x.num_players(); ++i)
      for (std::size_t a = 0; a < x.size(i); ++a)
        out << format_double(t.times[k]) << ',' << i << ',' << a << ',' << format_double(x.at(i, a)) << '\n';
  }
  return out.str();
}

inline std::string series_csv(const TimeSeries& s, const std::string& value_name = "kl") {
  std::ostringstream out;
  out << "t," << value_name << '\n';
  for (std::size_t k = 0; k < s.t.size(); ++k) out << format_double(s.t[k]) << ',' << format_double(s.v[k]) << '\n';
  return out.str();
}

inline json ensemble_to_json(const EnsembleStats& e) {
  json stats = json::object();
  for (const auto& [name, s] : e.stats)
    stats[name] = {{"mean", number(s.mean)}, {"stderr", number(s.stderr_)}, {"count", s.count}};
  json terminal = json::array();
  for (const auto& x : e.terminal_states) terminal.push_back(x.to_nested());
  return {{"runs", e.runs}, {"seed", e.master_seed}, {"stats", stats}, {"run_seeds", e.seeds},
          {"terminal_states", terminal}};
}

inline json elimination_to_json(const EliminationTrace& t) {
  json rounds = json::array();
  for (const auto& r : t.rounds) rounds.push_back({{"removed", r.removed}, {"survivors", r.survivors}});
  return {{"rounds", rounds}, {"admissible", t.admissible}, {"dominance_solvable", t.dominance_solvable()}};
}

inline json bound_to_json(const BoundValue& b) {
  return {{"value", number(b.value)}, {"valid", b.valid}, {"threshold_time", number(b.threshold_time)}};
}

inline json series_to_json(const TimeSeries& s) {
  json v = json::array();
  for (double x : s.v) v.push_back(number(x));
  return {{"t", s.t}, {"value", v}};
}

inline json extinction_to_json(const ExtinctionReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    json fp = json::array();
    for (const auto& f : e.first_passage) fp.push_back(f ? json(*f) : json(nullptr));
    json slopes = json::array();
    for (double s : e.slopes) slopes.push_back(number(s));
    json entry = {{"player", e.player},
                  {"strategy", e.strategy},
                  {"theoretical_guarantee", e.guaranteed},
                  {"threshold", e.threshold},
                  {"first_passage", fp},
                  {"terminal_mass", e.terminal_mass},
                  {"kl_slopes", slopes},
                  {"kl_series_run0", series_to_json(e.kl_first_run)},
                  {"empirical_probability", e.empirical},
                  {"empirical_stderr", e.empirical_stderr}};
    if (e.guaranteed) {
      entry["dominator"] = e.dominator;
      entry["v"] = number(e.v);
      entry["h"] = number(e.h);
      entry["bound"] = bound_to_json(e.bound);
      entry["consistent_with_bound"] = e.consistent;
    } else {
      entry["note"] = "no theoretical guarantee: no dominator in the full game";
    }
    entries.push_back(entry);
  }
  return {{"M", r.M}, {"runs", r.runs}, {"horizon", r.horizon}, {"entries", entries}};
}

inline json stability_to_json(const StabilityEstimate& s) {
  return {{"equilibrium", s.equilibrium}, {"delta", s.delta},        {"stay_radius", s.stay_radius},
          {"tol", s.tol},                 {"horizon", s.horizon},    {"runs", s.runs},
          {"stayed", s.stayed},           {"successes", s.successes}, {"estimate", s.estimate},
          {"wilson95", {s.interval.low, s.interval.high}},           {"seed", s.master_seed}};
}

inline json probe_to_json(const GeneratorProbe& p) {
  return {{"x", p.x.to_nested()},     {"function", p.function},      {"variant", std::string(to_string(p.variant))},
          {"analytic", number(p.analytic)}, {"empirical", number(p.empirical)}, {"stderr", number(p.stderr_)},
          {"h", p.h},                 {"n", p.n},                    {"seed", p.seed}};
}

inline json lyapunov_to_json(const LyapunovReport& r) {
  json viol = json::array();
  for (const auto& x : r.violations) viol.push_back(x.to_nested());
  return {{"family", std::string(to_string(r.family))}, {"equilibrium", r.equilibrium}, {"delta", r.delta},
          {"samples", r.samples}, {"k", number(r.k)}, {"certified", r.certified()}, {"violations", viol}};
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string short_hash(const json& resolved) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(resolved.dump())));
  return std::string(buf, 12);
}

}  // namespace rlab::io
