// replicator-lab: batch front end over the replicator_lab library.
//
//   replicator-lab <kind> [--config file] [--flag value]...
//   replicator-lab run --kind <kind> [...]
//   replicator-lab validate [--kind <kind>] [...]
//
// Exit status: 0 success, 2 configuration error, 3 runtime error.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "replicator_lab/experiments.hpp"
#include "replicator_lab/io.hpp"
#include "replicator_lab/replicator_lab.hpp"

namespace fs = std::filesystem;
using rlab::io::ConfigError;
using json = nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

const std::vector<std::string> kKinds = {"simulate", "ensemble",  "eliminate", "equilibria",     "extinction",
                                         "stability", "bound",    "lyapunov",  "generator-probe"};

struct Flags {
  std::string kind;
  std::string config;
  std::string game;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> runs;
  std::optional<double> horizon, dt, eta, M, delta, stay_radius, tol;
  std::optional<std::size_t> stride;
  std::optional<std::string> integrator, variant, output_dir;
  std::vector<std::string> params;  // key=json
};

json read_json_file(const fs::path& p, const std::string& field) {
  std::ifstream in(p);
  if (!in) throw ConfigError(field, "cannot open file '" + p.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(field, std::string("malformed JSON in '") + p.string() + "': " + e.what());
  }
}

/// Config file merged with flags (flags win); game file references resolved inline.
json resolve(const Flags& f) {
  json cfg = json::object();
  fs::path base = fs::current_path();
  if (!f.config.empty()) {
    cfg = read_json_file(f.config, "config");
    if (!cfg.is_object()) throw ConfigError("config", "top level must be an object");
    base = fs::path(f.config).parent_path();
  }
  if (!f.kind.empty()) cfg["kind"] = f.kind;
  if (!f.game.empty()) cfg["game"] = f.game;
  if (cfg.contains("game") && cfg["game"].is_string()) {
    fs::path gp = cfg["game"].get<std::string>();
    if (gp.is_relative() && !f.game.empty()) gp = fs::current_path() / gp;
    else if (gp.is_relative()) gp = base / gp;
    cfg["game"] = read_json_file(gp, "game");
  }
  if (f.seed) cfg["seed"] = *f.seed;
  if (f.output_dir) cfg["output_dir"] = *f.output_dir;
  auto& sim = cfg["sim"];
  if (sim.is_null()) sim = json::object();
  if (f.horizon) sim["horizon"] = *f.horizon;
  if (f.dt) sim["dt"] = *f.dt;
  if (f.stride) sim["record_stride"] = *f.stride;
  if (f.integrator) sim["integrator"] = *f.integrator;
  const bool bound_kind = cfg.value("kind", json()) == "bound";
  if (f.variant || (f.eta && !bound_kind)) {
    auto& d = cfg["dynamics"];
    if (d.is_null()) d = json::object();
    if (f.variant) d["variant"] = *f.variant;
    if (f.eta && !bound_kind) d["noise"] = {{"kind", "constant"}, {"coefficients", *f.eta}};
  }
  auto& p = cfg["params"];
  if (p.is_null()) p = json::object();
  if (f.runs) p["runs"] = *f.runs;
  if (f.eta && bound_kind) p["eta"] = *f.eta;
  if (f.M) p["M"] = *f.M;
  if (f.delta) p["delta"] = *f.delta;
  if (f.stay_radius) p["stay_radius"] = *f.stay_radius;
  if (f.tol) p["tol"] = *f.tol;
  for (const auto& kv : f.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("param", "expected key=value, got '" + kv + "'");
    const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
    try {
      p[key] = json::parse(val);
    } catch (const json::parse_error&) {
      p[key] = val;
    }
  }
  return cfg;
}

bool is_stochastic_kind(const std::string& kind, const json& cfg) {
  if (kind == "ensemble" || kind == "extinction" || kind == "stability" || kind == "generator-probe") return true;
  if (kind == "simulate" && cfg.contains("dynamics") && cfg["dynamics"].is_object() &&
      cfg["dynamics"].contains("variant") && cfg["dynamics"]["variant"].is_string()) {
    try {
      return rlab::is_stochastic(rlab::variant_from_string(cfg["dynamics"]["variant"].get<std::string>()));
    } catch (const rlab::InvalidArgument&) {
      return false;
    }
  }
  return false;
}

bool needs_dynamics(const std::string& kind) {
  return kind == "simulate" || kind == "ensemble" || kind == "extinction" || kind == "stability" ||
         kind == "lyapunov" || kind == "generator-probe";
}

bool needs_game(const std::string& kind) { return kind != "bound"; }

// ---- parameter access ----

struct Params {
  const json& p;
  template <class T>
  T get(const std::string& key, T fallback) const {
    if (!p.contains(key)) return fallback;
    return rlab::io::detail::get_as<T>(p[key], "params." + key);
  }
  template <class T>
  T required(const std::string& key) const {
    if (!p.contains(key)) throw ConfigError("params." + key, "missing required field");
    return rlab::io::detail::get_as<T>(p[key], "params." + key);
  }
  bool has(const std::string& key) const { return p.contains(key); }
  const json& raw(const std::string& key) const { return p.at(key); }
};

/// Everything an experiment needs, parsed and validated.
struct Setup {
  std::string kind;
  json resolved;
  std::optional<rlab::GameDef> game;
  std::optional<rlab::DynamicsSpec> spec;
  rlab::SimConfig sim;
  std::uint64_t seed = 0;
  fs::path output_dir = ".";
};

std::string kind_of(const json& cfg) {
  if (!cfg.contains("kind")) throw ConfigError("kind", "missing required field");
  const auto kind = rlab::io::detail::get_as<std::string>(cfg["kind"], "kind");
  if (std::find(kKinds.begin(), kKinds.end(), kind) == kKinds.end())
    throw ConfigError("kind", "unknown experiment kind '" + kind + "'");
  return kind;
}

/// Collects diagnostics from every section independently.
std::vector<ConfigError> diagnose(const json& cfg, Setup* out) {
  std::vector<ConfigError> diags;
  auto attempt = [&](auto&& fn) {
    try {
      fn();
    } catch (const ConfigError& e) {
      diags.push_back(e);
    } catch (const rlab::InvalidArgument& e) {
      diags.emplace_back("config", e.what());
    }
  };
  Setup s;
  s.resolved = cfg;
  attempt([&] { s.kind = kind_of(cfg); });
  if (s.kind.empty()) {
    if (out) *out = s;
    return diags;
  }
  if (needs_game(s.kind))
    attempt([&] {
      if (!cfg.contains("game")) throw ConfigError("game", "missing required field");
      s.game = rlab::io::game_from_json(cfg["game"]);
    });
  if (needs_dynamics(s.kind) && s.game)
    attempt([&] {
      if (!cfg.contains("dynamics")) throw ConfigError("dynamics", "missing required field");
      s.spec = rlab::io::spec_from_json(cfg["dynamics"], *s.game);
    });
  attempt([&] { s.sim = rlab::io::sim_from_json(cfg.value("sim", json::object())); });
  attempt([&] {
    if (cfg.contains("seed"))
      s.seed = rlab::io::detail::get_as<std::uint64_t>(cfg["seed"], "seed");
    else if (is_stochastic_kind(s.kind, cfg))
      throw ConfigError("seed", "a master seed is required for stochastic experiments");
  });
  attempt([&] {
    if (cfg.contains("output_dir")) s.output_dir = rlab::io::detail::get_as<std::string>(cfg["output_dir"], "output_dir");
  });
  if (!cfg.contains("params") || !cfg["params"].is_object())
    diags.emplace_back("params", "expected an object");
  else {
    const Params P{cfg["params"]};
    attempt([&] {
      if (s.kind == "bound") {
        for (const char* k : {"M", "h", "v", "eta", "S", "t"}) P.required<double>(k);
      } else if ((s.kind == "stability" || s.kind == "lyapunov") && s.game) {
        if (P.has("equilibrium")) rlab::io::pure_from_json(P.raw("equilibrium"), *s.game, "params.equilibrium");
        else if (rlab::strict_equilibria(*s.game).empty())
          throw ConfigError("params.equilibrium", "missing, and the game has no strict equilibrium to default to");
      }
      if (s.kind == "lyapunov" && P.has("family"))
        rlab::lyapunov_family_from_string(P.required<std::string>("family"));
    });
  }
  if (cfg.contains("initial") && s.game)
    attempt([&] { rlab::io::profile_from_json(cfg["initial"], *s.game, "initial"); });
  if (out) *out = s;
  return diags;
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
  out << content;
}

rlab::MixedProfile initial_profile(const Setup& s) {
  if (s.resolved.contains("initial")) return rlab::io::profile_from_json(s.resolved["initial"], *s.game, "initial");
  return rlab::MixedProfile::uniform(s.game->strategy_counts());
}

rlab::PureProfile equilibrium_param(const Setup& s, const Params& P) {
  if (P.has("equilibrium")) return rlab::io::pure_from_json(P.raw("equilibrium"), *s.game, "params.equilibrium");
  return rlab::strict_equilibria(*s.game).at(0);
}

rlab::ScalarField probe_function(const Setup& s, const Params& P) {
  const auto& g = *s.game;
  if (!P.has("function")) return rlab::coordinate_field(g.strategy_counts(), 0, 0);
  const json& f = P.raw("function");
  const auto type = rlab::io::detail::get_as<std::string>(f.value("type", json("coordinate")), "params.function.type");
  if (type == "coordinate") {
    const auto i = f.value("player", std::size_t{0}), a = f.value("strategy", std::size_t{0});
    if (i >= g.num_players() || a >= g.strategy_count(i))
      throw ConfigError("params.function", "coordinate out of range");
    return rlab::coordinate_field(g.strategy_counts(), i, a);
  }
  if (type == "inverse_y") {
    const auto anchor = f.contains("anchor") ? rlab::io::pure_from_json(f["anchor"], g, "params.function.anchor")
                                             : rlab::PureProfile(g.num_players(), 0);
    const auto ex = f.value("exponents", std::vector<double>(g.num_players(), 1.0));
    return rlab::inverse_y_field(anchor, ex);
  }
  throw ConfigError("params.function.type", "unknown test function '" + type + "'");
}

json execute(const Setup& s) {
  const Params P{s.resolved["params"]};
  json resolved = s.resolved;
  resolved.erase("output_dir");
  const std::string stem = s.kind + "_" + rlab::io::short_hash(resolved);
  fs::create_directories(s.output_dir);
  json summary = {{"kind", s.kind}, {"status", "ok"}, {"hash", stem.substr(s.kind.size() + 1)}};
  std::vector<std::string> outputs;
  auto emit_json = [&](const json& j) {
    const auto p = s.output_dir / (stem + ".json");
    write_file(p, j.dump(2) + "\n");
    outputs.push_back(p.string());
  };
  auto emit_csv = [&](const std::string& c) {
    const auto p = s.output_dir / (stem + ".csv");
    write_file(p, c);
    outputs.push_back(p.string());
  };

  if (s.kind == "simulate") {
    rlab::SimConfig c = s.sim;
    c.seed = s.seed;
    const auto tr = rlab::simulate(*s.spec, *s.game, initial_profile(s), c);
    emit_csv(rlab::io::trajectory_csv(tr));
    summary["steps"] = tr.steps;
    summary["records"] = tr.states.size();
    summary["projection_events"] = tr.projection_events;
    summary["terminal"] = tr.terminal().to_nested();
  } else if (s.kind == "ensemble") {
    const auto es = rlab::ensemble_experiment(*s.spec, *s.game, initial_profile(s), s.sim,
                                              P.get<std::size_t>("runs", 100), s.seed);
    emit_json(rlab::io::ensemble_to_json(es));
    summary["runs"] = es.runs;
  } else if (s.kind == "eliminate") {
    const auto tr = rlab::iterated_elimination(*s.game);
    emit_json(rlab::io::elimination_to_json(tr));
    summary["rounds"] = tr.rounds.size();
    summary["admissible"] = tr.admissible;
  } else if (s.kind == "equilibria") {
    const auto eq = rlab::strict_equilibria(*s.game);
    emit_json({{"strict_equilibria", eq}});
    summary["strict_equilibria"] = eq;
  } else if (s.kind == "extinction") {
    const auto rep = rlab::extinction_experiment(*s.spec, *s.game, initial_profile(s), s.sim,
                                                 P.get<std::size_t>("runs", 200), s.seed, P.get<double>("M", 3.0));
    emit_json(rlab::io::extinction_to_json(rep));
    emit_csv(rlab::io::series_csv(rep.entries.front().kl_first_run));
    json e = json::array();
    for (const auto& x : rep.entries)
      e.push_back({{"player", x.player}, {"strategy", x.strategy}, {"empirical", x.empirical},
                   {"bound", x.guaranteed ? rlab::io::number(x.bound.value) : json(nullptr)}});
    summary["entries"] = e;
  } else if (s.kind == "stability") {
    rlab::StabilityOptions o;
    o.delta = P.get<double>("delta", 0.05);
    o.stay_radius = P.get<double>("stay_radius", 0.3);
    o.tol = P.get<double>("tol", 1e-2);
    o.runs = P.get<std::size_t>("runs", 200);
    o.master_seed = s.seed;
    o.sim = s.sim;
    const auto est = rlab::stability_probe(*s.spec, *s.game, equilibrium_param(s, P), o);
    emit_json(rlab::io::stability_to_json(est));
    summary["estimate"] = est.estimate;
    summary["wilson95"] = {est.interval.low, est.interval.high};
  } else if (s.kind == "bound") {
    const auto b = rlab::rate_adjusted_erfc_bound(P.required<double>("M"), P.required<double>("h"),
                                                  P.required<double>("v"), P.required<double>("eta"),
                                                  static_cast<std::size_t>(P.required<double>("S")),
                                                  P.get<double>("lambda", 1.0), P.required<double>("t"));
    emit_json(rlab::io::bound_to_json(b));
    summary["value"] = rlab::io::number(b.value);
    summary["valid"] = b.valid;
  } else if (s.kind == "lyapunov") {
    const auto fam = rlab::lyapunov_family_from_string(P.get<std::string>("family", "inverse_y"));
    const auto rep = rlab::lyapunov_certificate(*s.spec, *s.game, equilibrium_param(s, P), fam,
                                                P.get<std::vector<double>>("exponents", {}),
                                                P.get<std::size_t>("samples", 1000), P.get<double>("delta", 0.05),
                                                s.seed);
    emit_json(rlab::io::lyapunov_to_json(rep));
    summary["k"] = rlab::io::number(rep.k);
    summary["certified"] = rep.certified();
  } else if (s.kind == "generator-probe") {
    const auto x = P.has("point") ? rlab::io::profile_from_json(P.raw("point"), *s.game, "params.point")
                                  : rlab::MixedProfile::uniform(s.game->strategy_counts());
    const auto pr = rlab::generator_consistency_probe(*s.spec, *s.game, probe_function(s, P), x,
                                                      P.get<double>("h", 1e-3), P.get<std::size_t>("runs", 10000),
                                                      s.seed);
    emit_json(rlab::io::probe_to_json(pr));
    summary["analytic"] = rlab::io::number(pr.analytic);
    summary["empirical"] = rlab::io::number(pr.empirical);
    summary["stderr"] = rlab::io::number(pr.stderr_);
  }
  summary["outputs"] = outputs;
  return summary;
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "Experiment config (JSON)");
  sub->add_option("--game", f.game, "Game file (JSON); overrides the config's game");
  sub->add_option("--seed", f.seed, "Master seed");
  sub->add_option("--runs", f.runs, "Number of runs");
  sub->add_option("--horizon", f.horizon, "Horizon T");
  sub->add_option("--dt", f.dt, "Time step");
  sub->add_option("--stride", f.stride, "Record every n-th step");
  sub->add_option("--integrator", f.integrator, "score_space | simplex_space | rk4 | discrete");
  sub->add_option("--variant", f.variant, "RD | LRD | SRD | SLRD | ASRD | SRD1 | ASRD1");
  sub->add_option("--eta", f.eta, "Constant noise coefficient for every strategy");
  sub->add_option("--M", f.M, "Extinction threshold exponent");
  sub->add_option("--delta", f.delta, "Start-ball radius");
  sub->add_option("--stay-radius", f.stay_radius, "Stay radius");
  sub->add_option("--tol", f.tol, "Terminal tolerance");
  sub->add_option("--output-dir", f.output_dir, "Directory for output files");
  sub->add_option("--param", f.params, "Extra parameter key=value (value parsed as JSON)");
}

json diag_json(const std::vector<ConfigError>& d) {
  json a = json::array();
  for (const auto& e : d) a.push_back({{"field", e.field()}, {"message", e.what()}});
  return a;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic replicator dynamics experiments"};
  app.require_subcommand(1);
  Flags flags;
  std::string mode;
  for (const auto& k : kKinds) {
    auto* sub = app.add_subcommand(k, "Run the " + k + " experiment");
    add_common(sub, flags);
    sub->callback([&, k] {
      mode = "run";
      flags.kind = k;
    });
  }
  auto* run = app.add_subcommand("run", "Run the experiment named by --kind or the config");
  add_common(run, flags);
  run->add_option("--kind", flags.kind, "Experiment kind");
  run->callback([&] { mode = "run"; });
  auto* validate = app.add_subcommand("validate", "Check a config without running it");
  add_common(validate, flags);
  validate->add_option("--kind", flags.kind, "Experiment kind");
  validate->callback([&] { mode = "validate"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  json cfg;
  try {
    cfg = resolve(flags);
  } catch (const ConfigError& e) {
    if (mode == "validate") {
      std::cout << json{{"valid", false}, {"diagnostics", diag_json({e})}}.dump() << "\n";
    } else {
      std::cerr << "config error: " << e.what() << "\n";
      std::cout << json{{"status", "config_error"}, {"field", e.field()}, {"message", e.what()}}.dump() << "\n";
    }
    return kExitConfig;
  }

  Setup setup;
  const auto diags = diagnose(cfg, &setup);
  if (mode == "validate") {
    std::cout << json{{"valid", diags.empty()}, {"diagnostics", diag_json(diags)}}.dump() << "\n";
    return diags.empty() ? 0 : kExitConfig;
  }
  if (!diags.empty()) {
    for (const auto& d : diags) std::cerr << "config error: " << d.what() << "\n";
    std::cout << json{{"status", "config_error"}, {"field", diags.front().field()}, {"message", diags.front().what()}}
                     .dump()
              << "\n";
    return kExitConfig;
  }
  try {
    std::cout << execute(setup).dump() << "\n";
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    std::cout << json{{"status", "config_error"}, {"field", e.field()}, {"message", e.what()}}.dump() << "\n";
    return kExitConfig;
  } catch (const rlab::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    std::cout << json{{"status", "config_error"}, {"message", e.what()}}.dump() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    std::cout << json{{"status", "runtime_error"}, {"message", e.what()}}.dump() << "\n";
    return kExitRuntime;
  }
  return 0;
}
