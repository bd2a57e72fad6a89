#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "replicator_lab/io.hpp"

using namespace rlab;
using json = nlohmann::json;
namespace fs = std::filesystem;

TEST(GameJson, ExplicitTensorRoundTrip) {
  std::mt19937_64 rng(127);
  const auto g = testutil::random_game(rng, {2, 3, 2});
  const auto back = io::game_from_json(io::game_to_json(g));
  EXPECT_EQ(back.strategy_counts(), g.strategy_counts());
  EXPECT_EQ(back.payoff_data(), g.payoff_data());
}

TEST(GameJson, NestedIndexingMatchesPayoff) {
  const auto g = io::game_from_json(json::parse(R"({"players":2,"strategies":[2,2],
      "payoffs":[[[3,0],[5,1]],[[3,5],[0,1]]]})"));
  EXPECT_EQ(g.payoff_data(), testutil::pd().payoff_data());
}

TEST(GameJson, Constructors) {
  const auto m = io::game_from_json(json::parse(R"({"kind":"minority","players":3})"));
  EXPECT_EQ(m.payoff_data(), minority_game(3, 1, 0).payoff_data());
  const auto c = io::game_from_json(json::parse(R"({"kind":"congestion","players":2,"facilities":[[1.5,0.5],[1,0]]})"));
  EXPECT_TRUE(c.congestion().has_value());
  const auto s = io::game_from_json(json::parse(R"({"kind":"symmetric","matrix":[[3,0],[5,1]]})"));
  EXPECT_EQ(s.payoff_data(), testutil::pd().payoff_data());
}

TEST(GameJson, ErrorsNameTheField) {
  try {
    io::game_from_json(json::parse(R"({"players":2,"strategies":[2,2],"payoffs":[[[3,0],[5]],[[3,5],[0,1]]]})"));
    FAIL();
  } catch (const io::ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("game.payoffs"), std::string::npos) << e.what();
  }
  EXPECT_THROW(io::game_from_json(json::parse(R"({"kind":"minority","players":4})")), std::exception);
  EXPECT_THROW(io::game_from_json(json::parse(R"({"kind":"bogus"})")), io::ConfigError);
}

TEST(SimJson, RoundTripAndDefaults) {
  SimConfig c;
  c.horizon = 12.5;
  c.dt = 0.003;
  c.integrator = Integrator::SimplexSpace;
  c.record_stride = 7;
  const auto back = io::sim_from_json(io::sim_to_json(c));
  EXPECT_EQ(back.hash(), c.hash());
  EXPECT_THROW(io::sim_from_json(json::parse(R"({"integrator":"leapfrog"})")), io::ConfigError);
}

TEST(FormatDouble, ShortestRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.0, -2.5}) EXPECT_EQ(std::stod(io::format_double(v)), v);
  EXPECT_EQ(io::format_double(0.5), "0.5");
}

TEST(TrajectoryCsv, HeaderAndRows) {
  Trajectory tr;
  tr.times = {0.0};
  tr.states = {testutil::profile({{0.5, 0.5}, {1, 0}})};
  const auto csv = io::trajectory_csv(tr);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,player,strategy,prob");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

namespace {

struct CliResult {
  int status = -1;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(RLAB_CLI_PATH) + " " + args + " 2>/dev/null";
  CliResult r;
  FILE* p = ::popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int st = ::pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string cfg(const std::string& name) { return std::string(RLAB_CONFIG_DIR) + "/" + name; }

fs::path fresh_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("rlab_cli_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, EquilibriaOfPrisonersDilemma) {
  const auto d = fresh_dir("eq");
  const auto r = run_cli("run --kind equilibria --game " + cfg("pd.json") + " --output-dir " + d.string());
  ASSERT_EQ(r.status, 0) << r.out;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j.at("strict_equilibria"), json::parse("[[1,1]]"));
  fs::remove_all(d);
}

TEST(Cli, EliminationOfPrisonersDilemma) {
  const auto d = fresh_dir("elim");
  const auto r = run_cli("eliminate --game " + cfg("pd.json") + " --output-dir " + d.string());
  ASSERT_EQ(r.status, 0) << r.out;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j.at("rounds"), 1);
  EXPECT_EQ(j.at("admissible"), json::parse("[[1],[1]]"));
  ASSERT_EQ(j.at("outputs").size(), 1u);
  const auto trace = json::parse(slurp(j.at("outputs")[0].get<std::string>()));
  ASSERT_EQ(trace.at("rounds").size(), 1u);
  EXPECT_EQ(trace.at("rounds")[0].at("removed"), json::parse("[[0],[0]]"));
  fs::remove_all(d);
}

TEST(Cli, MalformedJsonExitsTwo) {
  const auto d = fresh_dir("bad");
  std::ofstream(d / "bad.json") << "{\"players\": 2,";
  EXPECT_EQ(run_cli("equilibria --game " + (d / "bad.json").string()).status, 2);
  EXPECT_EQ(run_cli("run --kind nonsense --game " + cfg("pd.json")).status, 2);
  fs::remove_all(d);
}

TEST(Cli, ValidateReportsDiagnostics) {
  const auto ok = run_cli("validate --config " + cfg("pd_stability.json"));
  EXPECT_EQ(ok.status, 0);
  EXPECT_EQ(json::parse(ok.out).at("diagnostics").size(), 0u);

  const auto d = fresh_dir("val");
  std::ofstream(d / "noseed.json") << R"({"kind":"ensemble","game":")" << cfg("pd.json")
                                   << R"(","dynamics":{"variant":"SRD","noise":{"kind":"constant","coefficients":1}}})";
  const auto r = run_cli("validate --config " + (d / "noseed.json").string());
  EXPECT_EQ(r.status, 2);
  EXPECT_EQ(json::parse(r.out).at("diagnostics").size(), 1u);

  std::ofstream(d / "even.json") << R"({"kind":"equilibria","game":{"kind":"minority","players":4}})";
  const auto e = run_cli("validate --config " + (d / "even.json").string());
  EXPECT_EQ(e.status, 2);
  EXPECT_EQ(json::parse(e.out).at("diagnostics").size(), 1u);
  fs::remove_all(d);
}

TEST(Cli, SameConfigSameBytes) {
  const auto a = fresh_dir("det_a"), b = fresh_dir("det_b");
  const std::string base = "ensemble --config " + cfg("pd_simulate.json") + " --runs 8 --horizon 5 --seed 3";
  ASSERT_EQ(run_cli(base + " --output-dir " + a.string()).status, 0);
  ASSERT_EQ(run_cli(base + " --output-dir " + b.string()).status, 0);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    ++files;
    EXPECT_EQ(slurp(e.path()), slurp(b / e.path().filename())) << e.path();
  }
  EXPECT_GT(files, 0u);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Cli, BoundMatchesLibrary) {
  const auto d = fresh_dir("bound");
  const auto r = run_cli("bound --M 2 --param h=0 --param v=1 --eta 1 --param S=2 --param t=4 --output-dir " + d.string());
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_DOUBLE_EQ(json::parse(r.out).at("value").get<double>(), erfc_bound(2, 0, 1, 1, 2, 4).value);
  fs::remove_all(d);
}
