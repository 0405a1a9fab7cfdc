#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dendrite/cli.hpp"
#include "dendrite/errors.hpp"

using namespace dendrite;

namespace {

struct Run {
  int code;
  std::string out, err;
};

// run_cli resets the global level cap; put it back afterwards.
Run run(std::vector<std::string> args) {
  const int saved = max_level();
  args.insert(args.begin(), "dendrite");
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  set_max_level(saved);
  return {code, out.str(), err.str()};
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("dendrite_cli_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST(RunConfig, JsonRoundTripIsLossless) {
  RunConfig c;
  c.s0 = Rational(2, 5);
  c.weights = WeightVector::symmetric(Rational(1, 3), Rational(1, 6));
  c.max_level = 9;
  c.tolerance = "strict";
  c.output_dir = "reports/a";
  c.seed = 18446744073709551615ull;
  auto j = c.to_json();
  auto back = RunConfig::from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(back.s0, c.s0);
  EXPECT_EQ(back.weights.w0, c.weights.w0);
  EXPECT_EQ(back.weights.w2, c.weights.w2);
  EXPECT_EQ(back.max_level, 9);
  EXPECT_EQ(back.tolerance, "strict");
  EXPECT_EQ(back.output_dir, "reports/a");
  EXPECT_EQ(back.seed, c.seed);
  EXPECT_EQ(back.to_json(), j);
}

TEST(RunConfig, DefaultsAndValidation) {
  auto c = RunConfig::from_json(nlohmann::json::object());
  EXPECT_EQ(c.s0, Rational(1, 2));
  EXPECT_EQ(c.weights.str(), "1/4,1/4");
  EXPECT_EQ(c.max_level, 12);
  EXPECT_EQ(c.preset().max_depth, 12);
  EXPECT_DOUBLE_EQ(c.preset().relative_gap, 1e-4);
  EXPECT_THROW(RunConfig::from_json({{"s0", "3/2"}}), ValidationError);
  EXPECT_THROW(RunConfig::from_json({{"s0", 0.5}}), ValidationError);  // must be an exact string
  EXPECT_THROW(RunConfig::from_json({{"weights", "1/2,1/2"}}), ValidationError);
  EXPECT_THROW(RunConfig::from_json({{"tolerance", "sloppy"}}), ValidationError);
  EXPECT_THROW(RunConfig::from_json({{"max_level", -1}}), ValidationError);
  EXPECT_THROW(RunConfig::from_json({{"colour", "red"}}), ValidationError);
  EXPECT_THROW(RunConfig::from_json(nlohmann::json::array()), ValidationError);
}

TEST(RunConfig, EnvironmentOverridesMaxLevel) {
  ::setenv("DENDRITE_MAX_LEVEL", "7", 1);
  RunConfig c;
  c.apply_environment();
  EXPECT_EQ(c.max_level, 7);
  ::setenv("DENDRITE_MAX_LEVEL", "seven", 1);
  EXPECT_THROW(c.apply_environment(), ValidationError);
  ::unsetenv("DENDRITE_MAX_LEVEL");
  c.max_level = 5;
  c.apply_environment();
  EXPECT_EQ(c.max_level, 5);
}

TEST(ParseRange, Forms) {
  EXPECT_EQ(parse_range("2..5"), std::make_pair(2, 5));
  EXPECT_EQ(parse_range("3"), std::make_pair(3, 3));
  EXPECT_THROW(parse_range("5..2"), ValidationError);
  EXPECT_THROW(parse_range("2..x"), ValidationError);
  EXPECT_THROW(parse_range(""), ValidationError);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"nonsense"}).code, 2);
  EXPECT_EQ(run({"resistance", "--from", "-:1"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"resistance", "--from", "9:1", "--to", "-:1"}).code, 3);
  EXPECT_EQ(run({"--weights", "1/2,1/2", "measure"}).code, 3);
  EXPECT_EQ(run({"ball", "--n", "0"}).code, 3);
  EXPECT_EQ(run({"verify", "--suite", "99"}).code, 3);
  EXPECT_EQ(run({"graph", "--level", "13"}).code, 4);
  EXPECT_EQ(run({"--max-level", "3", "graph", "--level", "4"}).code, 4);
}

TEST(Cli, ResistanceIsExact) {
  auto r = run({"resistance", "--from", "-:2", "--to", "-:1", "--level", "3"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1/1\n");
  // q0 is the midpoint of the arc q2 q1 in resistance.
  r = run({"resistance", "--from", "2:1", "--to", "-:2", "--level", "3"});
  EXPECT_EQ(r.out, "1/2\n");
  r = run({"--s0", "1/3", "resistance", "--from", "-:3", "--to", "-:1", "--level", "2"});
  EXPECT_EQ(r.out, "1/1\n");
}

TEST(Cli, OptionsAfterSubcommandAndConfigEcho) {
  auto r = run({"doubling", "--n", "2", "--weights", "1/4,1/4", "--seed", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto line = first_line(r.out);
  ASSERT_EQ(line.rfind("# config ", 0), 0u);
  auto cfg = RunConfig::from_json(nlohmann::json::parse(line.substr(9)));
  EXPECT_EQ(cfg.seed, 3u);
  EXPECT_NE(r.out.find("n,x,r,L,lower,upper,bound\n"), std::string::npos);
}

TEST(Cli, ConfigFileThenFlags) {
  auto dir = scratch("config");
  {
    std::ofstream f(dir / "run.json");
    f << R"({"tolerance": "loose", "seed": 11, "output_dir": ")" << dir.string() << R"("})";
  }
  auto r = run({"--config", (dir / "run.json").string(), "--seed", "12", "--print-config", "measure"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto cfg = RunConfig::from_json(nlohmann::json::parse(first_line(r.out).substr(9)));
  EXPECT_EQ(cfg.tolerance, "loose");
  EXPECT_EQ(cfg.seed, 12u);
  EXPECT_EQ(run({"--config", (dir / "missing.json").string(), "measure"}).code, 3);
}

TEST(Cli, ReportsAreDeterministic) {
  auto dir = scratch("determinism");
  std::vector<std::string> args{"--output-dir", dir.string(), "weh",     "--n",   "2..4", "--rho",
                                "1/2,2",        "--out",      "a.csv",   "--summary", "a.json"};
  ASSERT_EQ(run(args).code, 0);
  args[8] = "b.csv";
  args[10] = "b.json";
  ASSERT_EQ(run(args).code, 0);
  auto slurp = [&](const char* name) {
    std::ifstream f(dir / name);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };
  EXPECT_FALSE(slurp("a.csv").empty());
  EXPECT_EQ(slurp("a.csv"), slurp("b.csv"));
  EXPECT_EQ(slurp("a.json"), slurp("b.json"));
  auto j = nlohmann::json::parse(slurp("a.json"));
  EXPECT_EQ(j.at("config").at("weights"), "1/4,1/4");
  EXPECT_EQ(j.at("scan").size(), 2u);
}

TEST(Cli, LatticeSamplingFollowsSeed) {
  auto a = run({"--seed", "5", "doubling", "--n", "2", "--points", "lattice", "--samples", "3"});
  auto b = run({"--seed", "5", "doubling", "--n", "2", "--points", "lattice", "--samples", "3"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, ExitRatioWritesCsvAndSummary) {
  auto dir = scratch("exit");
  auto r = run({"exit-ratio", "--n", "2..3", "--weights", "1/4,1/4", "--out", (dir / "exit.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j.contains("slope"));
  EXPECT_EQ(j.at("rows").size(), 2u);
  std::ifstream f(dir / "exit.csv");
  std::string l1, l2;
  std::getline(f, l1);
  std::getline(f, l2);
  EXPECT_EQ(l1.rfind("# config ", 0), 0u);
  EXPECT_EQ(l2.rfind("n,L,", 0), 0u);
}

TEST(Cli, VerifyRunsSelectedCriteria) {
  auto r = run({"verify", "--suite", "1,3"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.rfind("PASS 1 ", 0), 0u);
  EXPECT_NE(r.out.find("\nPASS 3 "), std::string::npos);
}

TEST(Cli, HarmonicsTables) {
  auto r = run({"harmonics", "--kind", "uup", "--level", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("# energy_closed 3/2"), std::string::npos);
  r = run({"harmonics", "--kind", "uminus", "--level", "2"});
  EXPECT_EQ(r.code, 3);  // needs --data
  r = run({"harmonics", "--kind", "uminus", "--level", "2", "--data", "1,0,0"});
  EXPECT_EQ(r.code, 0) << r.err;
  r = run({"harmonics", "--kind", "psi-x", "--n", "2", "--m", "1", "--k", "0"});
  EXPECT_EQ(r.code, 0) << r.err;
}
