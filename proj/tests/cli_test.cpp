#include "serpent/cli/commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "serpent/cli/run_config.hpp"
#include "serpent/errors.hpp"

namespace serpent::cli {
namespace {

namespace fs = std::filesystem;

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("serpent_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int call(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return run(args, out_, err_);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST(ParsePoint, Accepts) {
  EXPECT_EQ(parse_point("1.5,-2"), Point(1.5, -2));
  EXPECT_THROW(parse_point("1"), ValidationError);
  EXPECT_THROW(parse_point("a,b"), ValidationError);
  EXPECT_THROW(parse_point("1,2,3"), ValidationError);
}

TEST(EffectiveThreads, CappedByEnvironment) {
  ::unsetenv("SERPENT_SIM_THREADS");
  EXPECT_EQ(effective_threads(3), 3);
  ::setenv("SERPENT_SIM_THREADS", "2", 1);
  EXPECT_EQ(effective_threads(3), 2);
  EXPECT_EQ(effective_threads(1), 1);
  EXPECT_LE(effective_threads(0), 2);
  ::setenv("SERPENT_SIM_THREADS", "x", 1);
  EXPECT_THROW(effective_threads(1), ValidationError);
  ::unsetenv("SERPENT_SIM_THREADS");
}

TEST(RunConfig, ScalesDefaultsToRobotThenOverrides) {
  const RunConfig c = parse_run_config(
      R"({"environment": "env.json", "robot": {"link_length": 3}, "planner": {"max_expansions": 7}})", "/base");
  EXPECT_EQ(c.environment, "/base/env.json");
  EXPECT_EQ(c.controller.los_radius, 6.0);
  EXPECT_NEAR(c.planner.speed_threshold, 0.3, 1e-15);
  EXPECT_EQ(c.planner.max_expansions, 7);
  EXPECT_THROW(parse_run_config(R"({"environment": "e.json", "robto": {}})"), ParseError);
  EXPECT_EQ(parse_run_config(save_run_config(c)).planner.max_expansions, 7);
}

TEST_F(CliTest, HelpAndUnknownCommand) {
  EXPECT_EQ(call({"--help"}), kSuccess);
  EXPECT_EQ(call({"fly"}), kError);
  EXPECT_EQ(call({}), kError);
}

TEST_F(CliTest, GenIsDeterministicAndValidates) {
  EXPECT_EQ(call({"gen", "--grid", "3x4", "--spacing", "8", "--jitter", "0.2", "--seed", "5", "--out", path("a.json")}),
            kSuccess);
  EXPECT_EQ(call({"gen", "--grid", "3x4", "--spacing", "8", "--jitter", "0.2", "--seed", "5", "--out", path("b.json")}),
            kSuccess);
  EXPECT_EQ(read(path("a.json")), read(path("b.json")));
  EXPECT_EQ(load_environment_file(path("a.json")).pegs.size(), 12u);
  EXPECT_EQ(call({"gen", "--grid", "3x4", "--spacing", "0", "--out", path("c.json")}), kError);
  EXPECT_FALSE(fs::exists(path("c.json")));
  EXPECT_EQ(call({"gen", "--grid", "3x4", "--preset", "y", "--out", path("c.json")}), kError);
  EXPECT_EQ(call({"gen", "--preset", "fig16", "--d", "3", "--out", path("c.json")}), kError);
}

TEST_F(CliTest, GvgVerifies) {
  ASSERT_EQ(call({"gen", "--grid", "4x4", "--out", path("env.json")}), kSuccess);
  EXPECT_EQ(call({"gvg", path("env.json"), "--out", path("rm.json"), "--verify", "--svg", path("rm.svg")}), kSuccess);
  EXPECT_NE(out_.str().find("ok"), std::string::npos) << out_.str();
  EXPECT_TRUE(fs::exists(path("rm.svg")));
  EXPECT_EQ(call({"gvg", path("missing.json"), "--out", path("rm2.json")}), kError);
}

TEST_F(CliTest, SimWritesTrajectory) {
  ASSERT_EQ(call({"gen", "--grid", "5x8", "--spacing", "8", "--out", path("env.json")}), kSuccess);
  ASSERT_EQ(call({"sim", "--env", path("env.json"), "--start", "20,16", "--path", "20,16", "--path", "60,16", "--t-end",
                  "3", "--out", path("t.csv")}),
            kSuccess)
      << err_.str();
  const Trajectory t = parse_trajectory_csv(read(path("t.csv")));
  EXPECT_EQ(t.size(), 60u);
  EXPECT_NE(out_.str().find("steps: 60"), std::string::npos);
  ASSERT_EQ(call({"sim", "--env", path("env.json"), "--start", "20,16", "--t-end", "0", "--out", path("z.csv")}), kSuccess);
  const std::string header_only = read(path("z.csv"));
  EXPECT_EQ(std::count(header_only.begin(), header_only.end(), '\n'), 1);
}

TEST_F(CliTest, PlanPresetIsReproducible) {
  ASSERT_EQ(call({"plan", "--preset", "fig16", "--out", path("a")}), kSuccess) << err_.str();
  ASSERT_EQ(call({"plan", "--preset", "fig16", "--out", path("b")}), kSuccess) << err_.str();
  for (const char* f : {"plan.json", "replay.csv", "roadmap.json", "plot.svg"}) {
    EXPECT_TRUE(fs::exists(dir_ / "a" / f)) << f;
    EXPECT_EQ(read(dir_ / "a" / f), read(dir_ / "b" / f)) << f;
  }
  EXPECT_EQ(parse_plan_positions(read(dir_ / "a" / "plan.json")).size(), 11u);
}

TEST_F(CliTest, PlannerFailureExitCode) {
  EXPECT_EQ(call({"plan", "--preset", "corridor", "--threshold", "100", "--out", path("p")}), kPlannerFailure);
  EXPECT_TRUE(fs::exists(dir_ / "p" / "plan.json"));
  EXPECT_FALSE(fs::exists(dir_ / "p" / "replay.csv"));
  EXPECT_EQ(call({"plan", "--preset", "corridor", "--env", path("x.json"), "--out", path("q")}), kError);
}

TEST_F(CliTest, PlotListsEveryMissingInput) {
  EXPECT_EQ(call({"plot", "--env", path("nope.json"), "--roadmap", path("nope2.json"), "--layers", "pegs,roadmap",
                  "--out", path("x.svg")}),
            kError);
  EXPECT_NE(err_.str().find("nope.json"), std::string::npos);
  EXPECT_NE(err_.str().find("nope2.json"), std::string::npos);
}

}  // namespace
}  // namespace serpent::cli
