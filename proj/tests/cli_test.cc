#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "coverage_miqp/cli.h"
#include "coverage_miqp/lp_format.h"
#include "coverage_miqp/planner.h"
#include "support/fixtures.h"

namespace coverage_miqp {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("coverage_miqp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    save_spec(fixtures::tiny_spec(4), path("tiny.json"));
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return cli::run(args, out_, err_);
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(CliTest, InitWritesDefaultSetup) {
  ASSERT_EQ(run({"init", "--out", path("s.json")}), 0);
  const auto s = load_spec(path("s.json"));
  EXPECT_EQ(s.kinematics.dt, 1.0);
  EXPECT_EQ(s.kinematics.mass, 3.35);
  EXPECT_EQ(s.kinematics.drag, 0.2);
  EXPECT_EQ(s.kinematics.force_max, 3.0);
  EXPECT_EQ(s.kinematics.speed_max, 2.0);
  EXPECT_EQ(s.apex_angle_deg, 30.0);
  EXPECT_EQ(s.range_m, 7.0);
  EXPECT_EQ(s.zooms, (std::vector<double>{1, 2}));
  EXPECT_EQ(s.angles_deg, (std::vector<double>{-85, -28, 28, 85}));
  EXPECT_EQ(s.ray_count, 5);
  EXPECT_EQ(s.region.kind, RegionSpec::Kind::Bell);
  EXPECT_EQ(s.region.a, 10.0);
  EXPECT_EQ(s.region.b, 40.0);
  EXPECT_EQ(s.region.c, 2.0);
  EXPECT_EQ(s.region.n, 11);
  EXPECT_EQ(s.grid_nx, 4);
  EXPECT_EQ(s.grid_ny, 4);
  EXPECT_EQ(s.kinematics.workspace.width(), 60.0);
  EXPECT_EQ(s.kinematics.workspace.height(), 20.0);
  EXPECT_EQ(s.visibility.n_s, 15);
}

TEST_F(CliTest, OverridesApplyAndUnknownKeysFail) {
  ASSERT_EQ(run({"init", "--out", path("s.json"), "--set", "horizon=6", "--set", "weights.w3=0.5"}), 0);
  const auto s = load_spec(path("s.json"));
  EXPECT_EQ(s.horizon, 6);
  EXPECT_EQ(s.weights.w3, 0.5);
  EXPECT_EQ(run({"init", "--out", path("t.json"), "--set", "horizons=6"}), 2);
  EXPECT_NE(err_.str().find("horizons"), std::string::npos);
  EXPECT_FALSE(fs::exists(path("t.json")));
  EXPECT_EQ(run({"init", "--out", path("t.json"), "--set", "horizon=0"}), 2);
}

TEST_F(CliTest, PlanThenCheckRoundTrip) {
  ASSERT_EQ(run({"plan", "--scenario", path("tiny.json"), "--out", path("plan.json"), "--table", path("t.json")}), 0);
  EXPECT_NE(out_.str().find("status optimal-over-grid"), std::string::npos);
  EXPECT_TRUE(fs::exists(path("plan.csv")));
  EXPECT_TRUE(fs::exists(path("t.json")));
  ASSERT_EQ(run({"check", "--scenario", path("tiny.json"), "--plan", path("plan.json"), "--table", path("t.json")}),
            0);
  EXPECT_NE(out_.str().find("fully_covered true"), std::string::npos);
  ASSERT_EQ(run({"objectives", "--scenario", path("tiny.json"), "--plan", path("plan.json")}), 0);
  EXPECT_NE(out_.str().find("weighted "), std::string::npos);
}

TEST_F(CliTest, TamperedPlanFailsCheck) {
  ASSERT_EQ(run({"plan", "--scenario", path("tiny.json"), "--out", path("plan.json")}), 0);
  auto doc = nlohmann::json::parse(slurp(path("plan.json")));
  doc["trajectory"][1][0] = doc["trajectory"][1][0].get<double>() + 0.5;
  std::ofstream(path("bad.json")) << doc.dump();
  EXPECT_EQ(run({"check", "--scenario", path("tiny.json"), "--plan", path("bad.json")}), 2);
  EXPECT_NE(out_.str().find("violation dynamics"), std::string::npos);

  doc = nlohmann::json::parse(slurp(path("plan.json")));
  doc["schedule"][0] = 7;
  std::ofstream(path("bad2.json")) << doc.dump();
  EXPECT_EQ(run({"check", "--scenario", path("tiny.json"), "--plan", path("bad2.json")}), 2);
}

TEST_F(CliTest, PlanForAnotherScenarioIsRejected) {
  ASSERT_EQ(run({"plan", "--scenario", path("tiny.json"), "--out", path("plan.json")}), 0);
  EXPECT_EQ(run({"check", "--scenario", path("tiny.json"), "--plan", path("plan.json"), "--set", "weights.w1=2"}), 2);
  EXPECT_NE(err_.str().find("was made for scenario"), std::string::npos);
}

TEST_F(CliTest, StatusExitCodes) {
  auto far = fixtures::tiny_spec(2);
  far.kinematics.workspace = {0, 0, 60, 20};
  for (auto& p : far.region.points) p += Point2(40, 0);
  far.x0.pos = {2, 12};
  save_spec(far, path("far.json"));
  EXPECT_EQ(run({"plan", "--scenario", path("far.json"), "--out", path("far_plan.json")}), 1);
  EXPECT_EQ(run({"check", "--scenario", path("far.json"), "--plan", path("far_plan.json")}), 1);
  EXPECT_EQ(run({"plan", "--scenario", path("tiny.json"), "--out", path("lim.json"), "--set", "solver.max_nodes=1"}),
            3);
  EXPECT_NE(out_.str().find("status limit"), std::string::npos);
}

TEST_F(CliTest, OutputsAreByteIdentical) {
  ASSERT_EQ(run({"plan", "--scenario", path("tiny.json"), "--out", path("a.json")}), 0);
  ASSERT_EQ(run({"plan", "--scenario", path("tiny.json"), "--out", path("b.json")}), 0);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  ASSERT_EQ(run({"visibility", "--scenario", path("tiny.json"), "--out", path("v1.json")}), 0);
  ASSERT_EQ(run({"visibility", "--scenario", path("tiny.json"), "--out", path("v2.json")}), 0);
  EXPECT_EQ(slurp(path("v1.json")), slurp(path("v2.json")));
  ASSERT_EQ(run({"export-lp", "--scenario", path("tiny.json"), "--out", path("m1.lp")}), 0);
  ASSERT_EQ(run({"export-lp", "--scenario", path("tiny.json"), "--out", path("m2.lp")}), 0);
  EXPECT_EQ(slurp(path("m1.lp")), slurp(path("m2.lp")));
}

TEST_F(CliTest, SeedFlagChangesTheTable) {
  ASSERT_EQ(run({"visibility", "--scenario", path("tiny.json"), "--out", path("v1.json"), "--seed", "5"}), 0);
  const auto doc = nlohmann::json::parse(slurp(path("v1.json")));
  const auto t = table_from_json(doc);
  EXPECT_EQ(t.meta().seed, 5u);
  // A cache learned under another seed does not match the scenario.
  EXPECT_EQ(run({"plan", "--scenario", path("tiny.json"), "--table", path("v1.json"), "--out", path("p.json")}), 2);
}

TEST_F(CliTest, ExportLpParses) {
  ASSERT_EQ(run({"export-lp", "--scenario", path("tiny.json"), "--out", path("m.lp")}), 0);
  const auto parsed = read_lp(slurp(path("m.lp")));
  const auto s = build_scenario(fixtures::tiny_spec(4));
  const auto model = build_model(s, learn_table(s, s.configs));
  EXPECT_TRUE(parsed == to_lp_problem(model));
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}), 2);
  EXPECT_EQ(run({"fly"}), 2);
  EXPECT_EQ(run({"plan"}), 2);
  EXPECT_EQ(run({"check", "--scenario", path("tiny.json")}), 2);
  EXPECT_EQ(run({"plan", "--scenario", path("missing.json")}), 2);
  EXPECT_EQ(run({"plan", "--scenario", path("tiny.json"), "--bogus", "1"}), 2);
  EXPECT_EQ(run({"--help"}), 0);
}

TEST(Threads, EnvironmentCap) {
  ::setenv("COVERAGE_MIQP_THREADS", "1", 1);
  EXPECT_EQ(cli::learning_threads(), 1u);
  ::setenv("COVERAGE_MIQP_THREADS", "junk", 1);
  EXPECT_GE(cli::learning_threads(), 1u);
  ::unsetenv("COVERAGE_MIQP_THREADS");
}

}  // namespace
}  // namespace coverage_miqp
