#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "coverage_miqp/model.h"
#include "coverage_miqp/planner.h"
#include "support/fixtures.h"

namespace coverage_miqp {
namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("coverage_miqp_planner_" + name);
}

PlanResult manual_plan(const Scenario& s, std::vector<ControlInput> u, std::vector<std::size_t> m) {
  PlanResult p;
  p.status = PlanStatus::Feasible;
  p.controls = std::move(u);
  p.schedule = std::move(m);
  p.trajectory = rollout(s.x0, p.controls, s.kinematics);
  p.objective = 0.0;
  return p;
}

TEST(Plan, TinyEndToEndIsFullyCovered) {
  const auto s = build_scenario(fixtures::tiny_spec(4));
  const auto out = plan(s);
  ASSERT_EQ(out.result.status, PlanStatus::OptimalOverGrid);
  const auto report = validate(s, out.result, out.table);
  EXPECT_EQ(report.dynamics_residual, 0.0);
  EXPECT_TRUE(report.bound_violations.empty());
  EXPECT_TRUE(report.obstacle_violations.empty());
  EXPECT_TRUE(report.fully_covered);
  EXPECT_TRUE(report.ok());
  for (std::size_t p = 0; p < s.n_points(); ++p) {
    EXPECT_EQ(report.coverage[p].table_covered_at, out.result.coverage_times.at(p));
  }
}

TEST(Plan, StartInsideHullFailsAtBuild) {
  auto spec = fixtures::tiny_spec(4);
  spec.x0.pos = {10, 6.5};
  EXPECT_THROW(build_scenario(spec), std::invalid_argument);
}

TEST(Plan, CachedTableGivesIdenticalPlan) {
  const auto s = build_scenario(fixtures::tiny_spec(4));
  const auto path = temp_file("cache.json");
  std::filesystem::remove(path);
  PlanOptions opts;
  opts.table_cache = path;
  const auto first = plan(s, opts);
  EXPECT_FALSE(first.table_from_cache);
  ASSERT_TRUE(std::filesystem::exists(path));
  const auto second = plan(s, opts);
  EXPECT_TRUE(second.table_from_cache);
  EXPECT_EQ(first.table, second.table);
  EXPECT_EQ(first.result.objective, second.result.objective);
  EXPECT_EQ(first.result.schedule, second.result.schedule);

  auto other = fixtures::tiny_spec(4);
  other.visibility.seed = 99;
  EXPECT_THROW(plan(build_scenario(other), opts), std::invalid_argument);
  std::filesystem::remove(path);
}

TEST(Validate, NudgedPositionShowsInResidual) {
  const auto s = build_scenario(fixtures::tiny_spec(4));
  const auto out = plan(s);
  auto p = out.result;
  p.trajectory[2].pos.x() += 0.1;
  EXPECT_NEAR(validate(s, p, out.table).dynamics_residual, 0.1, 1e-12);
  EXPECT_FALSE(validate(s, p, out.table).ok());
}

TEST(Validate, CrossingTheHullIsReported) {
  auto spec = fixtures::tiny_spec(4);
  spec.x0.pos = {10, 9};
  const auto s = build_scenario(spec);
  const auto table = learn_table(s, s.configs);
  const auto p = manual_plan(s, {{0, -3}, {0, -3}, {0, 0}, {0, 0}}, {0, 0, 0, 0});
  const auto report = validate(s, p, table);
  EXPECT_EQ(report.obstacle_violations, std::vector<int>{3});
}

TEST(Validate, StructuralErrorsThrow) {
  const auto s = build_scenario(fixtures::tiny_spec(2));
  const auto table = learn_table(s, s.configs);
  auto p = manual_plan(s, {{0, 0}, {0, 0}}, {0, 0});
  p.schedule = {0, 5};
  EXPECT_THROW(validate(s, p, table), std::invalid_argument);
  p.schedule = {0};
  EXPECT_THROW(validate(s, p, table), std::invalid_argument);
  EXPECT_THROW(objectives(s, p, table), std::invalid_argument);
}

TEST(Validate, DisagreementsMatchCoverageFlags) {
  const auto s = build_scenario(fixtures::tiny_spec(4));
  const auto table = learn_table(s, s.configs);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pick(0, 2), cfg(0, 1);
  const std::vector<double> grid = {-3, 0, 3};
  for (int k = 0; k < 40; ++k) {
    std::vector<ControlInput> u(4);
    std::vector<std::size_t> m(4);
    for (std::size_t i = 0; i < 4; ++i) {
      u[i] = {grid[static_cast<std::size_t>(pick(rng))], grid[static_cast<std::size_t>(pick(rng))]};
      m[i] = static_cast<std::size_t>(cfg(rng));
    }
    const auto p = manual_plan(s, u, m);
    const auto r = validate(s, p, table);
    for (std::size_t q = 0; q < s.n_points(); ++q) {
      EXPECT_EQ(r.coverage[q].raycast_visible, r.coverage[q].covered_at.has_value());
      EXPECT_EQ(r.coverage[q].table_visible, r.coverage[q].table_covered_at.has_value());
    }
    for (const auto& d : r.disagreements) EXPECT_NE(d.table, d.raycast);
  }
}

Scenario single_point(int horizon) {
  auto spec = fixtures::points_spec({{10, 5}}, {0, 0, 20, 20});
  spec.traversable = true;
  spec.x0.pos = {10, 10};
  spec.angles_deg = {180.0, 0.0};
  spec.zooms = {1.0};
  spec.horizon = horizon;
  spec.weights = {10.0, 0.5, 0.1};
  return build_scenario(spec);
}

TEST(Objectives, Examples) {
  const auto s = single_point(10);
  const auto table = obtain_table(s, {});
  // Looking up at t = 1, down afterwards.
  std::vector<std::size_t> m(10, 1);
  m[0] = 0;
  const auto p = manual_plan(s, std::vector<ControlInput>(10), m);
  const auto o = objectives(s, p, table);
  EXPECT_NEAR(o.j1, 0.2, 1e-15);
  EXPECT_EQ(o.j2, 0.0);
  EXPECT_EQ(o.j3, 2.0);
  EXPECT_NEAR(o.weighted, 10 * 0.2 + 0.1 * 2.0, 1e-12);

  const auto still = manual_plan(s, std::vector<ControlInput>(10, {1, -1}), std::vector<std::size_t>(10, 1));
  const auto c = objectives(s, still, table);
  EXPECT_EQ(c.j3, 0.0);
  EXPECT_EQ(c.j2, 20.0);
  EXPECT_NEAR(objectives(s, still, table, ControlNorm::Euclidean).j2, 10 * std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(c.weighted, 10 * c.j1 + 0.5 * c.j2 + 0.1 * c.j3, 1e-9);
}

TEST(Objectives, AgreeWithModelEvaluation) {
  const auto s = build_scenario(fixtures::tiny_spec(4));
  const auto table = learn_table(s, s.configs);
  const auto model = build_model(s, table);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> f(-3, 3);
  std::uniform_int_distribution<int> cfg(0, 1);
  for (int k = 0; k < 100; ++k) {
    std::vector<ControlInput> u(4);
    std::vector<std::size_t> m(4);
    for (std::size_t i = 0; i < 4; ++i) {
      u[i] = {f(rng), f(rng)};
      m[i] = static_cast<std::size_t>(cfg(rng));
    }
    const auto direct = objectives(s, manual_plan(s, u, m), table);
    const auto a = assignment_from_plan(s, table, model, u, m);
    EXPECT_NEAR(direct.weighted, evaluate(model.objective, a), 1e-9);
    EXPECT_NEAR(direct.j1, evaluate(objective_j1(model.vars), a), 1e-9);
    EXPECT_NEAR(direct.j2, evaluate(objective_j2(model.vars), a), 1e-9);
    EXPECT_NEAR(direct.j3, evaluate(objective_j3(model.vars), a), 1e-9);
  }
}

TEST(Objectives, SolverObjectiveMatchesBreakdown) {
  const auto s = build_scenario(fixtures::tiny_spec(4));
  const auto out = plan(s);
  ASSERT_TRUE(out.result.has_plan());
  EXPECT_NEAR(objectives(s, out.result, out.table).weighted, out.result.objective, 1e-9);
}

TEST(PlanIo, JsonRoundTrip) {
  const auto s = build_scenario(fixtures::tiny_spec(4));
  const auto out = plan(s);
  const auto path = temp_file("plan.json");
  save_plan(out.result, "abc", path);
  std::string hash;
  const auto back = load_plan(path, &hash);
  std::filesystem::remove(path);
  EXPECT_EQ(hash, "abc");
  EXPECT_EQ(back.status, out.result.status);
  EXPECT_EQ(back.objective, out.result.objective);
  EXPECT_EQ(back.schedule, out.result.schedule);
  EXPECT_EQ(back.coverage_times, out.result.coverage_times);
  ASSERT_EQ(back.trajectory.size(), out.result.trajectory.size());
  for (std::size_t t = 0; t < back.trajectory.size(); ++t) {
    EXPECT_EQ(back.trajectory[t].stacked(), out.result.trajectory[t].stacked());
    EXPECT_EQ(back.controls[t].vec(), out.result.controls[t].vec());
  }
}

TEST(PlanIo, StrictKeysAndNullObjective) {
  PlanResult none;
  none.status = PlanStatus::Infeasible;
  auto doc = plan_to_json(none, "h");
  EXPECT_TRUE(doc["objective"].is_null());
  EXPECT_EQ(plan_from_json(doc).status, PlanStatus::Infeasible);
  doc["extra"] = 1;
  EXPECT_THROW(plan_from_json(doc), std::invalid_argument);
  doc.erase("extra");
  doc.erase("schedule");
  EXPECT_THROW(plan_from_json(doc), std::invalid_argument);
  EXPECT_THROW(plan_from_json(nlohmann::json::array()), std::invalid_argument);
}

TEST(PlanIo, CsvRows) {
  const auto s = build_scenario(fixtures::tiny_spec(4));
  const auto out = plan(s);
  const auto csv = plan_csv(out.result);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,px,py,vx,vy,fx,fy,m,points_covered_cum");
  int rows = 0;
  int last_cum = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(line.rfind(std::to_string(rows) + ",", 0), 0u);
    last_cum = std::stoi(line.substr(line.rfind(',') + 1));
  }
  EXPECT_EQ(rows, 4);
  EXPECT_EQ(last_cum, 3);
  EXPECT_EQ(csv.find('\r'), std::string::npos);
}

}  // namespace
}  // namespace coverage_miqp
