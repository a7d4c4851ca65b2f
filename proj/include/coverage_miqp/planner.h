#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "coverage_miqp/scenario.h"
#include "coverage_miqp/solver.h"
#include "coverage_miqp/visibility.h"

namespace coverage_miqp {

struct PlanOptions {
  // Loaded when the file exists, written after learning otherwise.
  std::optional<std::filesystem::path> table_cache;
  unsigned threads = 1;
  std::optional<SolverOptions> solver;  // defaults to the scenario's settings
};

struct PlanOutput {
  PlanResult result;
  VisibilityTable table;
  bool table_from_cache = false;
};

// Traversable regions get the all-visible table. Throws std::invalid_argument
// when a cached table does not match the scenario.
VisibilityTable obtain_table(const Scenario& s, const PlanOptions& opts, bool* from_cache = nullptr);

PlanOutput plan(const Scenario& s, const PlanOptions& opts = {});

struct PointCoverage {
  std::optional<int> covered_at;        // first t seen by direct ray casting
  std::optional<int> table_covered_at;  // first t seen through the table
  bool table_visible = false;
  bool raycast_visible = false;
};

// A (t, point) pair where the table and the direct ray cast disagree under
// the scheduled config.
struct Disagreement {
  int t = 0;
  std::size_t point = 0;
  bool table = false;
  bool raycast = false;
};

struct ValidationReport {
  double dynamics_residual = 0.0;
  std::vector<BoundViolation> bound_violations;
  std::vector<int> obstacle_violations;  // t with the agent strictly inside an obstacle
  std::vector<PointCoverage> coverage;
  std::vector<Disagreement> disagreements;
  bool fully_covered = false;

  // Residual within 1e-9, no bound or obstacle violation, fully covered.
  bool ok() const;
};

// Throws std::invalid_argument on structural errors: lengths other than T or
// config indices out of range.
ValidationReport validate(const Scenario& s, const PlanResult& plan, const VisibilityTable& table);

enum class ControlNorm { L1, Euclidean };

struct ObjectiveBreakdown {
  double j1 = 0.0;
  double j2 = 0.0;
  double j3 = 0.0;
  double weighted = 0.0;
};

// Recomputed from controls, schedule and the table; coverage credit goes to
// the first table-visible step of each point.
ObjectiveBreakdown objectives(const Scenario& s, const PlanResult& plan, const VisibilityTable& table,
                              ControlNorm norm = ControlNorm::L1);

nlohmann::json plan_to_json(const PlanResult& plan, const std::string& scenario_hash);
// Returns the plan; the stored scenario hash goes to *hash when given.
PlanResult plan_from_json(const nlohmann::json& doc, std::string* hash = nullptr);

void save_plan(const PlanResult& plan, const std::string& scenario_hash, const std::filesystem::path& path);
PlanResult load_plan(const std::filesystem::path& path, std::string* hash = nullptr);

// Header t,px,py,vx,vy,fx,fy,m,points_covered_cum; one row per step t = 1..T
// holding the state reached, the control applied to reach it and the config used.
std::string plan_csv(const PlanResult& plan);

}  // namespace coverage_miqp
