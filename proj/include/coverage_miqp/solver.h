#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coverage_miqp/scenario.h"
#include "coverage_miqp/visibility.h"

namespace coverage_miqp {

struct SolverOptions {
  std::vector<double> control_grid = {-3.0, 0.0, 3.0};  // per-axis force values
  double time_limit_s = 60.0;
  std::int64_t max_nodes = 5'000'000;
  double incumbent_tol = 0.0;
  bool prune_objective = true;
  bool prune_coverage = true;
  // Use the largest table row as the per-step coverage cap instead of |P|.
  bool table_point_bound = true;

  static SolverOptions from(const Scenario& s);
  // Throws std::invalid_argument.
  void validate(const KinematicParams& k) const;
};

enum class PlanStatus { OptimalOverGrid, Feasible, Infeasible, Limit };

std::string to_string(PlanStatus s);
// Throws std::invalid_argument for an unknown name.
PlanStatus parse_status(std::string_view name);

struct PlanResult {
  std::vector<ControlInput> controls;   // u_0..u_{T-1}
  std::vector<std::size_t> schedule;    // config index used at t = 1..T
  std::vector<AgentState> trajectory;   // x_1..x_T
  double objective = kNoObjective;
  std::map<std::size_t, int> coverage_times;  // point -> first covering t
  PlanStatus status = PlanStatus::Infeasible;
  std::int64_t nodes = 0;

  static constexpr double kNoObjective = -1.0;
  bool has_plan() const { return status == PlanStatus::OptimalOverGrid || status == PlanStatus::Feasible; }
};

// Weighted objective contribution of one step. t is the 1-based step index,
// newly_covered the points first covered at t.
double step_cost(const Scenario& s, int t, std::span<const std::size_t> newly_covered, const ControlInput& u,
                 const ControlInput* prev_u, std::size_t m, const std::size_t* prev_m);

// Agent state is admissible: bounds hold and no obstacle holds it strictly inside.
bool admissible(const Scenario& s, const AgentState& x);

// Depth-first branch and bound over control-grid pairs and configs.
PlanResult solve(const Scenario& s, const VisibilityTable& table, const SolverOptions& opts);

// Exhaustive enumeration of every control/config sequence. Throws
// std::invalid_argument above 1e7 leaves.
PlanResult enumerate_oracle(const Scenario& s, const VisibilityTable& table, const SolverOptions& opts);

}  // namespace coverage_miqp
