#pragma once

#include <cstddef>
#include <limits>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "coverage_miqp/scenario.h"
#include "coverage_miqp/visibility.h"

namespace coverage_miqp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarType { Continuous, Binary };

struct Variable {
  std::string name;
  VarType type = VarType::Continuous;
  double lb = -kInf;
  double ub = kInf;
};

// Index arithmetic for every block of the program. Time indices follow the
// trajectory: states and all per-step binaries use t = 1..T, controls use
// t = 0..T-1, switch auxiliaries use t = 1..T-1 (switch between t and t+1).
// Out-of-range indices throw std::out_of_range.
class VariableSpace {
 public:
  VariableSpace() = default;
  VariableSpace(int horizon, std::size_t points, std::size_t configs, std::size_t cells,
                std::vector<std::size_t> obstacle_faces);

  std::size_t x(int t, int i) const;
  std::size_t u(int t, int i) const;
  std::size_t u_plus(int t, int i) const;
  std::size_t u_minus(int t, int i) const;
  // Footprint half-plane n (0..2) of config m holds for point p at t.
  std::size_t b(int n, std::size_t p, std::size_t m, int t) const;
  std::size_t in_fov(std::size_t p, std::size_t m, int t) const;
  // Cell face k (0..3) of cell c holds for the agent at t.
  std::size_t cell_face(int k, std::size_t c, int t) const;
  std::size_t in_cell(std::size_t c, int t) const;
  std::size_t select(std::size_t m, int t) const;
  std::size_t visible(std::size_t p, std::size_t m, int t) const;
  // Face i of obstacle o may be violated at t (agent on its inner side).
  std::size_t collision(std::size_t o, int t, std::size_t i) const;
  std::size_t switched(std::size_t m, int t) const;
  std::size_t obj_const() const { return obj_const_; }

  std::size_t size() const { return vars_.size(); }
  const Variable& operator[](std::size_t i) const { return vars_.at(i); }
  Variable& operator[](std::size_t i) { return vars_.at(i); }
  const std::vector<Variable>& variables() const { return vars_; }
  std::size_t n_binaries() const;

  int horizon() const { return T_; }
  std::size_t n_points() const { return P_; }
  std::size_t n_configs() const { return M_; }
  std::size_t n_cells() const { return G_; }
  const std::vector<std::size_t>& obstacle_faces() const { return faces_; }

 private:
  void check_t(int t, int lo, int hi) const;

  int T_ = 0;
  std::size_t P_ = 0, M_ = 0, G_ = 0;
  std::vector<std::size_t> faces_;
  std::vector<std::size_t> collision_offsets_;
  std::size_t x_ = 0, u_ = 0, up_ = 0, um_ = 0, b_ = 0, bs_ = 0, bt_ = 0, bx_ = 0, f_ = 0, bsp_ = 0, bcol_ = 0,
              sw_ = 0, obj_const_ = 0;
  std::vector<Variable> vars_;
};

enum class Sense { LessEqual, Equal, GreaterEqual };

struct LinearTerm {
  std::size_t var = 0;
  double coef = 0.0;
};

struct Row {
  std::string name;
  std::string family;  // e.g. "p2_5", "o_2", "bnd", "j3"
  std::vector<LinearTerm> terms;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
};

// Contributes coef * x_i * x_j to the objective (i <= j).
struct QuadTerm {
  std::size_t i = 0;
  std::size_t j = 0;
  double coef = 0.0;
};

struct Objective {
  std::vector<LinearTerm> linear;
  std::vector<QuadTerm> quadratic;
  double constant = 0.0;
};

enum class SwitchCost {
  Quadratic,  // sum of squared selector differences
  Linear,     // sum of switch auxiliaries bounded below by |difference|
};

struct ModelOptions {
  SwitchCost switch_cost = SwitchCost::Quadratic;
};

struct MiqpModel {
  VariableSpace vars;
  std::vector<Row> rows;
  Objective objective;
};

using Assignment = std::vector<double>;

// Throws std::invalid_argument when the table does not match the scenario.
MiqpModel build_model(const Scenario& s, const VisibilityTable& table, const ModelOptions& opts = {});

Objective objective_j1(const VariableSpace& vars);
Objective objective_j2(const VariableSpace& vars);
Objective objective_j3(const VariableSpace& vars);
Objective objective_j3_linear(const VariableSpace& vars);
// a * lhs + b * rhs with merged duplicate terms.
Objective combine(const Objective& lhs, double a, const Objective& rhs, double b);
double evaluate(const Objective& obj, const Assignment& a);

struct Violation {
  std::string row;
  std::string family;
  double slack = 0.0;  // negative amount by which the row (or bound) fails
};

struct CheckReport {
  std::vector<Violation> violations;

  bool feasible() const { return violations.empty(); }
  std::set<std::string> families() const;
};

// Every row, every variable bound and every integrality requirement.
// Bound and integrality failures are reported under family "bnd".
CheckReport check(const MiqpModel& m, const Assignment& a, double tol = 1e-6);

// Binary values forced by the geometry of a concrete plan. schedule[t-1] is
// the config used at t = 1..T. Visibility bits are set at the first step
// each point becomes table-visible under the selected config, and nowhere
// else. Throws std::invalid_argument on length or index errors.
Assignment assignment_from_plan(const Scenario& s, const VisibilityTable& table, const MiqpModel& m,
                                std::span<const ControlInput> controls, std::span<const std::size_t> schedule);

}  // namespace coverage_miqp
