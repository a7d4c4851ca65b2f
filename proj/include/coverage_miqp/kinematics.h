#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "coverage_miqp/geometry.h"

namespace coverage_miqp {

// Axis-aligned rectangle [xmin, xmax] x [ymin, ymax].
struct Box {
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 0.0;
  double ymax = 0.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  bool contains(const Point2& p, double tol = kContainmentTol) const {
    return p.x() >= xmin - tol && p.x() <= xmax + tol && p.y() >= ymin - tol && p.y() <= ymax + tol;
  }
};

struct KinematicParams {
  double dt = 1.0;          // s
  double mass = 1.0;        // kg
  double drag = 0.0;        // eta in [0, 1)
  double force_max = 1.0;   // N, per axis
  double speed_max = 1.0;   // m/s, per axis
  Box workspace;

  // Throws std::invalid_argument on a broken invariant.
  void validate() const;
};

struct AgentState {
  Point2 pos = Point2::Zero();
  Vector2 vel = Vector2::Zero();

  Eigen::Vector4d stacked() const { return {pos.x(), pos.y(), vel.x(), vel.y()}; }
  static AgentState from_stacked(const Eigen::Vector4d& x) { return {x.head<2>(), x.tail<2>()}; }
};

struct ControlInput {
  double fx = 0.0;
  double fy = 0.0;

  Vector2 vec() const { return {fx, fy}; }
};

using StateMatrix = Eigen::Matrix4d;
using InputMatrix = Eigen::Matrix<double, 4, 2>;

// Phi = [[I, dt I], [0, (1 - eta) I]] and Gamma = [[0], [dt / m I]].
StateMatrix transition_matrix(const KinematicParams& k);
InputMatrix input_matrix(const KinematicParams& k);

AgentState step(const AgentState& s, const ControlInput& u, const KinematicParams& k);

// States x_1..x_T for controls u_0..u_{T-1}, by repeated step().
std::vector<AgentState> rollout(const AgentState& x0, std::span<const ControlInput> controls,
                                const KinematicParams& k);

// Same trajectory through x_t = Phi^t x_0 + sum_tau Phi^(t-tau-1) Gamma u_tau.
std::vector<AgentState> rollout_closed_form(const AgentState& x0, std::span<const ControlInput> controls,
                                            const KinematicParams& k);

enum class BoundKind { Force, Speed, Workspace };

struct BoundViolation {
  // Control index (u_t, 0-based) for Force; state index (x_t, 1-based) otherwise.
  int t = 0;
  BoundKind kind = BoundKind::Force;
  int axis = 0;  // 0 = x, 1 = y
  double value = 0.0;
};

std::string to_string(BoundKind kind);

// Every per-axis |f| > force_max, |v| > speed_max, or position outside the
// workspace, with tolerance 1e-9. traj holds x_1..x_T.
std::vector<BoundViolation> check_bounds(std::span<const AgentState> traj, std::span<const ControlInput> controls,
                                         const KinematicParams& k);

// Bounds on one state only; used by the search to fail fast.
bool state_within_bounds(const AgentState& s, const KinematicParams& k);
bool control_within_bounds(const ControlInput& u, const KinematicParams& k);

}  // namespace coverage_miqp
