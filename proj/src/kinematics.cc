#include "coverage_miqp/kinematics.h"

#include <cmath>
#include <stdexcept>

namespace coverage_miqp {

namespace {

constexpr double kBoundTol = 1e-9;

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void KinematicParams::validate() const {
  if (!finite_positive(dt)) throw std::invalid_argument("kinematics: dt must be > 0");
  if (!finite_positive(mass)) throw std::invalid_argument("kinematics: mass must be > 0");
  if (!std::isfinite(drag) || drag < 0.0 || drag >= 1.0) {
    throw std::invalid_argument("kinematics: drag must lie in [0, 1)");
  }
  if (!finite_positive(force_max)) throw std::invalid_argument("kinematics: force_max must be > 0");
  if (!finite_positive(speed_max)) throw std::invalid_argument("kinematics: speed_max must be > 0");
  if (!(workspace.xmax > workspace.xmin) || !(workspace.ymax > workspace.ymin)) {
    throw std::invalid_argument("kinematics: workspace must have positive extent");
  }
}

StateMatrix transition_matrix(const KinematicParams& k) {
  StateMatrix phi = StateMatrix::Identity();
  phi(0, 2) = k.dt;
  phi(1, 3) = k.dt;
  phi(2, 2) = 1.0 - k.drag;
  phi(3, 3) = 1.0 - k.drag;
  return phi;
}

InputMatrix input_matrix(const KinematicParams& k) {
  InputMatrix gamma = InputMatrix::Zero();
  gamma(2, 0) = k.dt / k.mass;
  gamma(3, 1) = k.dt / k.mass;
  return gamma;
}

AgentState step(const AgentState& s, const ControlInput& u, const KinematicParams& k) {
  AgentState next;
  next.pos = s.pos + k.dt * s.vel;
  next.vel = (1.0 - k.drag) * s.vel + (k.dt * u.vec()) / k.mass;
  return next;
}

std::vector<AgentState> rollout(const AgentState& x0, std::span<const ControlInput> controls,
                                const KinematicParams& k) {
  std::vector<AgentState> traj;
  traj.reserve(controls.size());
  AgentState s = x0;
  for (const auto& u : controls) {
    s = step(s, u, k);
    traj.push_back(s);
  }
  return traj;
}

std::vector<AgentState> rollout_closed_form(const AgentState& x0, std::span<const ControlInput> controls,
                                            const KinematicParams& k) {
  const StateMatrix phi = transition_matrix(k);
  const InputMatrix gamma = input_matrix(k);
  const std::size_t horizon = controls.size();

  // powers[j] = Phi^j
  std::vector<StateMatrix> powers(horizon + 1);
  powers[0] = StateMatrix::Identity();
  for (std::size_t j = 1; j <= horizon; ++j) powers[j] = phi * powers[j - 1];

  const Eigen::Vector4d x0v = x0.stacked();
  std::vector<AgentState> traj;
  traj.reserve(horizon);
  for (std::size_t t = 1; t <= horizon; ++t) {
    Eigen::Vector4d x = powers[t] * x0v;
    for (std::size_t tau = 0; tau < t; ++tau) {
      x += powers[t - tau - 1] * gamma * controls[tau].vec();
    }
    traj.push_back(AgentState::from_stacked(x));
  }
  return traj;
}

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::Force:
      return "force";
    case BoundKind::Speed:
      return "speed";
    case BoundKind::Workspace:
      return "workspace";
  }
  return "unknown";
}

std::vector<BoundViolation> check_bounds(std::span<const AgentState> traj, std::span<const ControlInput> controls,
                                         const KinematicParams& k) {
  std::vector<BoundViolation> out;
  for (std::size_t t = 0; t < controls.size(); ++t) {
    const Vector2 f = controls[t].vec();
    for (int axis = 0; axis < 2; ++axis) {
      if (std::abs(f[axis]) > k.force_max + kBoundTol) {
        out.push_back({static_cast<int>(t), BoundKind::Force, axis, f[axis]});
      }
    }
  }
  const Box& w = k.workspace;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const int t = static_cast<int>(i) + 1;
    const AgentState& s = traj[i];
    for (int axis = 0; axis < 2; ++axis) {
      if (std::abs(s.vel[axis]) > k.speed_max + kBoundTol) {
        out.push_back({t, BoundKind::Speed, axis, s.vel[axis]});
      }
    }
    if (s.pos.x() < w.xmin - kBoundTol || s.pos.x() > w.xmax + kBoundTol) {
      out.push_back({t, BoundKind::Workspace, 0, s.pos.x()});
    }
    if (s.pos.y() < w.ymin - kBoundTol || s.pos.y() > w.ymax + kBoundTol) {
      out.push_back({t, BoundKind::Workspace, 1, s.pos.y()});
    }
  }
  return out;
}

bool state_within_bounds(const AgentState& s, const KinematicParams& k) {
  return std::abs(s.vel.x()) <= k.speed_max + kBoundTol && std::abs(s.vel.y()) <= k.speed_max + kBoundTol &&
         k.workspace.contains(s.pos, kBoundTol);
}

bool control_within_bounds(const ControlInput& u, const KinematicParams& k) {
  return std::abs(u.fx) <= k.force_max + kBoundTol && std::abs(u.fy) <= k.force_max + kBoundTol;
}

}  // namespace coverage_miqp
