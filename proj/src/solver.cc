#include "coverage_miqp/solver.h"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace coverage_miqp {

SolverOptions SolverOptions::from(const Scenario& s) {
  SolverOptions o;
  o.control_grid = s.solver.control_grid;
  o.time_limit_s = s.solver.time_limit_s;
  o.max_nodes = s.solver.max_nodes;
  return o;
}

void SolverOptions::validate(const KinematicParams& k) const {
  if (control_grid.empty()) throw std::invalid_argument("control grid is empty");
  for (double f : control_grid) {
    if (!std::isfinite(f) || std::abs(f) > k.force_max + 1e-9)
      throw std::invalid_argument("control grid value outside the force bound");
  }
  if (!(time_limit_s > 0.0)) throw std::invalid_argument("time limit must be positive");
  if (max_nodes <= 0) throw std::invalid_argument("node limit must be positive");
  if (!(incumbent_tol >= 0.0)) throw std::invalid_argument("incumbent tolerance must be nonnegative");
}

std::string to_string(PlanStatus s) {
  switch (s) {
    case PlanStatus::OptimalOverGrid: return "optimal-over-grid";
    case PlanStatus::Feasible: return "feasible";
    case PlanStatus::Infeasible: return "infeasible";
    case PlanStatus::Limit: return "limit";
  }
  return "infeasible";
}

PlanStatus parse_status(std::string_view name) {
  for (auto s : {PlanStatus::OptimalOverGrid, PlanStatus::Feasible, PlanStatus::Infeasible, PlanStatus::Limit}) {
    if (to_string(s) == name) return s;
  }
  throw std::invalid_argument("unknown plan status: " + std::string(name));
}

double step_cost(const Scenario& s, int t, std::span<const std::size_t> newly_covered, const ControlInput& u,
                 const ControlInput* prev_u, std::size_t m, const std::size_t* prev_m) {
  const double T = static_cast<double>(s.horizon);
  double j1 = 0.0;
  for (std::size_t i = 0; i < newly_covered.size(); ++i) j1 += static_cast<double>(t) / T;
  double j2 = std::abs(u.fx) + std::abs(u.fy);
  if (prev_u) {
    const double dx = u.fx - prev_u->fx;
    const double dy = u.fy - prev_u->fy;
    j2 += dx * dx + dy * dy;
  }
  const double j3 = (prev_m && *prev_m != m) ? 2.0 : 0.0;
  return s.weights.w1 * j1 + s.weights.w2 * j2 + s.weights.w3 * j3;
}

bool admissible(const Scenario& s, const AgentState& x) {
  if (!state_within_bounds(x, s.kinematics)) return false;
  for (const auto& o : s.obstacles()) {
    if (inside_region(o.faces, x.pos)) return false;
  }
  return true;
}

namespace {

using Clock = std::chrono::steady_clock;

std::vector<ControlInput> control_pairs(const SolverOptions& o) {
  std::vector<ControlInput> out;
  out.reserve(o.control_grid.size() * o.control_grid.size());
  for (double fx : o.control_grid)
    for (double fy : o.control_grid) out.push_back({fx, fy});
  return out;
}

struct Search {
  const Scenario& s;
  const VisibilityTable& table;
  const SolverOptions& opts;
  std::vector<ControlInput> pairs;
  std::vector<Obstacle> obstacles;
  int T = 0;
  std::size_t P = 0;
  std::size_t per_step_cap = 0;
  double reach_radius = 0.0;
  double step_reach = 0.0;
  Clock::time_point deadline;

  // Current path.
  std::vector<ControlInput> controls;
  std::vector<std::size_t> schedule;
  std::vector<AgentState> traj;
  std::vector<int> covered_at;  // 0 = not yet
  std::size_t n_covered = 0;

  PlanResult best;
  bool have_best = false;
  bool limit_hit = false;
  std::int64_t nodes = 0;

  Search(const Scenario& sc, const VisibilityTable& vt, const SolverOptions& o)
      : s(sc), table(vt), opts(o), pairs(control_pairs(o)), obstacles(sc.obstacles()), T(sc.horizon),
        P(sc.n_points()) {
    per_step_cap = P;
    if (opts.table_point_bound) {
      std::size_t cap = 0;
      for (std::size_t c = 0; c < table.n_cells(); ++c) cap = std::max(cap, table.row_count(c));
      per_step_cap = std::min(P, cap);
    }
    for (const auto& c : s.configs)
      for (std::size_t i = 1; i < 3; ++i) reach_radius = std::max(reach_radius, c.base_vertices[i].norm());
    step_reach = s.kinematics.dt * (s.kinematics.speed_max + 1e-9);
    deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                  std::chrono::duration<double>(opts.time_limit_s));
    covered_at.assign(P, 0);
  }

  bool feasible_state(const AgentState& x) const {
    if (!state_within_bounds(x, s.kinematics)) return false;
    for (const auto& o : obstacles) {
      if (inside_region(o.faces, x.pos)) return false;
    }
    return true;
  }

  // Earliest step at which point p could enter a footprint, given the agent
  // is at pos after step t.
  int earliest_step(std::size_t p, const Point2& pos, int t) const {
    const Vector2 d = s.points[p] - pos;
    const double gap = std::max(std::abs(d.x()), std::abs(d.y())) - reach_radius - 1e-6;
    if (gap <= 0.0) return t + 1;
    return t + std::max(1, static_cast<int>(std::ceil(gap / step_reach)));
  }

  bool check_limits() {
    if (limit_hit) return true;
    if (nodes >= opts.max_nodes) {
      limit_hit = true;
    } else if ((nodes & 1023) == 0 && Clock::now() > deadline) {
      limit_hit = true;
    }
    return limit_hit;
  }

  bool unreachable_column() const {
    for (std::size_t p = 0; p < P; ++p) {
      bool any = false;
      for (std::size_t c = 0; c < table.n_cells() && !any; ++c) any = table.query(c, p);
      if (!any) return true;
    }
    return false;
  }

  // True when the subtree below the current node (after step t) cannot hold
  // a better complete plan.
  bool prune(int t, const Point2& pos, double cost) const {
    const std::size_t remaining = P - n_covered;
    if (opts.prune_coverage && remaining > static_cast<std::size_t>(T - t) * per_step_cap) return true;
    if (!opts.prune_coverage && !opts.prune_objective) return false;
    double j1_bound = 0.0;
    for (std::size_t p = 0; p < P; ++p) {
      if (covered_at[p]) continue;
      const int e = earliest_step(p, pos, t);
      if (e > T) {
        if (opts.prune_coverage) return true;
        continue;
      }
      j1_bound += static_cast<double>(e) / static_cast<double>(T);
    }
    if (opts.prune_objective && have_best) {
      const double lb = cost + s.weights.w1 * j1_bound;
      const double margin = 1e-12 * std::max(1.0, std::abs(best.objective));
      if (lb - best.objective >= margin - opts.incumbent_tol) return true;
    }
    return false;
  }

  void record(double cost) {
    best.controls = controls;
    best.schedule = schedule;
    best.trajectory = traj;
    best.objective = cost;
    best.coverage_times.clear();
    for (std::size_t p = 0; p < P; ++p) best.coverage_times[p] = covered_at[p];
    have_best = true;
  }

  void dfs(int t, const AgentState& x, double cost) {
    if (t == T) {
      if (n_covered == P && (!have_best || cost < best.objective)) record(cost);
      return;
    }
    const int next_t = t + 1;
    for (const auto& u : pairs) {
      const AgentState nx = step(x, u, s.kinematics);
      if (!feasible_state(nx)) continue;
      for (std::size_t m = 0; m < s.n_configs(); ++m) {
        ++nodes;
        if (check_limits()) return;
        std::vector<std::size_t> newly;
        for (std::size_t p : table_visible_points(s, table, s.configs[m], nx.pos)) {
          if (!covered_at[p]) newly.push_back(p);
        }
        const ControlInput* pu = t > 0 ? &controls.back() : nullptr;
        const std::size_t* pm = t > 0 ? &schedule.back() : nullptr;
        const double c = cost + step_cost(s, next_t, newly, u, pu, m, pm);

        for (std::size_t p : newly) covered_at[p] = next_t;
        n_covered += newly.size();
        controls.push_back(u);
        schedule.push_back(m);
        traj.push_back(nx);

        if (!prune(next_t, nx.pos, c)) dfs(next_t, nx, c);

        traj.pop_back();
        schedule.pop_back();
        controls.pop_back();
        n_covered -= newly.size();
        for (std::size_t p : newly) covered_at[p] = 0;
        if (limit_hit) return;
      }
    }
  }
};

PlanResult finish(PlanResult best, bool have_best, bool limit_hit, std::int64_t nodes) {
  if (have_best) {
    best.status = limit_hit ? PlanStatus::Feasible : PlanStatus::OptimalOverGrid;
  } else {
    best = PlanResult{};
    best.status = limit_hit ? PlanStatus::Limit : PlanStatus::Infeasible;
  }
  best.nodes = nodes;
  return best;
}

void check_inputs(const Scenario& s, const VisibilityTable& table, const SolverOptions& opts) {
  opts.validate(s.kinematics);
  if (table.n_cells() != s.grid.size() || table.n_points() != s.n_points())
    throw std::invalid_argument("visibility table does not match the scenario");
  if (s.horizon < 1) throw std::invalid_argument("horizon must be at least 1");
}

}  // namespace

PlanResult solve(const Scenario& s, const VisibilityTable& table, const SolverOptions& opts) {
  check_inputs(s, table, opts);
  Search search(s, table, opts);
  if (!(opts.prune_coverage && search.unreachable_column()) && search.prune(0, s.x0.pos, 0.0) == false)
    search.dfs(0, s.x0, 0.0);
  return finish(std::move(search.best), search.have_best, search.limit_hit, search.nodes);
}

PlanResult enumerate_oracle(const Scenario& s, const VisibilityTable& table, const SolverOptions& opts) {
  check_inputs(s, table, opts);
  const auto pairs = control_pairs(opts);
  const std::size_t branching = pairs.size() * s.n_configs();
  const int T = s.horizon;
  double leaves = 1.0;
  for (int t = 0; t < T; ++t) leaves *= static_cast<double>(branching);
  if (leaves > 1e7) throw std::invalid_argument("search space too large for exhaustive enumeration");

  const std::size_t P = s.n_points();
  std::vector<std::size_t> digit(static_cast<std::size_t>(T), 0);
  PlanResult best;
  bool have_best = false;
  std::int64_t count = 0;
  std::vector<int> covered_at(P);
  std::vector<ControlInput> controls(static_cast<std::size_t>(T));
  std::vector<std::size_t> schedule(static_cast<std::size_t>(T));
  std::vector<AgentState> traj(static_cast<std::size_t>(T));

  while (true) {
    ++count;
    for (int t = 0; t < T; ++t) {
      const std::size_t d = digit[static_cast<std::size_t>(t)];
      controls[static_cast<std::size_t>(t)] = pairs[d / s.n_configs()];
      schedule[static_cast<std::size_t>(t)] = d % s.n_configs();
    }
    std::fill(covered_at.begin(), covered_at.end(), 0);
    AgentState x = s.x0;
    double cost = 0.0;
    bool ok = true;
    for (int t = 1; t <= T && ok; ++t) {
      const std::size_t i = static_cast<std::size_t>(t - 1);
      x = step(x, controls[i], s.kinematics);
      if (!admissible(s, x)) {
        ok = false;
        break;
      }
      traj[i] = x;
      std::vector<std::size_t> newly;
      for (std::size_t p : table_visible_points(s, table, s.configs[schedule[i]], x.pos)) {
        if (!covered_at[p]) newly.push_back(p);
      }
      for (std::size_t p : newly) covered_at[p] = t;
      cost += step_cost(s, t, newly, controls[i], t > 1 ? &controls[i - 1] : nullptr, schedule[i],
                        t > 1 ? &schedule[i - 1] : nullptr);
    }
    if (ok && std::all_of(covered_at.begin(), covered_at.end(), [](int c) { return c > 0; }) &&
        (!have_best || cost < best.objective)) {
      best.controls = controls;
      best.schedule = schedule;
      best.trajectory = traj;
      best.objective = cost;
      best.coverage_times.clear();
      for (std::size_t p = 0; p < P; ++p) best.coverage_times[p] = covered_at[p];
      have_best = true;
    }
    // Odometer with the last step as the fastest digit, so leaves come in
    // the same lexicographic order as the depth-first search.
    int k = T - 1;
    while (k >= 0 && ++digit[static_cast<std::size_t>(k)] == branching) {
      digit[static_cast<std::size_t>(k)] = 0;
      --k;
    }
    if (k < 0) break;
  }
  return finish(std::move(best), have_best, false, count);
}

}  // namespace coverage_miqp
