#include "coverage_miqp/planner.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace coverage_miqp {

VisibilityTable obtain_table(const Scenario& s, const PlanOptions& opts, bool* from_cache) {
  if (from_cache) *from_cache = false;
  const TableMeta meta = expected_meta(s);
  if (s.traversable) return VisibilityTable::all_visible(meta);
  if (opts.table_cache && std::filesystem::exists(*opts.table_cache)) {
    if (from_cache) *from_cache = true;
    return load_table(*opts.table_cache, meta);
  }
  auto table = learn_table(s, s.configs, std::max(1u, opts.threads));
  if (opts.table_cache) save_table(table, *opts.table_cache);
  return table;
}

PlanOutput plan(const Scenario& s, const PlanOptions& opts) {
  PlanOutput out;
  out.table = obtain_table(s, opts, &out.table_from_cache);
  out.result = solve(s, out.table, opts.solver.value_or(SolverOptions::from(s)));
  return out;
}

bool ValidationReport::ok() const {
  return dynamics_residual <= 1e-9 && bound_violations.empty() && obstacle_violations.empty() && fully_covered;
}

namespace {

void check_structure(const Scenario& s, const PlanResult& plan) {
  const auto T = static_cast<std::size_t>(s.horizon);
  if (plan.controls.size() != T || plan.schedule.size() != T || plan.trajectory.size() != T) {
    throw std::invalid_argument("plan: controls, schedule and trajectory must all have length T = " +
                                std::to_string(T));
  }
  for (std::size_t m : plan.schedule) {
    if (m >= s.n_configs()) throw std::invalid_argument("plan: config index out of range");
  }
}

bool contains_index(const std::vector<std::size_t>& v, std::size_t i) {
  return std::find(v.begin(), v.end(), i) != v.end();
}

}  // namespace

ValidationReport validate(const Scenario& s, const PlanResult& plan, const VisibilityTable& table) {
  check_structure(s, plan);
  ValidationReport r;
  const auto replay = rollout(s.x0, plan.controls, s.kinematics);
  for (std::size_t t = 0; t < replay.size(); ++t) {
    const double d = (replay[t].stacked() - plan.trajectory[t].stacked()).norm();
    r.dynamics_residual = std::max(r.dynamics_residual, std::isnan(d) ? std::numeric_limits<double>::infinity() : d);
  }
  r.bound_violations = check_bounds(plan.trajectory, plan.controls, s.kinematics);
  const auto obstacles = s.obstacles();
  r.coverage.assign(s.n_points(), {});
  for (int t = 1; t <= s.horizon; ++t) {
    const auto i = static_cast<std::size_t>(t - 1);
    const Point2& pos = plan.trajectory[i].pos;
    if (std::any_of(obstacles.begin(), obstacles.end(),
                    [&](const Obstacle& o) { return inside_region(o.faces, pos); })) {
      r.obstacle_violations.push_back(t);
    }
    const FovConfig& cfg = s.configs[plan.schedule[i]];
    const auto direct = visible_points(pos, cfg, s);
    const auto learned = table_visible_points(s, table, cfg, pos);
    for (std::size_t p = 0; p < s.n_points(); ++p) {
      const bool d = contains_index(direct, p);
      const bool l = contains_index(learned, p);
      auto& c = r.coverage[p];
      if (d && !c.covered_at) c.covered_at = t;
      if (l && !c.table_covered_at) c.table_covered_at = t;
      c.raycast_visible |= d;
      c.table_visible |= l;
      if (d != l) r.disagreements.push_back({t, p, l, d});
    }
  }
  r.fully_covered = std::all_of(r.coverage.begin(), r.coverage.end(),
                                [](const PointCoverage& c) { return c.covered_at && c.raycast_visible; });
  return r;
}

ObjectiveBreakdown objectives(const Scenario& s, const PlanResult& plan, const VisibilityTable& table,
                              ControlNorm norm) {
  check_structure(s, plan);
  ObjectiveBreakdown o;
  const auto traj = rollout(s.x0, plan.controls, s.kinematics);
  const double T = s.horizon;
  std::vector<bool> covered(s.n_points(), false);
  for (int t = 1; t <= s.horizon; ++t) {
    const auto i = static_cast<std::size_t>(t - 1);
    for (std::size_t p : table_visible_points(s, table, s.configs[plan.schedule[i]], traj[i].pos)) {
      if (covered[p]) continue;
      covered[p] = true;
      o.j1 += t / T;
    }
  }
  for (std::size_t t = 0; t < plan.controls.size(); ++t) {
    const Vector2 u = plan.controls[t].vec();
    o.j2 += norm == ControlNorm::L1 ? u.lpNorm<1>() : u.norm();
    if (t > 0) o.j2 += (u - plan.controls[t - 1].vec()).squaredNorm();
  }
  for (std::size_t t = 1; t < plan.schedule.size(); ++t) {
    if (plan.schedule[t] != plan.schedule[t - 1]) o.j3 += 2.0;
  }
  o.weighted = s.weights.w1 * o.j1 + s.weights.w2 * o.j2 + s.weights.w3 * o.j3;
  return o;
}

nlohmann::json plan_to_json(const PlanResult& plan, const std::string& scenario_hash) {
  nlohmann::json doc;
  doc["scenario_hash"] = scenario_hash;
  doc["status"] = to_string(plan.status);
  doc["objective"] = plan.has_plan() ? nlohmann::json(plan.objective) : nlohmann::json(nullptr);
  auto& controls = doc["controls"] = nlohmann::json::array();
  for (const auto& u : plan.controls) controls.push_back({u.fx, u.fy});
  doc["schedule"] = plan.schedule;
  auto& traj = doc["trajectory"] = nlohmann::json::array();
  for (const auto& x : plan.trajectory) traj.push_back({x.pos.x(), x.pos.y(), x.vel.x(), x.vel.y()});
  auto& cov = doc["coverage_times"] = nlohmann::json::object();
  for (const auto& [p, t] : plan.coverage_times) cov[std::to_string(p)] = t;
  return doc;
}

PlanResult plan_from_json(const nlohmann::json& doc, std::string* hash) {
  static const std::set<std::string> keys = {"scenario_hash", "status",     "objective",     "controls",
                                             "schedule",      "trajectory", "coverage_times"};
  try {
    if (!doc.is_object()) throw std::invalid_argument("plan: document must be an object");
    for (const auto& [k, v] : doc.items()) {
      if (!keys.count(k)) throw std::invalid_argument("plan: unknown key '" + k + "'");
    }
    for (const auto& k : keys) {
      if (!doc.contains(k)) throw std::invalid_argument("plan: missing key '" + k + "'");
    }
    PlanResult p;
    if (hash) *hash = doc.at("scenario_hash").get<std::string>();
    p.status = parse_status(doc.at("status").get<std::string>());
    if (p.has_plan()) p.objective = doc.at("objective").get<double>();
    for (const auto& u : doc.at("controls")) {
      if (u.size() != 2) throw std::invalid_argument("plan: controls must be [fx, fy] pairs");
      p.controls.push_back({u.at(0).get<double>(), u.at(1).get<double>()});
    }
    p.schedule = doc.at("schedule").get<std::vector<std::size_t>>();
    for (const auto& x : doc.at("trajectory")) {
      if (x.size() != 4) throw std::invalid_argument("plan: trajectory entries must be [px, py, vx, vy]");
      p.trajectory.push_back({{x.at(0).get<double>(), x.at(1).get<double>()},
                              {x.at(2).get<double>(), x.at(3).get<double>()}});
    }
    for (const auto& [k, v] : doc.at("coverage_times").items()) {
      std::size_t idx = 0;
      const auto [ptr, ec] = std::from_chars(k.data(), k.data() + k.size(), idx);
      if (ec != std::errc() || ptr != k.data() + k.size()) throw std::invalid_argument("plan: bad point key " + k);
      p.coverage_times[idx] = v.get<int>();
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("plan: ") + e.what());
  }
}

void save_plan(const PlanResult& plan, const std::string& scenario_hash, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << plan_to_json(plan, scenario_hash).dump(2) << '\n';
}

PlanResult load_plan(const std::filesystem::path& path, std::string* hash) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("plan: " + std::string(e.what()));
  }
  return plan_from_json(doc, hash);
}

namespace {

std::string num(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

std::string plan_csv(const PlanResult& plan) {
  std::string out = "t,px,py,vx,vy,fx,fy,m,points_covered_cum\n";
  const std::size_t n = std::min({plan.controls.size(), plan.schedule.size(), plan.trajectory.size()});
  for (std::size_t i = 0; i < n; ++i) {
    const int t = static_cast<int>(i) + 1;
    const auto cum = std::count_if(plan.coverage_times.begin(), plan.coverage_times.end(),
                                   [&](const auto& kv) { return kv.second <= t; });
    const auto& x = plan.trajectory[i];
    const auto& u = plan.controls[i];
    out += std::to_string(t) + ',' + num(x.pos.x()) + ',' + num(x.pos.y()) + ',' + num(x.vel.x()) + ',' +
           num(x.vel.y()) + ',' + num(u.fx) + ',' + num(u.fy) + ',' + std::to_string(plan.schedule[i]) + ',' +
           std::to_string(cum) + '\n';
  }
  return out;
}

}  // namespace coverage_miqp
