#include "coverage_miqp/model.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace coverage_miqp {

namespace {

std::string tag(const char* prefix, std::initializer_list<std::pair<const char*, long long>> parts) {
  std::string out = prefix;
  for (const auto& [key, value] : parts) {
    out += '_';
    out += key;
    out += std::to_string(value);
  }
  return out;
}

long long ll(std::size_t v) { return static_cast<long long>(v); }

// Merges duplicate variables and drops exact zeros.
std::vector<LinearTerm> normalized(std::vector<LinearTerm> terms) {
  std::map<std::size_t, double> acc;
  for (const auto& t : terms) acc[t.var] += t.coef;
  std::vector<LinearTerm> out;
  for (const auto& [var, coef] : acc) {
    if (coef != 0.0) out.push_back({var, coef});
  }
  return out;
}

class RowBuilder {
 public:
  explicit RowBuilder(std::vector<Row>& rows) : rows_(rows) {}

  void add(std::string name, std::string family, std::vector<LinearTerm> terms, Sense sense, double rhs) {
    rows_.push_back({std::move(name), std::move(family), normalized(std::move(terms)), sense, rhs});
  }

 private:
  std::vector<Row>& rows_;
};

Objective normalized(Objective obj) {
  obj.linear = normalized(std::move(obj.linear));
  std::map<std::pair<std::size_t, std::size_t>, double> acc;
  for (const auto& q : obj.quadratic) acc[{std::min(q.i, q.j), std::max(q.i, q.j)}] += q.coef;
  obj.quadratic.clear();
  for (const auto& [key, coef] : acc) {
    if (coef != 0.0) obj.quadratic.push_back({key.first, key.second, coef});
  }
  return obj;
}

double row_slack(const Row& r, const Assignment& a) {
  double lhs = 0.0;
  for (const auto& t : r.terms) lhs += t.coef * a[t.var];
  switch (r.sense) {
    case Sense::LessEqual:
      return r.rhs - lhs;
    case Sense::GreaterEqual:
      return lhs - r.rhs;
    case Sense::Equal:
      return -std::abs(lhs - r.rhs);
  }
  return 0.0;
}

}  // namespace

VariableSpace::VariableSpace(int horizon, std::size_t points, std::size_t configs, std::size_t cells,
                             std::vector<std::size_t> obstacle_faces)
    : T_(horizon), P_(points), M_(configs), G_(cells), faces_(std::move(obstacle_faces)) {
  if (T_ < 1) throw std::invalid_argument("model: horizon must be >= 1");
  const auto T = static_cast<std::size_t>(T_);
  std::size_t next = 0;
  auto block = [&](std::size_t count) {
    const std::size_t start = next;
    next += count;
    return start;
  };
  x_ = block(4 * T);
  u_ = block(2 * T);
  up_ = block(2 * T);
  um_ = block(2 * T);
  b_ = block(3 * P_ * M_ * T);
  bs_ = block(P_ * M_ * T);
  bt_ = block(4 * G_ * T);
  bx_ = block(G_ * T);
  f_ = block(M_ * T);
  bsp_ = block(P_ * M_ * T);
  bcol_ = next;
  for (std::size_t faces : faces_) {
    collision_offsets_.push_back(next);
    next += faces * T;
  }
  sw_ = block(M_ * (T - 1));
  obj_const_ = block(1);

  vars_.resize(next);
  auto name = [&](std::size_t idx, std::string n, VarType type) {
    vars_[idx].name = std::move(n);
    vars_[idx].type = type;
    if (type == VarType::Binary) {
      vars_[idx].lb = 0.0;
      vars_[idx].ub = 1.0;
    }
  };
  for (int t = 1; t <= T_; ++t) {
    for (int i = 0; i < 4; ++i) name(x(t, i), "x_" + std::to_string(t) + "_" + std::to_string(i), VarType::Continuous);
  }
  for (int t = 0; t < T_; ++t) {
    for (int i = 0; i < 2; ++i) {
      const std::string suffix = std::to_string(t) + "_" + std::to_string(i);
      name(u(t, i), "u_" + suffix, VarType::Continuous);
      name(u_plus(t, i), "up_" + suffix, VarType::Continuous);
      name(u_minus(t, i), "um_" + suffix, VarType::Continuous);
    }
  }
  for (int t = 1; t <= T_; ++t) {
    for (std::size_t m = 0; m < M_; ++m) {
      for (std::size_t p = 0; p < P_; ++p) {
        for (int n = 0; n < 3; ++n) {
          name(b(n, p, m, t), tag("b", {{"n", n}, {"p", ll(p)}, {"m", ll(m)}, {"t", t}}), VarType::Binary);
        }
        name(in_fov(p, m, t), tag("bS", {{"p", ll(p)}, {"m", ll(m)}, {"t", t}}), VarType::Binary);
        name(visible(p, m, t), tag("bSp", {{"p", ll(p)}, {"m", ll(m)}, {"t", t}}), VarType::Binary);
      }
      name(select(m, t), tag("F", {{"m", ll(m)}, {"t", t}}), VarType::Binary);
      if (t < T_) name(switched(m, t), tag("sw", {{"m", ll(m)}, {"t", t}}), VarType::Continuous);
    }
    for (std::size_t c = 0; c < G_; ++c) {
      for (int k = 0; k < 4; ++k) {
        name(cell_face(k, c, t), tag("bt", {{"k", k}, {"c", ll(c)}, {"t", t}}), VarType::Binary);
      }
      name(in_cell(c, t), tag("bx", {{"c", ll(c)}, {"t", t}}), VarType::Binary);
    }
    for (std::size_t o = 0; o < faces_.size(); ++o) {
      for (std::size_t i = 0; i < faces_[o]; ++i) {
        name(collision(o, t, i), tag("bcol", {{"o", ll(o)}, {"t", t}, {"i", ll(i)}}), VarType::Binary);
      }
    }
  }
  name(obj_const_, "obj_const", VarType::Continuous);
}

void VariableSpace::check_t(int t, int lo, int hi) const {
  if (t < lo || t > hi) throw std::out_of_range("variable time index " + std::to_string(t) + " out of range");
}

namespace {
void check_index(std::size_t v, std::size_t n, const char* what) {
  if (v >= n) throw std::out_of_range(std::string("variable ") + what + " index out of range");
}
}  // namespace

std::size_t VariableSpace::x(int t, int i) const {
  check_t(t, 1, T_);
  check_index(static_cast<std::size_t>(i), 4, "state");
  return x_ + static_cast<std::size_t>(t - 1) * 4 + static_cast<std::size_t>(i);
}

std::size_t VariableSpace::u(int t, int i) const {
  check_t(t, 0, T_ - 1);
  check_index(static_cast<std::size_t>(i), 2, "control");
  return u_ + static_cast<std::size_t>(t) * 2 + static_cast<std::size_t>(i);
}

std::size_t VariableSpace::u_plus(int t, int i) const { return up_ + (u(t, i) - u_); }
std::size_t VariableSpace::u_minus(int t, int i) const { return um_ + (u(t, i) - u_); }

std::size_t VariableSpace::b(int n, std::size_t p, std::size_t m, int t) const {
  check_index(static_cast<std::size_t>(n), 3, "half-plane");
  return b_ + (in_fov(p, m, t) - bs_) * 3 + static_cast<std::size_t>(n);
}

std::size_t VariableSpace::in_fov(std::size_t p, std::size_t m, int t) const {
  check_t(t, 1, T_);
  check_index(p, P_, "point");
  check_index(m, M_, "config");
  return bs_ + (static_cast<std::size_t>(t - 1) * M_ + m) * P_ + p;
}

std::size_t VariableSpace::cell_face(int k, std::size_t c, int t) const {
  check_index(static_cast<std::size_t>(k), 4, "cell face");
  return bt_ + (in_cell(c, t) - bx_) * 4 + static_cast<std::size_t>(k);
}

std::size_t VariableSpace::in_cell(std::size_t c, int t) const {
  check_t(t, 1, T_);
  check_index(c, G_, "cell");
  return bx_ + static_cast<std::size_t>(t - 1) * G_ + c;
}

std::size_t VariableSpace::select(std::size_t m, int t) const {
  check_t(t, 1, T_);
  check_index(m, M_, "config");
  return f_ + static_cast<std::size_t>(t - 1) * M_ + m;
}

std::size_t VariableSpace::visible(std::size_t p, std::size_t m, int t) const {
  return bsp_ + (in_fov(p, m, t) - bs_);
}

std::size_t VariableSpace::collision(std::size_t o, int t, std::size_t i) const {
  check_index(o, faces_.size(), "obstacle");
  check_t(t, 1, T_);
  check_index(i, faces_[o], "obstacle face");
  return collision_offsets_[o] + static_cast<std::size_t>(t - 1) * faces_[o] + i;
}

std::size_t VariableSpace::switched(std::size_t m, int t) const {
  check_t(t, 1, T_ - 1);
  check_index(m, M_, "config");
  return sw_ + static_cast<std::size_t>(t - 1) * M_ + m;
}

std::size_t VariableSpace::n_binaries() const {
  return static_cast<std::size_t>(
      std::count_if(vars_.begin(), vars_.end(), [](const Variable& v) { return v.type == VarType::Binary; }));
}

Objective objective_j1(const VariableSpace& v) {
  Objective obj;
  const double T = v.horizon();
  for (int t = 1; t <= v.horizon(); ++t) {
    for (std::size_t m = 0; m < v.n_configs(); ++m) {
      for (std::size_t p = 0; p < v.n_points(); ++p) obj.linear.push_back({v.visible(p, m, t), t / T});
    }
  }
  return obj;
}

Objective objective_j2(const VariableSpace& v) {
  Objective obj;
  for (int t = 1; t < v.horizon(); ++t) {
    for (int i = 0; i < 2; ++i) {
      const std::size_t cur = v.u(t, i);
      const std::size_t prev = v.u(t - 1, i);
      obj.quadratic.push_back({cur, cur, 1.0});
      obj.quadratic.push_back({prev, prev, 1.0});
      obj.quadratic.push_back({prev, cur, -2.0});
    }
  }
  for (int t = 0; t < v.horizon(); ++t) {
    for (int i = 0; i < 2; ++i) {
      obj.linear.push_back({v.u_plus(t, i), 1.0});
      obj.linear.push_back({v.u_minus(t, i), 1.0});
    }
  }
  return normalized(std::move(obj));
}

Objective objective_j3(const VariableSpace& v) {
  Objective obj;
  for (int t = 1; t < v.horizon(); ++t) {
    for (std::size_t m = 0; m < v.n_configs(); ++m) {
      const std::size_t next = v.select(m, t + 1);
      const std::size_t cur = v.select(m, t);
      obj.quadratic.push_back({next, next, 1.0});
      obj.quadratic.push_back({cur, cur, 1.0});
      obj.quadratic.push_back({cur, next, -2.0});
    }
  }
  return normalized(std::move(obj));
}

Objective objective_j3_linear(const VariableSpace& v) {
  Objective obj;
  for (int t = 1; t < v.horizon(); ++t) {
    for (std::size_t m = 0; m < v.n_configs(); ++m) obj.linear.push_back({v.switched(m, t), 1.0});
  }
  return obj;
}

Objective combine(const Objective& lhs, double a, const Objective& rhs, double b) {
  Objective out;
  for (const auto& t : lhs.linear) out.linear.push_back({t.var, a * t.coef});
  for (const auto& t : rhs.linear) out.linear.push_back({t.var, b * t.coef});
  for (const auto& q : lhs.quadratic) out.quadratic.push_back({q.i, q.j, a * q.coef});
  for (const auto& q : rhs.quadratic) out.quadratic.push_back({q.i, q.j, b * q.coef});
  out.constant = a * lhs.constant + b * rhs.constant;
  return normalized(std::move(out));
}

double evaluate(const Objective& obj, const Assignment& a) {
  double total = obj.constant;
  for (const auto& t : obj.linear) total += t.coef * a.at(t.var);
  for (const auto& q : obj.quadratic) total += q.coef * a.at(q.i) * a.at(q.j);
  return total;
}

MiqpModel build_model(const Scenario& s, const VisibilityTable& table, const ModelOptions& opts) {
  if (table.n_cells() != s.grid.size() || table.n_points() != s.n_points()) {
    throw std::invalid_argument("model: visibility table dimensions do not match the scenario");
  }
  const auto obstacles = s.obstacles();
  std::vector<std::size_t> faces;
  for (const auto& o : obstacles) faces.push_back(o.faces.size());

  MiqpModel model;
  model.vars = VariableSpace(s.horizon, s.n_points(), s.n_configs(), s.grid.size(), faces);
  auto& v = model.vars;
  const int T = s.horizon;
  const double M = s.big_m;
  const auto& k = s.kinematics;
  RowBuilder rows(model.rows);

  // Variable bounds.
  for (int t = 1; t <= T; ++t) {
    v[v.x(t, 0)].lb = k.workspace.xmin;
    v[v.x(t, 0)].ub = k.workspace.xmax;
    v[v.x(t, 1)].lb = k.workspace.ymin;
    v[v.x(t, 1)].ub = k.workspace.ymax;
    for (int i = 2; i < 4; ++i) {
      v[v.x(t, i)].lb = -k.speed_max;
      v[v.x(t, i)].ub = k.speed_max;
    }
    if (t < T) {
      for (std::size_t m = 0; m < s.n_configs(); ++m) {
        v[v.switched(m, t)].lb = 0.0;
        v[v.switched(m, t)].ub = 1.0;
      }
    }
  }
  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < 2; ++i) {
      v[v.u(t, i)].lb = -k.force_max;
      v[v.u(t, i)].ub = k.force_max;
      for (std::size_t idx : {v.u_plus(t, i), v.u_minus(t, i)}) {
        v[idx].lb = 0.0;
        v[idx].ub = k.force_max;
      }
    }
  }
  v[v.obj_const()].lb = 1.0;
  v[v.obj_const()].ub = 1.0;

  // Unrolled dynamics: x_t - sum_tau Phi^(t-tau-1) Gamma u_tau = Phi^t x0.
  const StateMatrix phi = transition_matrix(k);
  const InputMatrix gamma = input_matrix(k);
  std::vector<StateMatrix> phi_pow(static_cast<std::size_t>(T) + 1);
  phi_pow[0] = StateMatrix::Identity();
  for (std::size_t i = 1; i < phi_pow.size(); ++i) phi_pow[i] = phi * phi_pow[i - 1];
  const Eigen::Vector4d x0 = s.x0.stacked();
  for (int t = 1; t <= T; ++t) {
    const Eigen::Vector4d free = phi_pow[static_cast<std::size_t>(t)] * x0;
    for (int i = 0; i < 4; ++i) {
      std::vector<LinearTerm> terms = {{v.x(t, i), 1.0}};
      for (int tau = 0; tau < t; ++tau) {
        const InputMatrix g = phi_pow[static_cast<std::size_t>(t - tau - 1)] * gamma;
        for (int j = 0; j < 2; ++j) terms.push_back({v.u(tau, j), -g(i, j)});
      }
      rows.add(tag("p2_1", {{"t", t}, {"i", i}}), "p2_1", std::move(terms), Sense::Equal, free(i));
    }
  }

  // Footprint half-planes relative to the agent: normal . (p - pos) <= offset.
  std::vector<std::vector<HalfPlane>> fov_planes;
  for (const auto& cfg : s.configs) fov_planes.push_back(footprint_halfplanes(cfg, Point2::Zero()));

  for (int t = 1; t <= T; ++t) {
    const std::size_t px = v.x(t, 0);
    const std::size_t py = v.x(t, 1);
    for (std::size_t m = 0; m < s.n_configs(); ++m) {
      for (std::size_t p = 0; p < s.n_points(); ++p) {
        const Point2& target = s.points[p];
        std::vector<LinearTerm> sum = {{v.in_fov(p, m, t), 3.0}};
        for (int n = 0; n < 3; ++n) {
          const HalfPlane& hp = fov_planes[m][static_cast<std::size_t>(n)];
          const std::size_t bit = v.b(n, p, m, t);
          // normal.(p - pos) <= offset * b + M (1 - b)
          rows.add(tag("p2_5", {{"n", n}, {"p", ll(p)}, {"m", ll(m)}, {"t", t}}), "p2_5",
                   {{px, -hp.normal.x()}, {py, -hp.normal.y()}, {bit, M - hp.offset}}, Sense::LessEqual,
                   M - hp.normal.dot(target));
          sum.push_back({bit, -1.0});
        }
        rows.add(tag("p2_6", {{"p", ll(p)}, {"m", ll(m)}, {"t", t}}), "p2_6", std::move(sum), Sense::LessEqual, 0.0);
      }
    }

    for (std::size_t c = 0; c < s.grid.size(); ++c) {
      std::vector<LinearTerm> sum = {{v.in_cell(c, t), 4.0}};
      for (int f = 0; f < 4; ++f) {
        const HalfPlane& hp = s.grid.cells[c].halfplanes[static_cast<std::size_t>(f)];
        const std::size_t bit = v.cell_face(f, c, t);
        // normal.pos <= offset * b + M (1 - b)
        rows.add(tag("p2_8", {{"k", f}, {"c", ll(c)}, {"t", t}}), "p2_8",
                 {{px, hp.normal.x()}, {py, hp.normal.y()}, {bit, M - hp.offset}}, Sense::LessEqual, M);
        sum.push_back({bit, -1.0});
      }
      rows.add(tag("p2_9", {{"c", ll(c)}, {"t", t}}), "p2_9", std::move(sum), Sense::LessEqual, 0.0);
    }

    std::vector<LinearTerm> one_hot;
    for (std::size_t m = 0; m < s.n_configs(); ++m) one_hot.push_back({v.select(m, t), 1.0});
    rows.add(tag("p2_10", {{"t", t}}), "p2_10", std::move(one_hot), Sense::Equal, 1.0);

    for (std::size_t m = 0; m < s.n_configs(); ++m) {
      for (std::size_t p = 0; p < s.n_points(); ++p) {
        const std::size_t vis = v.visible(p, m, t);
        auto id = [&](const char* prefix) { return tag(prefix, {{"p", ll(p)}, {"m", ll(m)}, {"t", t}}); };
        rows.add(id("p2_11_sel"), "p2_11", {{vis, 1.0}, {v.select(m, t), -1.0}}, Sense::LessEqual, 0.0);
        rows.add(id("p2_11_fov"), "p2_11", {{vis, 1.0}, {v.in_fov(p, m, t), -1.0}}, Sense::LessEqual, 0.0);
        std::vector<LinearTerm> cells = {{vis, 1.0}};
        for (std::size_t c = 0; c < s.grid.size(); ++c) {
          if (table.query(c, p)) cells.push_back({v.in_cell(c, t), -1.0});
        }
        rows.add(id("p2_11_cell"), "p2_11", std::move(cells), Sense::LessEqual, 0.0);
      }
    }
  }

  for (std::size_t p = 0; p < s.n_points(); ++p) {
    std::vector<LinearTerm> cov;
    for (int t = 1; t <= T; ++t) {
      for (std::size_t m = 0; m < s.n_configs(); ++m) cov.push_back({v.visible(p, m, t), 1.0});
    }
    rows.add(tag("p2_12_cov", {{"p", ll(p)}}), "p2_12", std::move(cov), Sense::GreaterEqual, 1.0);
  }

  // Obstacles: some face must hold non-strictly from outside at every t.
  for (std::size_t o = 0; o < obstacles.size(); ++o) {
    for (int t = 1; t <= T; ++t) {
      std::vector<LinearTerm> sum;
      for (std::size_t i = 0; i < obstacles[o].faces.size(); ++i) {
        const HalfPlane& hp = obstacles[o].faces[i];
        const std::size_t bit = v.collision(o, t, i);
        rows.add(tag("o_1", {{"o", ll(o)}, {"t", t}, {"i", ll(i)}}), "o_1",
                 {{v.x(t, 0), -hp.normal.x()}, {v.x(t, 1), -hp.normal.y()}, {bit, -M}}, Sense::LessEqual,
                 -hp.offset);
        sum.push_back({bit, 1.0});
      }
      rows.add(tag("o_2", {{"o", ll(o)}, {"t", t}}), "o_2", std::move(sum), Sense::LessEqual,
               static_cast<double>(obstacles[o].faces.size()) - 1.0);
    }
  }

  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < 2; ++i) {
      rows.add(tag("bnd_split", {{"t", t}, {"i", i}}), "bnd",
               {{v.u(t, i), 1.0}, {v.u_plus(t, i), -1.0}, {v.u_minus(t, i), 1.0}}, Sense::Equal, 0.0);
    }
  }

  for (int t = 1; t < T; ++t) {
    for (std::size_t m = 0; m < s.n_configs(); ++m) {
      const std::size_t sw = v.switched(m, t);
      const std::size_t cur = v.select(m, t);
      const std::size_t next = v.select(m, t + 1);
      rows.add(tag("j3_on", {{"m", ll(m)}, {"t", t}}), "j3", {{sw, 1.0}, {next, -1.0}, {cur, 1.0}},
               Sense::GreaterEqual, 0.0);
      rows.add(tag("j3_off", {{"m", ll(m)}, {"t", t}}), "j3", {{sw, 1.0}, {next, 1.0}, {cur, -1.0}},
               Sense::GreaterEqual, 0.0);
    }
  }

  const Objective j3 = opts.switch_cost == SwitchCost::Quadratic ? objective_j3(v) : objective_j3_linear(v);
  model.objective =
      combine(combine(objective_j1(v), s.weights.w1, objective_j2(v), s.weights.w2), 1.0, j3, s.weights.w3);
  return model;
}

std::set<std::string> CheckReport::families() const {
  std::set<std::string> out;
  for (const auto& v : violations) out.insert(v.family);
  return out;
}

CheckReport check(const MiqpModel& m, const Assignment& a, double tol) {
  if (a.size() != m.vars.size()) throw std::invalid_argument("check: assignment size does not match the model");
  CheckReport report;
  for (const auto& r : m.rows) {
    const double slack = row_slack(r, a);
    if (slack < -tol) report.violations.push_back({r.name, r.family, slack});
  }
  for (std::size_t i = 0; i < m.vars.size(); ++i) {
    const Variable& var = m.vars[i];
    const double val = a[i];
    if (!std::isfinite(val)) {
      report.violations.push_back({"value_" + var.name, "bnd", -kInf});
      continue;
    }
    const double slack = std::min(val - var.lb, var.ub - val);
    if (slack < -tol) report.violations.push_back({"bound_" + var.name, "bnd", slack});
    if (var.type == VarType::Binary) {
      const double frac = std::abs(val - std::round(val));
      if (frac > tol) report.violations.push_back({"integrality_" + var.name, "bnd", -frac});
    }
  }
  return report;
}

Assignment assignment_from_plan(const Scenario& s, const VisibilityTable& table, const MiqpModel& model,
                                std::span<const ControlInput> controls, std::span<const std::size_t> schedule) {
  const auto& v = model.vars;
  const int T = s.horizon;
  if (controls.size() != static_cast<std::size_t>(T) || schedule.size() != static_cast<std::size_t>(T)) {
    throw std::invalid_argument("assignment: controls and schedule must both have length T");
  }
  for (std::size_t m : schedule) {
    if (m >= s.n_configs()) throw std::invalid_argument("assignment: schedule config index out of range");
  }

  Assignment a(v.size(), 0.0);
  const auto traj = rollout(s.x0, controls, s.kinematics);
  for (int t = 1; t <= T; ++t) {
    const Eigen::Vector4d x = traj[static_cast<std::size_t>(t - 1)].stacked();
    for (int i = 0; i < 4; ++i) a[v.x(t, i)] = x(i);
  }
  for (int t = 0; t < T; ++t) {
    const Vector2 u = controls[static_cast<std::size_t>(t)].vec();
    for (int i = 0; i < 2; ++i) {
      a[v.u(t, i)] = u(i);
      a[v.u_plus(t, i)] = std::max(u(i), 0.0);
      a[v.u_minus(t, i)] = std::max(-u(i), 0.0);
    }
  }

  const auto obstacles = s.obstacles();
  std::vector<bool> covered(s.n_points(), false);
  for (int t = 1; t <= T; ++t) {
    const Point2 pos = traj[static_cast<std::size_t>(t - 1)].pos;
    for (std::size_t m = 0; m < s.n_configs(); ++m) {
      const auto planes = footprint_halfplanes(s.configs[m], pos);
      for (std::size_t p = 0; p < s.n_points(); ++p) {
        bool all = true;
        for (int n = 0; n < 3; ++n) {
          const bool holds = planes[static_cast<std::size_t>(n)].contains(s.points[p]);
          a[v.b(n, p, m, t)] = holds ? 1.0 : 0.0;
          all = all && holds;
        }
        a[v.in_fov(p, m, t)] = all ? 1.0 : 0.0;
      }
    }
    for (std::size_t c = 0; c < s.grid.size(); ++c) {
      bool all = true;
      for (int f = 0; f < 4; ++f) {
        const bool holds = s.grid.cells[c].halfplanes[static_cast<std::size_t>(f)].contains(pos);
        a[v.cell_face(f, c, t)] = holds ? 1.0 : 0.0;
        all = all && holds;
      }
      a[v.in_cell(c, t)] = all ? 1.0 : 0.0;
    }
    const std::size_t selected = schedule[static_cast<std::size_t>(t - 1)];
    a[v.select(selected, t)] = 1.0;
    for (std::size_t p : table_visible_points(s, table, s.configs[selected], pos)) {
      if (!covered[p]) {
        covered[p] = true;
        a[v.visible(p, selected, t)] = 1.0;
      }
    }
    for (std::size_t o = 0; o < obstacles.size(); ++o) {
      for (std::size_t i = 0; i < obstacles[o].faces.size(); ++i) {
        const HalfPlane& hp = obstacles[o].faces[i];
        a[v.collision(o, t, i)] = hp.signed_distance(pos) < -kContainmentTol ? 1.0 : 0.0;
      }
    }
    if (t > 1) {
      for (std::size_t m = 0; m < s.n_configs(); ++m) {
        a[v.switched(m, t - 1)] = std::abs(a[v.select(m, t)] - a[v.select(m, t - 1)]);
      }
    }
  }
  a[v.obj_const()] = 1.0;
  return a;
}

}  // namespace coverage_miqp
