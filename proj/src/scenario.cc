#include "coverage_miqp/scenario.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <stdexcept>

namespace coverage_miqp {

using nlohmann::json;

namespace {

double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

void expect_keys(const json& obj, std::initializer_list<const char*> required,
                 std::initializer_list<const char*> optional, const std::string& where) {
  if (!obj.is_object()) throw std::invalid_argument(where + ": expected an object");
  std::set<std::string> known;
  for (const char* k : required) {
    known.insert(k);
    if (!obj.contains(k)) throw std::invalid_argument(where + ": missing key '" + k + "'");
  }
  for (const char* k : optional) known.insert(k);
  for (const auto& item : obj.items()) {
    if (!known.count(item.key())) throw std::invalid_argument(where + ": unknown key '" + item.key() + "'");
  }
}

double number(const json& obj, const char* key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number()) throw std::invalid_argument(where + "." + key + ": expected a number");
  return v.get<double>();
}

std::int64_t integer(const json& obj, const char* key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw std::invalid_argument(where + "." + key + ": expected an integer");
  return v.get<std::int64_t>();
}

std::vector<double> numbers(const json& v, const std::string& where) {
  if (!v.is_array()) throw std::invalid_argument(where + ": expected an array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw std::invalid_argument(where + ": expected numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

Point2 point(const json& v, const std::string& where) {
  const auto xy = numbers(v, where);
  if (xy.size() != 2) throw std::invalid_argument(where + ": expected [x, y]");
  return {xy[0], xy[1]};
}

std::vector<Point2> point_list(const json& v, const std::string& where) {
  if (!v.is_array()) throw std::invalid_argument(where + ": expected an array of [x, y]");
  std::vector<Point2> out;
  for (const auto& e : v) out.push_back(point(e, where));
  return out;
}

json point_json(const Point2& p) { return json::array({p.x(), p.y()}); }

json point_list_json(const std::vector<Point2>& pts) {
  json arr = json::array();
  for (const auto& p : pts) arr.push_back(point_json(p));
  return arr;
}

}  // namespace

std::vector<Obstacle> Scenario::obstacles() const {
  std::vector<Obstacle> out;
  if (!traversable) out.push_back({boundary.halfplanes});
  for (const auto& poly : extra_obstacles) out.push_back({halfplanes(poly)});
  return out;
}

ScenarioSpec default_spec() {
  ScenarioSpec s;
  s.kinematics.dt = 1.0;
  s.kinematics.mass = 3.35;
  s.kinematics.drag = 0.2;
  s.kinematics.force_max = 3.0;
  s.kinematics.speed_max = 2.0;
  s.kinematics.workspace = {0.0, 0.0, 60.0, 20.0};
  s.x0.pos = {30.0, 6.0};
  s.x0.vel = {0.0, 0.0};
  s.apex_angle_deg = 30.0;
  s.range_m = 7.0;
  s.angles_deg = {-85.0, -28.0, 28.0, 85.0};
  s.zooms = {1.0, 2.0};
  s.ray_count = 5;
  s.region = RegionSpec{};
  s.traversable = false;
  s.grid_nx = 4;
  s.grid_ny = 4;
  s.horizon = 10;
  s.weights = {10.0, 0.5, 0.1};
  s.big_m = 1e5;
  s.visibility = {15, 0};
  s.solver = SolverSettings{};
  return s;
}

Scenario build_scenario(const ScenarioSpec& spec) {
  Scenario s;
  s.kinematics = spec.kinematics;
  s.kinematics.validate();
  s.x0 = spec.x0;
  if (!s.x0.pos.allFinite() || !s.x0.vel.allFinite()) throw std::invalid_argument("scenario: x0 must be finite");
  s.fov = {deg2rad(spec.apex_angle_deg), spec.range_m};
  s.fov.validate();
  for (double a : spec.angles_deg) s.angles.push_back(deg2rad(a));
  s.zooms = spec.zooms;
  s.configs = enumerate_configs(s.angles, s.zooms, s.fov);
  if (spec.ray_count < 2) throw std::invalid_argument("scenario: ray_count must be >= 2");
  s.ray_count = spec.ray_count;

  if (spec.region.kind == RegionSpec::Kind::Bell) {
    const auto& r = spec.region;
    s.points = bell_curve_points(r.a, r.b, r.c, r.n, r.x_lo, r.x_hi);
  } else {
    s.points = spec.region.points;
  }
  if (s.points.empty()) throw std::invalid_argument("scenario: region has no points");
  s.traversable = spec.traversable;
  if (!s.traversable) {
    s.boundary = build_boundary(s.points);
  } else {
    s.boundary.points = s.points;
    s.boundary.point_to_segment.assign(s.points.size(), {});
  }

  s.grid = build_grid(s.kinematics.workspace, spec.grid_nx, spec.grid_ny);
  if (spec.horizon < 1) throw std::invalid_argument("scenario: horizon must be >= 1");
  s.horizon = spec.horizon;
  const auto& w = spec.weights;
  for (double v : {w.w1, w.w2, w.w3}) {
    if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument("scenario: weights must be finite and >= 0");
  }
  s.weights = w;
  if (!std::isfinite(spec.big_m) || spec.big_m <= 0.0) throw std::invalid_argument("scenario: big_m must be > 0");
  s.big_m = spec.big_m;
  if (spec.visibility.n_s < 1) throw std::invalid_argument("scenario: visibility.n_s must be >= 1");
  s.visibility = spec.visibility;

  s.solver = spec.solver;
  if (s.solver.control_grid.empty()) throw std::invalid_argument("scenario: solver.control_grid is empty");
  for (double f : s.solver.control_grid) {
    if (!std::isfinite(f) || std::abs(f) > s.kinematics.force_max + 1e-9) {
      throw std::invalid_argument("scenario: control_grid values must lie within +-force_max");
    }
  }
  if (!(s.solver.time_limit_s > 0.0)) throw std::invalid_argument("scenario: solver.time_limit_s must be > 0");
  if (s.solver.max_nodes < 1) throw std::invalid_argument("scenario: solver.max_nodes must be >= 1");

  for (const auto& verts : spec.obstacles) s.extra_obstacles.push_back(convex_hull(verts));

  if (!state_within_bounds(s.x0, s.kinematics)) {
    throw std::invalid_argument("scenario: x0 violates the state bounds");
  }
  for (const auto& obstacle : s.obstacles()) {
    if (inside_region(obstacle.faces, s.x0.pos)) throw std::invalid_argument("scenario: x0 lies inside an obstacle");
  }
  return s;
}

json to_json(const ScenarioSpec& s) {
  json doc;
  const auto& k = s.kinematics;
  doc["kinematics"] = {{"dt", k.dt},
                       {"mass", k.mass},
                       {"drag", k.drag},
                       {"force_max", k.force_max},
                       {"speed_max", k.speed_max},
                       {"workspace", {k.workspace.xmin, k.workspace.ymin, k.workspace.xmax, k.workspace.ymax}}};
  doc["x0"] = {{"pos", point_json(s.x0.pos)}, {"vel", point_json(s.x0.vel)}};
  doc["fov"] = {{"apex_angle_deg", s.apex_angle_deg}, {"range_m", s.range_m}};
  doc["angles_deg"] = s.angles_deg;
  doc["zooms"] = s.zooms;
  doc["ray_count"] = s.ray_count;
  if (s.region.kind == RegionSpec::Kind::Bell) {
    const auto& r = s.region;
    doc["region"] = {{"type", "bell"}, {"a", r.a}, {"b", r.b}, {"c", r.c}, {"n", r.n}, {"x_range", {r.x_lo, r.x_hi}}};
  } else {
    doc["region"] = {{"type", "points"}, {"points", point_list_json(s.region.points)}};
  }
  doc["traversable"] = s.traversable;
  doc["grid"] = {{"nx", s.grid_nx}, {"ny", s.grid_ny}};
  doc["horizon"] = s.horizon;
  doc["weights"] = {{"w1", s.weights.w1}, {"w2", s.weights.w2}, {"w3", s.weights.w3}};
  doc["big_m"] = s.big_m;
  doc["visibility"] = {{"n_s", s.visibility.n_s}, {"seed", s.visibility.seed}};
  doc["solver"] = {{"control_grid", s.solver.control_grid},
                   {"time_limit_s", s.solver.time_limit_s},
                   {"max_nodes", s.solver.max_nodes}};
  json obstacles = json::array();
  for (const auto& poly : s.obstacles) obstacles.push_back(point_list_json(poly));
  doc["obstacles"] = obstacles;
  return doc;
}

ScenarioSpec spec_from_json(const json& doc) {
  ScenarioSpec s;
  try {
    expect_keys(doc,
                {"kinematics", "x0", "fov", "angles_deg", "zooms", "ray_count", "region", "traversable", "grid",
                 "horizon", "weights", "big_m", "visibility", "solver"},
                {"obstacles"}, "scenario");

    const json& k = doc.at("kinematics");
    expect_keys(k, {"dt", "mass", "drag", "force_max", "speed_max", "workspace"}, {}, "kinematics");
    s.kinematics.dt = number(k, "dt", "kinematics");
    s.kinematics.mass = number(k, "mass", "kinematics");
    s.kinematics.drag = number(k, "drag", "kinematics");
    s.kinematics.force_max = number(k, "force_max", "kinematics");
    s.kinematics.speed_max = number(k, "speed_max", "kinematics");
    const auto ws = numbers(k.at("workspace"), "kinematics.workspace");
    if (ws.size() != 4) throw std::invalid_argument("kinematics.workspace: expected [xmin, ymin, xmax, ymax]");
    s.kinematics.workspace = {ws[0], ws[1], ws[2], ws[3]};

    const json& x0 = doc.at("x0");
    expect_keys(x0, {"pos", "vel"}, {}, "x0");
    s.x0.pos = point(x0.at("pos"), "x0.pos");
    s.x0.vel = point(x0.at("vel"), "x0.vel");

    const json& fov = doc.at("fov");
    expect_keys(fov, {"apex_angle_deg", "range_m"}, {}, "fov");
    s.apex_angle_deg = number(fov, "apex_angle_deg", "fov");
    s.range_m = number(fov, "range_m", "fov");

    s.angles_deg = numbers(doc.at("angles_deg"), "angles_deg");
    s.zooms = numbers(doc.at("zooms"), "zooms");
    s.ray_count = static_cast<int>(integer(doc, "ray_count", "scenario"));

    const json& region = doc.at("region");
    if (!region.is_object() || !region.contains("type") || !region.at("type").is_string()) {
      throw std::invalid_argument("region: missing string key 'type'");
    }
    const std::string type = region.at("type").get<std::string>();
    if (type == "bell") {
      expect_keys(region, {"type", "a", "b", "c", "n", "x_range"}, {}, "region");
      s.region.kind = RegionSpec::Kind::Bell;
      s.region.a = number(region, "a", "region");
      s.region.b = number(region, "b", "region");
      s.region.c = number(region, "c", "region");
      s.region.n = static_cast<int>(integer(region, "n", "region"));
      const auto xr = numbers(region.at("x_range"), "region.x_range");
      if (xr.size() != 2) throw std::invalid_argument("region.x_range: expected [lo, hi]");
      s.region.x_lo = xr[0];
      s.region.x_hi = xr[1];
    } else if (type == "points") {
      expect_keys(region, {"type", "points"}, {}, "region");
      s.region.kind = RegionSpec::Kind::Points;
      s.region.points = point_list(region.at("points"), "region.points");
    } else {
      throw std::invalid_argument("region.type: expected 'bell' or 'points'");
    }

    if (!doc.at("traversable").is_boolean()) throw std::invalid_argument("traversable: expected a boolean");
    s.traversable = doc.at("traversable").get<bool>();

    const json& grid = doc.at("grid");
    expect_keys(grid, {"nx", "ny"}, {}, "grid");
    s.grid_nx = static_cast<int>(integer(grid, "nx", "grid"));
    s.grid_ny = static_cast<int>(integer(grid, "ny", "grid"));

    s.horizon = static_cast<int>(integer(doc, "horizon", "scenario"));

    const json& w = doc.at("weights");
    expect_keys(w, {"w1", "w2", "w3"}, {}, "weights");
    s.weights = {number(w, "w1", "weights"), number(w, "w2", "weights"), number(w, "w3", "weights")};

    s.big_m = number(doc, "big_m", "scenario");

    const json& vis = doc.at("visibility");
    expect_keys(vis, {"n_s", "seed"}, {}, "visibility");
    s.visibility.n_s = static_cast<int>(integer(vis, "n_s", "visibility"));
    const std::int64_t seed = integer(vis, "seed", "visibility");
    if (seed < 0) throw std::invalid_argument("visibility.seed: expected a non-negative integer");
    s.visibility.seed = static_cast<std::uint64_t>(seed);

    const json& solver = doc.at("solver");
    expect_keys(solver, {"control_grid", "time_limit_s", "max_nodes"}, {}, "solver");
    s.solver.control_grid = numbers(solver.at("control_grid"), "solver.control_grid");
    s.solver.time_limit_s = number(solver, "time_limit_s", "solver");
    s.solver.max_nodes = integer(solver, "max_nodes", "solver");

    if (doc.contains("obstacles")) {
      const json& obs = doc.at("obstacles");
      if (!obs.is_array()) throw std::invalid_argument("obstacles: expected an array of polygons");
      for (const auto& poly : obs) s.obstacles.push_back(point_list(poly, "obstacles"));
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("scenario: ") + e.what());
  }
  return s;
}

ScenarioSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open scenario file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("scenario " + path.string() + ": " + e.what());
  }
  return spec_from_json(doc);
}

void save_spec(const ScenarioSpec& spec, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_json(spec).dump(2) << '\n';
}

void apply_override(json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw std::invalid_argument("override '" + std::string(assignment) + "': expected key=value");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string value(assignment.substr(eq + 1));

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (!node->is_object() || !node->contains(part)) {
      throw std::invalid_argument("override: unknown key '" + key + "'");
    }
    node = &(*node)[part];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  json parsed = json::parse(value, nullptr, /*allow_exceptions=*/false);
  *node = parsed.is_discarded() ? json(value) : parsed;
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string to_hex(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string scenario_hash(const ScenarioSpec& spec) { return to_hex(fnv1a(to_json(spec).dump())); }

}  // namespace coverage_miqp
