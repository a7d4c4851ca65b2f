#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "coverage_miqp/environment.h"
#include "coverage_miqp/kinematics.h"
#include "coverage_miqp/sensing.h"

namespace coverage_miqp {

struct Weights {
  double w1 = 1.0;
  double w2 = 0.0;
  double w3 = 0.0;
};

struct VisibilitySettings {
  int n_s = 15;
  std::uint64_t seed = 0;
};

struct SolverSettings {
  std::vector<double> control_grid = {-3.0, 0.0, 3.0};
  double time_limit_s = 60.0;
  std::int64_t max_nodes = 5'000'000;
};

struct RegionSpec {
  enum class Kind { Bell, Points };
  Kind kind = Kind::Bell;
  // Bell parameters.
  double a = 10.0;
  double b = 40.0;
  double c = 2.0;
  int n = 11;
  double x_lo = 37.5;
  double x_hi = 42.5;
  // Explicit point list.
  std::vector<Point2> points;
};

// File-level description of a planning problem. Angles are in degrees here
// and only here.
struct ScenarioSpec {
  KinematicParams kinematics;
  AgentState x0;
  double apex_angle_deg = 30.0;
  double range_m = 7.0;
  std::vector<double> angles_deg;
  std::vector<double> zooms;
  int ray_count = 5;
  RegionSpec region;
  bool traversable = false;
  int grid_nx = 4;
  int grid_ny = 4;
  int horizon = 10;
  Weights weights;
  double big_m = 1e5;
  VisibilitySettings visibility;
  SolverSettings solver;
  std::vector<std::vector<Point2>> obstacles;
};

// Fully built problem: geometry derived, invariants checked.
struct Scenario {
  KinematicParams kinematics;
  AgentState x0;
  FovParams fov;
  std::vector<double> angles;  // rad
  std::vector<double> zooms;
  int ray_count = 5;
  std::vector<Point2> points;
  bool traversable = false;
  // Empty segments/half-planes when the region is traversable.
  Boundary boundary;
  Grid grid;
  int horizon = 1;
  Weights weights;
  double big_m = 1e5;
  std::vector<ConvexPolygon> extra_obstacles;
  VisibilitySettings visibility;
  SolverSettings solver;
  std::vector<FovConfig> configs;

  std::size_t n_points() const { return points.size(); }
  std::size_t n_configs() const { return configs.size(); }
  // Region hull (unless traversable) followed by every extra obstacle.
  std::vector<Obstacle> obstacles() const;
};

// Default setup: m = 3.35 kg, eta = 0.2, |f| <= 3 N,
// |v| <= 2 m/s, 30 deg / 7 m footprint, zooms {1, 2}, four gimbal angles,
// five rays, bell region with 11 points, 4x4 grid over 60 x 20 m, n_s = 15.
ScenarioSpec default_spec();

// Throws std::invalid_argument on any broken invariant (including x0 inside
// an obstacle).
Scenario build_scenario(const ScenarioSpec& spec);

nlohmann::json to_json(const ScenarioSpec& spec);
// Strict: unknown or missing keys throw std::invalid_argument.
ScenarioSpec spec_from_json(const nlohmann::json& doc);

ScenarioSpec load_spec(const std::filesystem::path& path);
void save_spec(const ScenarioSpec& spec, const std::filesystem::path& path);

// Applies "dotted.key=value" to a scenario document. The key must already
// exist; the value is parsed as JSON when possible, else kept as a string.
void apply_override(nlohmann::json& doc, std::string_view assignment);

// FNV-1a over the canonical JSON text, as 16 hex digits.
std::string scenario_hash(const ScenarioSpec& spec);

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string to_hex(std::uint64_t value);

}  // namespace coverage_miqp
