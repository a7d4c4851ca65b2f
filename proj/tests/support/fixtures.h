#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "coverage_miqp/scenario.h"

namespace fixtures {

using coverage_miqp::Point2;
using coverage_miqp::ScenarioSpec;

// Default setup with an explicit point region and the given workspace.
inline ScenarioSpec points_spec(std::vector<Point2> points, coverage_miqp::Box workspace) {
  ScenarioSpec s = coverage_miqp::default_spec();
  s.region.kind = coverage_miqp::RegionSpec::Kind::Points;
  s.region.points = std::move(points);
  s.kinematics.workspace = workspace;
  s.x0.pos = {workspace.xmin, workspace.ymin};
  return s;
}

// Three-point triangle under a camera that looks down (theta 0) or up
// (theta 180); the agent starts above and left of it, at rest.
inline ScenarioSpec tiny_spec(int horizon = 4) {
  ScenarioSpec s = points_spec({{9, 6}, {11, 6}, {10, 7.5}}, {0, 0, 20, 20});
  s.x0.pos = {8, 12};
  s.angles_deg = {0.0, 180.0};
  s.zooms = {1.0};
  s.grid_nx = 2;
  s.grid_ny = 2;
  s.horizon = horizon;
  s.visibility.n_s = 6;
  s.solver.control_grid = {-3.0, 0.0, 3.0};
  return s;
}

// Counterclockwise, strictly convex polygon: sorted random angles on an ellipse.
inline std::vector<Point2> random_convex_ccw(std::mt19937_64& rng, Point2 center, double rmin, double rmax, int nmin,
                                             int nmax) {
  std::uniform_real_distribution<double> rad(rmin, rmax);
  std::uniform_int_distribution<int> count(nmin, nmax);
  const double rx = rad(rng);
  const double ry = rad(rng);
  const int n = count(rng);
  // Jittered even spacing keeps neighbours apart.
  std::uniform_real_distribution<double> jitter(-0.3, 0.3);
  const double offset = std::uniform_real_distribution<double>(0, 2 * std::numbers::pi)(rng);
  std::vector<Point2> pts;
  for (int i = 0; i < n; ++i) {
    const double a = offset + 2 * std::numbers::pi * (i + jitter(rng)) / n;
    pts.emplace_back(center.x() + rx * std::cos(a), center.y() + ry * std::sin(a));
  }
  return pts;
}

}  // namespace fixtures
