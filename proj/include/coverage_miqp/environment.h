#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "coverage_miqp/geometry.h"
#include "coverage_miqp/kinematics.h"

namespace coverage_miqp {

// Piecewise-linear region boundary: the convex hull of the target points.
struct Boundary {
  std::vector<Point2> points;
  // Hull edges in counterclockwise order; segments[i] lies on halfplanes[i].
  std::vector<Segment> segments;
  // Outward normals: q is strictly inside the region iff normal . q < offset
  // for every face.
  std::vector<HalfPlane> halfplanes;
  // For each point, the indices of the (two) hull segments it belongs to.
  std::vector<std::vector<std::size_t>> point_to_segment;
};

struct Cell {
  Box box;
  std::vector<HalfPlane> halfplanes;  // exactly four

  Point2 center() const { return {0.5 * (box.xmin + box.xmax), 0.5 * (box.ymin + box.ymax)}; }
};

// Cells are row-major from the lower-left corner: index = iy * nx + ix.
struct Grid {
  std::vector<Cell> cells;
  int nx = 0;
  int ny = 0;
  Box bounds;

  std::size_t size() const { return cells.size(); }
  // Lowest-index cell whose closed rectangle contains p.
  std::optional<std::size_t> cell_of(const Point2& p) const;
  // Every cell whose closed rectangle contains p (one, or several on shared edges).
  std::vector<std::size_t> cells_containing(const Point2& p) const;
};

// A convex obstacle as its outward face half-planes.
struct Obstacle {
  std::vector<HalfPlane> faces;
};

// n samples (x_i, a exp(-(x_i - b)^2 / (2 c^2))) with x_i evenly spaced over
// [x_lo, x_hi]. Throws std::invalid_argument for n < 3 or c == 0.
std::vector<Point2> bell_curve_points(double a, double b, double c, int n, double x_lo, double x_hi);

// Throws std::invalid_argument when a point is not a vertex of the hull of
// the set (it could never terminate a hull segment).
Boundary build_boundary(std::span<const Point2> points);

// Throws std::invalid_argument for nx or ny < 1.
Grid build_grid(const Box& bounds, int nx, int ny);

// Strict interior test: every face residual below -1e-9 m.
bool inside_region(std::span<const HalfPlane> faces, const Point2& q);
inline bool inside_region(const Boundary& b, const Point2& q) { return inside_region(b.halfplanes, q); }

}  // namespace coverage_miqp
