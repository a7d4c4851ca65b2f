#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace coverage_miqp {

using Point2 = Eigen::Vector2d;
using Vector2 = Eigen::Vector2d;

// Absolute tolerance (meters) used for every containment test.
inline constexpr double kContainmentTol = 1e-9;
// Determinant / length threshold below which a 2x2 system or edge is degenerate.
inline constexpr double kDegenerateTol = 1e-12;

struct Segment {
  Point2 a;
  Point2 b;

  Point2 at(double s) const { return a + s * (b - a); }
  double length() const { return (b - a).norm(); }
};

// normal . x <= offset is the inside of the half-plane. The normal is not
// normalized; signed_distance() divides by its norm.
struct HalfPlane {
  Vector2 normal;
  double offset = 0.0;

  double residual(const Point2& p) const { return normal.dot(p) - offset; }
  double signed_distance(const Point2& p) const { return residual(p) / normal.norm(); }
  bool contains(const Point2& p, double tol = kContainmentTol) const {
    return signed_distance(p) <= tol;
  }
};

// Counterclockwise, strictly convex polygon with at least three vertices.
class ConvexPolygon {
 public:
  // Throws std::invalid_argument if the vertex list is not a strictly convex
  // CCW polygon.
  explicit ConvexPolygon(std::vector<Point2> vertices);

  const std::vector<Point2>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  Point2 centroid() const;
  double area() const;

 private:
  std::vector<Point2> vertices_;
};

struct SegmentHit {
  double s = 0.0;  // parameter along the ray
  double r = 0.0;  // parameter along the segment
};

// R(theta) = [[cos, sin], [-sin, cos]]: positive theta rotates clockwise.
Point2 rotate(const Point2& p, double theta);

// Solves ray.a + s (ray.b - ray.a) = seg.a + r (seg.b - seg.a). Returns the
// pair only when both parameters lie in [0, 1]; parallel or degenerate
// configurations (|det| < 1e-12) never intersect.
std::optional<SegmentHit> segment_intersect(const Segment& ray, const Segment& seg);

// Index of the segment hit at the smallest ray parameter. Ties within 1e-12
// resolve to the lower index.
std::optional<std::size_t> nearest_hit(const Segment& ray, std::span<const Segment> segments);

// One half-plane per polygon edge (edge i joins vertex i to vertex i+1),
// oriented so the polygon interior is normal . x <= offset.
std::vector<HalfPlane> halfplanes(const ConvexPolygon& poly);

// Same construction from raw vertices; only the degenerate-edge check applies.
std::vector<HalfPlane> halfplanes(std::span<const Point2> vertices);

// True when p satisfies every half-plane within tol.
bool contains(std::span<const HalfPlane> planes, const Point2& p, double tol = kContainmentTol);
bool contains(const ConvexPolygon& poly, const Point2& p, double tol = kContainmentTol);

// Counterclockwise hull with collinear points removed. Throws
// std::invalid_argument for fewer than three distinct or all-collinear points.
ConvexPolygon convex_hull(std::span<const Point2> points);

// Twice the signed area of triangle (a, b, c); positive for a left turn.
double cross(const Point2& a, const Point2& b, const Point2& c);

}  // namespace coverage_miqp
