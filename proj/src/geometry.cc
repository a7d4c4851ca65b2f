#include "coverage_miqp/geometry.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace coverage_miqp {

namespace {

// Turn a -> b -> c expressed as the distance of b from the chord a -> c;
// positive for a left (counterclockwise) turn.
double turn_distance(const Point2& a, const Point2& b, const Point2& c) {
  const double base = (c - a).norm();
  if (base < kDegenerateTol) return 0.0;
  return cross(a, b, c) / base;
}

}  // namespace

double cross(const Point2& a, const Point2& b, const Point2& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

ConvexPolygon::ConvexPolygon(std::vector<Point2> vertices) : vertices_(std::move(vertices)) {
  const std::size_t n = vertices_.size();
  if (n < 3) throw std::invalid_argument("ConvexPolygon: need at least 3 vertices");
  for (const auto& v : vertices_) {
    if (!v.allFinite()) throw std::invalid_argument("ConvexPolygon: non-finite vertex");
  }
  if (area() <= 0.0) throw std::invalid_argument("ConvexPolygon: vertices must be counterclockwise");

  double turning = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& prev = vertices_[(i + n - 1) % n];
    const Point2& cur = vertices_[i];
    const Point2& next = vertices_[(i + 1) % n];
    if ((next - cur).norm() < kDegenerateTol) {
      throw std::invalid_argument("ConvexPolygon: degenerate edge at vertex " + std::to_string(i));
    }
    if (turn_distance(prev, cur, next) <= kContainmentTol) {
      throw std::invalid_argument("ConvexPolygon: not strictly convex at vertex " + std::to_string(i));
    }
    const Vector2 e0 = cur - prev;
    const Vector2 e1 = next - cur;
    turning += std::atan2(e0.x() * e1.y() - e0.y() * e1.x(), e0.dot(e1));
  }
  if (std::abs(turning - 2.0 * std::numbers::pi) > 1e-6) {
    throw std::invalid_argument("ConvexPolygon: self-intersecting vertex order");
  }
}

Point2 ConvexPolygon::centroid() const {
  Point2 sum = Point2::Zero();
  for (const auto& v : vertices_) sum += v;
  return sum / static_cast<double>(vertices_.size());
}

double ConvexPolygon::area() const {
  double twice = 0.0;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = vertices_[i];
    const Point2& b = vertices_[(i + 1) % n];
    twice += a.x() * b.y() - b.x() * a.y();
  }
  return 0.5 * twice;
}

Point2 rotate(const Point2& p, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c * p.x() + s * p.y(), -s * p.x() + c * p.y()};
}

std::optional<SegmentHit> segment_intersect(const Segment& ray, const Segment& seg) {
  // [d, a - b] [s r]^T = a - o, with d the ray direction and a, b the
  // segment endpoints.
  const Vector2 d = ray.b - ray.a;
  const Vector2 e = seg.a - seg.b;
  const Vector2 rhs = seg.a - ray.a;
  const double det = d.x() * e.y() - e.x() * d.y();
  if (std::abs(det) < kDegenerateTol) return std::nullopt;
  const double s = (rhs.x() * e.y() - e.x() * rhs.y()) / det;
  const double r = (d.x() * rhs.y() - rhs.x() * d.y()) / det;
  if (s < 0.0 || s > 1.0 || r < 0.0 || r > 1.0) return std::nullopt;
  return SegmentHit{s, r};
}

std::optional<std::size_t> nearest_hit(const Segment& ray, std::span<const Segment> segments) {
  std::optional<std::size_t> best;
  double best_s = 0.0;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto hit = segment_intersect(ray, segments[i]);
    if (!hit) continue;
    if (!best || hit->s < best_s - kDegenerateTol) {
      best = i;
      best_s = hit->s;
    }
  }
  return best;
}

std::vector<HalfPlane> halfplanes(std::span<const Point2> vertices) {
  const std::size_t n = vertices.size();
  Point2 centroid = Point2::Zero();
  for (const auto& v : vertices) centroid += v;
  centroid /= static_cast<double>(n);

  std::vector<HalfPlane> planes;
  planes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& v1 = vertices[i];
    const Point2& v2 = vertices[(i + 1) % n];
    if ((v2 - v1).norm() < kDegenerateTol) {
      throw std::invalid_argument("halfplanes: degenerate edge " + std::to_string(i));
    }
    // Line a x + b y = c through v1 and v2.
    HalfPlane hp{Vector2(v1.y() - v2.y(), v2.x() - v1.x()), v2.x() * v1.y() - v1.x() * v2.y()};
    if (hp.residual(centroid) > 0.0) {
      hp.normal = -hp.normal;
      hp.offset = -hp.offset;
    }
    planes.push_back(hp);
  }
  return planes;
}

std::vector<HalfPlane> halfplanes(const ConvexPolygon& poly) { return halfplanes(poly.vertices()); }

bool contains(std::span<const HalfPlane> planes, const Point2& p, double tol) {
  return std::all_of(planes.begin(), planes.end(),
                     [&](const HalfPlane& hp) { return hp.contains(p, tol); });
}

bool contains(const ConvexPolygon& poly, const Point2& p, double tol) {
  return contains(halfplanes(poly), p, tol);
}

ConvexPolygon convex_hull(std::span<const Point2> points) {
  std::vector<Point2> pts(points.begin(), points.end());
  for (const auto& p : pts) {
    if (!p.allFinite()) throw std::invalid_argument("convex_hull: non-finite point");
  }
  std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Point2& a, const Point2& b) { return (a - b).norm() < kDegenerateTol; }),
            pts.end());
  if (pts.size() < 3) throw std::invalid_argument("convex_hull: fewer than 3 distinct points");

  // Andrew's monotone chain; a point survives only as a strict left turn.
  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  auto pop_non_left = [&](const Point2& p, std::size_t floor) {
    while (k >= floor && turn_distance(hull[k - 2], hull[k - 1], p) <= kContainmentTol) --k;
  };
  for (const auto& p : pts) {
    pop_non_left(p, 2);
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
    pop_non_left(*it, lower);
    hull[k++] = *it;
  }
  hull.resize(k - 1);
  if (hull.size() < 3) throw std::invalid_argument("convex_hull: points are collinear");
  return ConvexPolygon(std::move(hull));
}

}  // namespace coverage_miqp
