#include "coverage_miqp/environment.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace coverage_miqp {

std::vector<Point2> bell_curve_points(double a, double b, double c, int n, double x_lo, double x_hi) {
  if (n < 3) throw std::invalid_argument("bell curve: need at least 3 samples");
  if (c == 0.0) throw std::invalid_argument("bell curve: c must be non-zero");
  std::vector<Point2> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double x = x_lo + (x_hi - x_lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    const double y = a * std::exp(-(x - b) * (x - b) / (2.0 * c * c));
    pts.emplace_back(x, y);
  }
  return pts;
}

Boundary build_boundary(std::span<const Point2> points) {
  const ConvexPolygon hull = convex_hull(points);
  const auto& verts = hull.vertices();

  Boundary out;
  out.points.assign(points.begin(), points.end());
  const std::size_t n_faces = verts.size();
  for (std::size_t i = 0; i < n_faces; ++i) out.segments.push_back({verts[i], verts[(i + 1) % n_faces]});
  out.halfplanes = halfplanes(hull);

  out.point_to_segment.resize(out.points.size());
  for (std::size_t p = 0; p < out.points.size(); ++p) {
    std::optional<std::size_t> vertex;
    for (std::size_t v = 0; v < n_faces; ++v) {
      if ((verts[v] - out.points[p]).norm() <= kContainmentTol) {
        vertex = v;
        break;
      }
    }
    if (!vertex) {
      throw std::invalid_argument("boundary: point " + std::to_string(p) + " is not a hull vertex");
    }
    out.point_to_segment[p] = {(*vertex + n_faces - 1) % n_faces, *vertex};
    std::sort(out.point_to_segment[p].begin(), out.point_to_segment[p].end());
  }
  if (n_faces != out.points.size()) {
    throw std::invalid_argument("boundary: duplicate points");
  }
  return out;
}

Grid build_grid(const Box& bounds, int nx, int ny) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("grid: nx and ny must be >= 1");
  if (!(bounds.xmax > bounds.xmin) || !(bounds.ymax > bounds.ymin)) {
    throw std::invalid_argument("grid: bounds must have positive extent");
  }
  Grid g;
  g.nx = nx;
  g.ny = ny;
  g.bounds = bounds;
  const double w = bounds.width() / nx;
  const double h = bounds.height() / ny;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      Cell cell;
      // Outer edges snap to the bounds so the cells tile them exactly.
      cell.box.xmin = bounds.xmin + ix * w;
      cell.box.xmax = ix + 1 == nx ? bounds.xmax : bounds.xmin + (ix + 1) * w;
      cell.box.ymin = bounds.ymin + iy * h;
      cell.box.ymax = iy + 1 == ny ? bounds.ymax : bounds.ymin + (iy + 1) * h;
      const std::vector<Point2> corners = {{cell.box.xmin, cell.box.ymin},
                                           {cell.box.xmax, cell.box.ymin},
                                           {cell.box.xmax, cell.box.ymax},
                                           {cell.box.xmin, cell.box.ymax}};
      cell.halfplanes = halfplanes(std::span<const Point2>(corners));
      g.cells.push_back(std::move(cell));
    }
  }
  return g;
}

std::optional<std::size_t> Grid::cell_of(const Point2& p) const {
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (contains(cells[c].halfplanes, p)) return c;
  }
  return std::nullopt;
}

std::vector<std::size_t> Grid::cells_containing(const Point2& p) const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (contains(cells[c].halfplanes, p)) out.push_back(c);
  }
  return out;
}

bool inside_region(std::span<const HalfPlane> faces, const Point2& q) {
  if (faces.empty()) return false;
  return std::all_of(faces.begin(), faces.end(),
                     [&](const HalfPlane& hp) { return hp.signed_distance(q) < -kContainmentTol; });
}

}  // namespace coverage_miqp
