#include "coverage_miqp/sensing.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace coverage_miqp {

void FovParams::validate() const {
  if (!std::isfinite(apex_angle) || apex_angle <= 0.0 || apex_angle >= std::numbers::pi) {
    throw std::invalid_argument("fov: apex angle must lie in (0, pi)");
  }
  if (!std::isfinite(range) || range <= 0.0) throw std::invalid_argument("fov: range must be > 0");
}

Triangle base_vertices(const FovParams& f, double zoom) {
  if (!std::isfinite(zoom) || zoom < 1.0) throw std::invalid_argument("fov: zoom level must be >= 1");
  const double h = f.range * zoom;
  const double phi = f.apex_angle / zoom;
  const double side = h / std::cos(phi / 2.0);
  const double base = 2.0 * side * std::sin(phi / 2.0);
  return {Point2(0.0, 0.0), Point2(-base / 2.0, -h), Point2(base / 2.0, -h)};
}

std::vector<FovConfig> enumerate_configs(std::span<const double> angles, std::span<const double> zooms,
                                         const FovParams& f) {
  if (angles.empty() || zooms.empty()) throw std::invalid_argument("fov: empty angle or zoom set");
  f.validate();
  std::vector<FovConfig> configs;
  configs.reserve(angles.size() * zooms.size());
  for (double zoom : zooms) {
    const Triangle unrotated = base_vertices(f, zoom);
    for (double theta : angles) {
      FovConfig c;
      c.index = configs.size();
      c.theta = theta;
      c.zoom = zoom;
      for (std::size_t i = 0; i < 3; ++i) c.base_vertices[i] = rotate(unrotated[i], theta);
      configs.push_back(c);
    }
  }
  return configs;
}

ConvexPolygon place(const FovConfig& c, const Point2& pos) {
  return ConvexPolygon({c.base_vertices[0] + pos, c.base_vertices[1] + pos, c.base_vertices[2] + pos});
}

std::vector<HalfPlane> footprint_halfplanes(const FovConfig& c, const Point2& pos) {
  const std::array<Point2, 3> v = {c.base_vertices[0] + pos, c.base_vertices[1] + pos, c.base_vertices[2] + pos};
  return halfplanes(std::span<const Point2>(v));
}

CameraRaySet rays(const FovConfig& c, const Point2& pos, int count) {
  if (count < 2) throw std::invalid_argument("fov: need at least 2 camera rays");
  const Point2 left = c.base_vertices[1] + pos;
  const Point2 right = c.base_vertices[2] + pos;
  CameraRaySet out;
  out.rays.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double frac = static_cast<double>(i) / static_cast<double>(count - 1);
    out.rays.push_back({pos, left + frac * (right - left)});
  }
  return out;
}

}  // namespace coverage_miqp
