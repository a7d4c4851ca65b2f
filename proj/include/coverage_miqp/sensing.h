#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "coverage_miqp/geometry.h"

namespace coverage_miqp {

// Isosceles-triangle footprint: apex angle (rad) and height/range (m).
struct FovParams {
  double apex_angle = 0.0;
  double range = 0.0;

  void validate() const;
};

using Triangle = std::array<Point2, 3>;

// One (rotation, zoom) pair of the finite configuration set. Indices are
// 0-based, zoom-major: index = zoom_index * n_angles + angle_index.
struct FovConfig {
  std::size_t index = 0;
  double theta = 0.0;
  double zoom = 1.0;
  // Apex at the origin followed by the two base corners, already rotated.
  Triangle base_vertices;

  double side_length() const { return base_vertices[1].norm(); }
};

struct CameraRaySet {
  std::vector<Segment> rays;
};

// Unrotated footprint after zooming: h' = h xi, phi' = phi / xi. Vertices
// (0,0), (-lb/2, -h'), (lb/2, -h'). Throws std::invalid_argument for zoom < 1.
Triangle base_vertices(const FovParams& f, double zoom);

std::vector<FovConfig> enumerate_configs(std::span<const double> angles, std::span<const double> zooms,
                                         const FovParams& f);

// Footprint translated to an agent position.
ConvexPolygon place(const FovConfig& c, const Point2& pos);

// Half-planes of place(c, pos), without building the polygon.
std::vector<HalfPlane> footprint_halfplanes(const FovConfig& c, const Point2& pos);

// count rays from pos to evenly spaced points along the placed base segment,
// both corners included. Throws std::invalid_argument for count < 2.
CameraRaySet rays(const FovConfig& c, const Point2& pos, int count);

}  // namespace coverage_miqp
