#pragma once

#include "lsinv/geometry.hpp"
#include "lsinv/grid.hpp"

namespace lsinv {

/// Disk or rotated ellipse used for phantoms and initial guesses.
struct ShapeDescriptor {
  enum class Kind { Disk, Ellipse };

  Kind kind = Kind::Disk;
  Vec2 center{0.5, 0.5};
  double radius_x = 0.3;
  double radius_y = 0.3;
  /// Counter-clockwise rotation in radians (ellipses only).
  double rotation = 0.0;

  static ShapeDescriptor disk(Vec2 center, double radius);
  static ShapeDescriptor ellipse(Vec2 center, double rx, double ry, double rotation);
};

/// Euclidean signed distance, positive inside the shape.
double signed_distance(const ShapeDescriptor& s, Vec2 p);
ScalarField signed_distance_field(const ShapeDescriptor& s, const GridSpec& grid);

/// True when the shape's bounding box keeps at least `margin` from every side of the domain.
bool fits_inside(const ShapeDescriptor& s, const Bounds& bounds, double margin);

}  // namespace lsinv
