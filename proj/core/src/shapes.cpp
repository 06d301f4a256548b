#include "lsinv/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lsinv {

namespace {

// Distance from (y0, y1), first quadrant, to the axis-aligned ellipse with
// semi-axes e0 >= e1 > 0. Robust bisection on the Lagrange parameter.
double ellipse_distance_first_quadrant(double e0, double e1, double y0, double y1) {
  auto root = [](double r0, double z0, double z1, double g) {
    const double n0 = r0 * z0;
    double s0 = z1 - 1.0;
    double s1 = g < 0.0 ? 0.0 : std::hypot(n0, z1) - 1.0;
    double s = 0.0;
    for (int it = 0; it < 200; ++it) {
      s = 0.5 * (s0 + s1);
      if (s == s0 || s == s1) break;
      const double ratio0 = n0 / (s + r0);
      const double ratio1 = z1 / (s + 1.0);
      const double gs = ratio0 * ratio0 + ratio1 * ratio1 - 1.0;
      if (gs > 0.0) {
        s0 = s;
      } else if (gs < 0.0) {
        s1 = s;
      } else {
        break;
      }
    }
    return s;
  };

  if (y1 > 0.0) {
    if (y0 > 0.0) {
      const double z0 = y0 / e0;
      const double z1 = y1 / e1;
      const double g = z0 * z0 + z1 * z1 - 1.0;
      if (g != 0.0) {
        const double r0 = (e0 / e1) * (e0 / e1);
        const double sbar = root(r0, z0, z1, g);
        const double x0 = r0 * y0 / (sbar + r0);
        const double x1 = y1 / (sbar + 1.0);
        return std::hypot(x0 - y0, x1 - y1);
      }
      return 0.0;
    }
    return std::abs(y1 - e1);
  }
  const double numer0 = e0 * y0;
  const double denom0 = e0 * e0 - e1 * e1;
  if (numer0 < denom0) {
    const double xde0 = numer0 / denom0;
    const double x0 = e0 * xde0;
    const double x1 = e1 * std::sqrt(std::max(0.0, 1.0 - xde0 * xde0));
    return std::hypot(x0 - y0, x1);
  }
  return std::abs(y0 - e0);
}

}  // namespace

ShapeDescriptor ShapeDescriptor::disk(Vec2 center, double radius) {
  return {Kind::Disk, center, radius, radius, 0.0};
}

ShapeDescriptor ShapeDescriptor::ellipse(Vec2 center, double rx, double ry, double rotation) {
  return {Kind::Ellipse, center, rx, ry, rotation};
}

double signed_distance(const ShapeDescriptor& s, Vec2 p) {
  if (!(s.radius_x > 0.0) || !(s.radius_y > 0.0)) {
    throw std::invalid_argument("ShapeDescriptor: radii must be positive");
  }
  const Vec2 d = p - s.center;
  if (s.kind == ShapeDescriptor::Kind::Disk) return s.radius_x - norm(d);

  const double c = std::cos(s.rotation);
  const double sn = std::sin(s.rotation);
  double u = std::abs(c * d.x + sn * d.y);
  double v = std::abs(-sn * d.x + c * d.y);
  double a = s.radius_x;
  double b = s.radius_y;
  if (a < b) {
    std::swap(a, b);
    std::swap(u, v);
  }
  const double dist = ellipse_distance_first_quadrant(a, b, u, v);
  const bool inside = (u / a) * (u / a) + (v / b) * (v / b) <= 1.0;
  return inside ? dist : -dist;
}

ScalarField signed_distance_field(const ShapeDescriptor& s, const GridSpec& grid) {
  return ScalarField::sample(grid, [&s](double x, double y) { return signed_distance(s, {x, y}); });
}

bool fits_inside(const ShapeDescriptor& s, const Bounds& b, double margin) {
  double ex = s.radius_x;
  double ey = s.radius_y;
  if (s.kind == ShapeDescriptor::Kind::Ellipse) {
    const double c = std::cos(s.rotation);
    const double sn = std::sin(s.rotation);
    ex = std::hypot(s.radius_x * c, s.radius_y * sn);
    ey = std::hypot(s.radius_x * sn, s.radius_y * c);
  }
  return s.center.x - ex >= b.x0 + margin && s.center.x + ex <= b.x1 - margin &&
         s.center.y - ey >= b.y0 + margin && s.center.y + ey <= b.y1 - margin;
}

}  // namespace lsinv
