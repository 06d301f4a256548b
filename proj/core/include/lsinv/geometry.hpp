#pragma once

#include <iosfwd>
#include <vector>

#include "lsinv/grid.hpp"

namespace lsinv {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
double norm(Vec2 a);

/// Ordered vertices of one contour component. Closed polylines do not repeat
/// their first vertex; the closing segment is implied.
struct Polyline {
  std::vector<Vec2> vertices;
  /// Unit normal -grad(phi)/|grad(phi)| per vertex; points out of {phi > 0}.
  std::vector<Vec2> normals;
  bool closed = false;

  std::size_t segment_count() const;
  /// Endpoints of segment k (wrapping for closed curves).
  std::pair<Vec2, Vec2> segment(std::size_t k) const;
};

struct CurveSet {
  std::vector<Polyline> curves;

  bool empty() const { return curves.empty(); }
  std::size_t vertex_count() const;
};

/// Marching-squares contour of {phi = level}. Vertices are linear edge
/// interpolants; nodes sitting exactly on the level are nudged up by 1e-12.
/// Saddle cells are resolved by the sign of the cell average.
CurveSet extract_level(const ScalarField& phi, double level);
CurveSet extract_zero_level(const ScalarField& phi);

double curve_length(const CurveSet& c);

/// Midpoint-rule line integral of v (bilinearly interpolated) along every segment.
double curve_integral(const CurveSet& c, const ScalarField& v);

/// Two sides of the coarea identity over the band a < phi < b.
struct CoareaSides {
  double volume_side = 0.0;  // integral of |grad phi| over the band
  double level_side = 0.0;   // integral over rho of the length of {phi = rho}
};

/// `levels` uniformly spaced values of rho, combined by the trapezoid rule.
CoareaSides coarea_check(const ScalarField& phi, double a, double b, int levels = 21);

/// Area of {phi >= 0}.
double region_area(const ScalarField& phi);
/// Area where exactly one of {phi_a >= 0}, {phi_b >= 0} holds.
double symmetric_difference_area(const ScalarField& phi_a, const ScalarField& phi_b);

/// Symmetric Hausdorff distance between the polylines (vertex to segment).
double hausdorff_distance(const CurveSet& a, const CurveSet& b);

/// One row per vertex: curve_id,x,y,nx,ny.
void write_csv(std::ostream& out, const CurveSet& c);

}  // namespace lsinv
