#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace lsinv {

/// Default lower bound applied to |grad phi| before any division.
inline constexpr double kDefaultGradFloor = 1e-6;

/// Axis-aligned rectangle holding the computational domain.
struct Bounds {
  double x0 = 0.0;
  double x1 = 1.0;
  double y0 = 0.0;
  double y1 = 1.0;

  bool operator==(const Bounds&) const = default;
};

/// Uniform node-centred grid. Node (i, j) sits at (x0 + i*h, y0 + j*h) and
/// both axes share the same spacing h.
class GridSpec {
 public:
  GridSpec(int nx, int ny, Bounds bounds = {});

  static GridSpec unit_square(int n) { return GridSpec(n, n); }

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double h() const { return h_; }
  const Bounds& bounds() const { return bounds_; }

  std::size_t size() const { return static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_); }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(i);
  }

  double x(int i) const { return bounds_.x0 + i * h_; }
  double y(int j) const { return bounds_.y0 + j * h_; }

  bool on_boundary(int i, int j) const { return i == 0 || j == 0 || i == nx_ - 1 || j == ny_ - 1; }

  /// Trapezoidal quadrature weight of node (i, j), in units of h^2.
  double trapezoid_weight(int i, int j) const {
    double w = 1.0;
    if (i == 0 || i == nx_ - 1) w *= 0.5;
    if (j == 0 || j == ny_ - 1) w *= 0.5;
    return w;
  }

  bool operator==(const GridSpec& other) const {
    return nx_ == other.nx_ && ny_ == other.ny_ && bounds_ == other.bounds_;
  }

 private:
  int nx_;
  int ny_;
  Bounds bounds_;
  double h_;
};

/// Real values sampled at the nodes of a GridSpec, stored row by row (x fastest).
class ScalarField {
 public:
  explicit ScalarField(GridSpec spec, double fill = 0.0);
  ScalarField(GridSpec spec, std::vector<double> values);

  static ScalarField sample(const GridSpec& spec, const std::function<double(double, double)>& fn);

  const GridSpec& spec() const { return spec_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  double operator()(int i, int j) const { return values_[spec_.index(i, j)]; }
  double& operator()(int i, int j) { return values_[spec_.index(i, j)]; }

  /// Bilinear interpolation; points outside the domain are clamped onto it.
  double interpolate(double x, double y) const;

  bool all_finite() const;
  double min() const;
  double max() const;

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(const ScalarField& other);
  ScalarField& operator*=(double s);

  friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
  friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
  friend ScalarField operator*(ScalarField a, const ScalarField& b) { return a *= b; }
  friend ScalarField operator*(double s, ScalarField a) { return a *= s; }
  friend ScalarField operator*(ScalarField a, double s) { return a *= s; }

  /// Bitwise equality of spec and values.
  bool operator==(const ScalarField& other) const = default;

 private:
  void require_same_spec(const ScalarField& other) const;

  GridSpec spec_;
  std::vector<double> values_;
};

struct Gradient {
  ScalarField dx;
  ScalarField dy;
};

/// Central differences in the interior, second-order one-sided at the boundary.
Gradient gradient(const ScalarField& f);

/// max(|grad f|, floor) pointwise.
ScalarField grad_norm(const ScalarField& f, double floor = kDefaultGradFloor);

/// Trapezoidal approximation of the L2 pairing over the domain.
double inner_product(const ScalarField& f, const ScalarField& g);

double l2_norm(const ScalarField& f);

/// 5-point Laplacian at interior nodes; boundary nodes are set to 0.
ScalarField laplacian(const ScalarField& f);

/// Throws std::invalid_argument when the two grids differ.
void require_same_spec(const GridSpec& a, const GridSpec& b, const char* what);

}  // namespace lsinv
