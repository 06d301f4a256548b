#pragma once

// Independent reference computations shared by the unit tests and the
// acceptance binary. None of them call into the library's solvers.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "lsinv/grid.hpp"

namespace lsinv::oracle {

// Integral over [a, b] of clamp(sqrt(R^2 - x^2), lo, hi), restricted to |x| <= R.
inline double clamped_cap_integral(double R, double a, double b, double lo, double hi) {
  a = std::max(a, -R);
  b = std::min(b, R);
  if (!(a < b) || !(lo < hi) || hi <= 0.0) return 0.0;
  auto g = [R](double x) { return std::sqrt(std::max(R * R - x * x, 0.0)); };
  auto antiderivative = [R, &g](double x) {
    return 0.5 * (x * g(x) + R * R * std::asin(std::clamp(x / R, -1.0, 1.0)));
  };
  std::vector<double> cuts{a, b};
  for (double c : {lo, hi}) {
    if (c >= 0.0 && c < R) {
      const double s = std::sqrt(R * R - c * c);
      for (double x : {-s, s}) {
        if (x > a && x < b) cuts.push_back(x);
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double x0 = cuts[k];
    const double x1 = cuts[k + 1];
    const double gm = g(0.5 * (x0 + x1));
    if (gm <= lo) {
      total += std::max(lo, 0.0) * (x1 - x0);
    } else if (gm >= hi) {
      total += hi * (x1 - x0);
    } else {
      total += antiderivative(x1) - antiderivative(x0);
    }
  }
  return total;
}

// Exact area of the disk |p - c| <= R intersected with [x0, x1] x [y0, y1].
inline double disk_rect_area(double cx, double cy, double R, double x0, double x1, double y0, double y1) {
  x0 -= cx;
  x1 -= cx;
  y0 -= cy;
  y1 -= cy;
  // Column x covers [0, g(x)] in the upper half and [-g(x), 0] in the lower one;
  // its overlap with [lo, hi] (lo >= 0) has length clamp(g, lo, hi) - lo.
  const double width = std::max(0.0, std::min(x1, R) - std::max(x0, -R));
  auto half = [&](double lo, double hi) {
    lo = std::max(lo, 0.0);
    if (hi <= lo) return 0.0;
    return clamped_cap_integral(R, x0, x1, lo, hi) - lo * width;
  };
  return half(y0, y1) + half(-y1, -y0);
}

// Fraction of each node's dual cell (clipped to the grid bounds) covered by the disk.
inline ScalarField disk_area_fraction(const GridSpec& g, double cx, double cy, double R) {
  ScalarField out(g);
  const double h = g.h();
  const Bounds& b = g.bounds();
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const double x0 = std::max(g.x(i) - 0.5 * h, b.x0);
      const double x1 = std::min(g.x(i) + 0.5 * h, b.x1);
      const double y0 = std::max(g.y(j) - 0.5 * h, b.y0);
      const double y1 = std::min(g.y(j) + 0.5 * h, b.y1);
      out(i, j) = disk_rect_area(cx, cy, R, x0, x1, y0, y1) / ((x1 - x0) * (y1 - y0));
    }
  }
  return out;
}

// v(x, y) for Laplacian v = 1 on the unit square, v = 0 on the boundary, by double sine series.
inline double poisson_unit_source(double x, double y, int terms = 4001) {
  const double pi = std::numbers::pi;
  double sum = 0.0;
  for (int m = 1; m <= terms; m += 2) {
    const double sx = std::sin(m * pi * x);
    double row = 0.0;
    for (int n = 1; n <= terms; n += 2) {
      row += std::sin(n * pi * y) / (n * (static_cast<double>(m) * m + static_cast<double>(n) * n));
    }
    sum += sx * row / m;
  }
  return -16.0 / (pi * pi * pi * pi) * sum;
}

// Dense LU solve of the 5-point Dirichlet problem; independent of the sparse path.
inline ScalarField dense_dirichlet(const ScalarField& f) {
  const GridSpec& g = f.spec();
  const int mx = g.nx() - 2;
  const int my = g.ny() - 2;
  const int n = mx * my;
  const double inv_h2 = 1.0 / (g.h() * g.h());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs(n);
  auto id = [mx](int i, int j) { return (j - 1) * mx + (i - 1); };
  for (int j = 1; j <= my; ++j) {
    for (int i = 1; i <= mx; ++i) {
      const int r = id(i, j);
      A(r, r) = -4.0 * inv_h2;
      if (i > 1) A(r, id(i - 1, j)) = inv_h2;
      if (i < mx) A(r, id(i + 1, j)) = inv_h2;
      if (j > 1) A(r, id(i, j - 1)) = inv_h2;
      if (j < my) A(r, id(i, j + 1)) = inv_h2;
      rhs(r) = f(i, j);
    }
  }
  const Eigen::VectorXd v = A.partialPivLu().solve(rhs);
  ScalarField out(g);
  for (int j = 1; j <= my; ++j) {
    for (int i = 1; i <= mx; ++i) out(i, j) = v(id(i, j));
  }
  return out;
}

inline double max_abs_diff(const ScalarField& a, const ScalarField& b) {
  double e = 0.0;
  for (std::size_t k = 0; k < a.values().size(); ++k) e = std::max(e, std::abs(a.values()[k] - b.values()[k]));
  return e;
}

inline double max_abs(const ScalarField& a) {
  double e = 0.0;
  for (double v : a.values()) e = std::max(e, std::abs(v));
  return e;
}

}  // namespace lsinv::oracle
