#include "lsinv/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lsinv {

GridSpec::GridSpec(int nx, int ny, Bounds bounds) : nx_(nx), ny_(ny), bounds_(bounds) {
  if (nx < 3 || ny < 3) {
    throw std::invalid_argument("GridSpec: need at least 3 nodes per axis");
  }
  const double wx = bounds.x1 - bounds.x0;
  const double wy = bounds.y1 - bounds.y0;
  if (!(wx > 0.0) || !(wy > 0.0)) {
    throw std::invalid_argument("GridSpec: empty domain");
  }
  h_ = wx / (nx - 1);
  const double hy = wy / (ny - 1);
  if (std::abs(h_ - hy) > 1e-12 * h_) {
    throw std::invalid_argument("GridSpec: spacing must be identical on both axes");
  }
}

void require_same_spec(const GridSpec& a, const GridSpec& b, const char* what) {
  if (!(a == b)) {
    throw std::invalid_argument(std::string(what) + ": grid mismatch");
  }
}

ScalarField::ScalarField(GridSpec spec, double fill) : spec_(spec), values_(spec.size(), fill) {}

ScalarField::ScalarField(GridSpec spec, std::vector<double> values)
    : spec_(spec), values_(std::move(values)) {
  if (values_.size() != spec_.size()) {
    throw std::invalid_argument("ScalarField: value count does not match grid");
  }
}

ScalarField ScalarField::sample(const GridSpec& spec,
                                const std::function<double(double, double)>& fn) {
  ScalarField f(spec);
  for (int j = 0; j < spec.ny(); ++j) {
    for (int i = 0; i < spec.nx(); ++i) {
      f(i, j) = fn(spec.x(i), spec.y(j));
    }
  }
  return f;
}

double ScalarField::interpolate(double x, double y) const {
  const Bounds& b = spec_.bounds();
  const double h = spec_.h();
  const double s = std::clamp((x - b.x0) / h, 0.0, static_cast<double>(spec_.nx() - 1));
  const double t = std::clamp((y - b.y0) / h, 0.0, static_cast<double>(spec_.ny() - 1));
  const int i = std::min(static_cast<int>(s), spec_.nx() - 2);
  const int j = std::min(static_cast<int>(t), spec_.ny() - 2);
  const double fx = s - i;
  const double fy = t - j;
  const ScalarField& f = *this;
  return (1 - fx) * (1 - fy) * f(i, j) + fx * (1 - fy) * f(i + 1, j) + (1 - fx) * fy * f(i, j + 1) +
         fx * fy * f(i + 1, j + 1);
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

void ScalarField::require_same_spec(const ScalarField& other) const {
  lsinv::require_same_spec(spec_, other.spec_, "ScalarField arithmetic");
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require_same_spec(other);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require_same_spec(other);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
  return *this;
}

ScalarField& ScalarField::operator*=(const ScalarField& other) {
  require_same_spec(other);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] *= other.values_[k];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

Gradient gradient(const ScalarField& f) {
  const GridSpec& g = f.spec();
  const int nx = g.nx();
  const int ny = g.ny();
  const double inv2h = 0.5 / g.h();
  Gradient out{ScalarField(g), ScalarField(g)};

  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      double dx;
      if (i == 0) {
        dx = (-3.0 * f(0, j) + 4.0 * f(1, j) - f(2, j)) * inv2h;
      } else if (i == nx - 1) {
        dx = (3.0 * f(i, j) - 4.0 * f(i - 1, j) + f(i - 2, j)) * inv2h;
      } else {
        dx = (f(i + 1, j) - f(i - 1, j)) * inv2h;
      }
      double dy;
      if (j == 0) {
        dy = (-3.0 * f(i, 0) + 4.0 * f(i, 1) - f(i, 2)) * inv2h;
      } else if (j == ny - 1) {
        dy = (3.0 * f(i, j) - 4.0 * f(i, j - 1) + f(i, j - 2)) * inv2h;
      } else {
        dy = (f(i, j + 1) - f(i, j - 1)) * inv2h;
      }
      out.dx(i, j) = dx;
      out.dy(i, j) = dy;
    }
  }
  return out;
}

ScalarField grad_norm(const ScalarField& f, double floor) {
  if (!(floor > 0.0)) {
    throw std::invalid_argument("grad_norm: floor must be positive");
  }
  const Gradient grad = gradient(f);
  ScalarField out(f.spec());
  auto gx = grad.dx.values();
  auto gy = grad.dy.values();
  auto o = out.values();
  for (std::size_t k = 0; k < o.size(); ++k) {
    o[k] = std::max(std::hypot(gx[k], gy[k]), floor);
  }
  return out;
}

double inner_product(const ScalarField& f, const ScalarField& g) {
  require_same_spec(f.spec(), g.spec(), "inner_product");
  const GridSpec& s = f.spec();
  double sum = 0.0;
  for (int j = 0; j < s.ny(); ++j) {
    double row = 0.0;
    for (int i = 0; i < s.nx(); ++i) {
      row += s.trapezoid_weight(i, j) * f(i, j) * g(i, j);
    }
    sum += row;
  }
  return sum * s.h() * s.h();
}

double l2_norm(const ScalarField& f) { return std::sqrt(inner_product(f, f)); }

ScalarField laplacian(const ScalarField& f) {
  const GridSpec& g = f.spec();
  const double inv_h2 = 1.0 / (g.h() * g.h());
  ScalarField out(g);
  for (int j = 1; j < g.ny() - 1; ++j) {
    for (int i = 1; i < g.nx() - 1; ++i) {
      out(i, j) = (f(i + 1, j) + f(i - 1, j) + f(i, j + 1) + f(i, j - 1) - 4.0 * f(i, j)) * inv_h2;
    }
  }
  return out;
}

}  // namespace lsinv
