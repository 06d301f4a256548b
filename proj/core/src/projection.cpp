#include "lsinv/projection.hpp"

#include <stdexcept>

namespace lsinv {

namespace {

void require_positive(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("SmoothingParam: eps must be positive");
}

template <class Fn>
ScalarField map_pointwise(const ScalarField& phi, Fn fn) {
  ScalarField out(phi.spec());
  auto in = phi.values();
  auto o = out.values();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] = fn(in[k]);
  return out;
}

}  // namespace

SmoothingParam SmoothingParam::absolute(double eps) {
  require_positive(eps);
  return {eps, 0.0};
}

SmoothingParam SmoothingParam::grid_relative(const GridSpec& spec, double multiple) {
  require_positive(multiple);
  return {multiple * spec.h(), multiple};
}

double project(double t) { return t >= 0.0 ? 1.0 : 0.0; }

double project_eps(double t, double eps) {
  if (t < -eps) return 0.0;
  if (t > 0.0) return 1.0;
  return 1.0 + t / eps;
}

double project_eps_slope(double t, double eps) { return (t > -eps && t <= 0.0) ? 1.0 / eps : 0.0; }

double project_q_eps(double t, double eps) {
  if (t < -eps) return 0.0;
  if (t > eps) return 1.0;
  return (t + eps) / (2.0 * eps);
}

ScalarField apply_P(const ScalarField& phi) { return map_pointwise(phi, project); }

ScalarField apply_P_eps(const ScalarField& phi, const SmoothingParam& s) {
  require_positive(s.eps);
  return map_pointwise(phi, [e = s.eps](double t) { return project_eps(t, e); });
}

ScalarField deriv_P_eps(const ScalarField& phi, const SmoothingParam& s) {
  require_positive(s.eps);
  return map_pointwise(phi, [e = s.eps](double t) { return project_eps_slope(t, e); });
}

ScalarField apply_Q_eps(const ScalarField& phi, const SmoothingParam& s) {
  require_positive(s.eps);
  return map_pointwise(phi, [e = s.eps](double t) { return project_q_eps(t, e); });
}

int band_floor_hits(const ScalarField& phi, const SmoothingParam& s, double floor) {
  const ScalarField norm = grad_norm(phi, floor);
  auto p = phi.values();
  auto g = norm.values();
  int hits = 0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (project_eps_slope(p[k], s.eps) > 0.0 && g[k] <= floor) ++hits;
  }
  return hits;
}

}  // namespace lsinv
