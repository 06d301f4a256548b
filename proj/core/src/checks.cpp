#include "lsinv/checks.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "lsinv/elliptic.hpp"
#include "lsinv/geometry.hpp"
#include "lsinv/projection.hpp"
#include "lsinv/shapederiv.hpp"
#include "lsinv/shapes.hpp"

namespace lsinv {

namespace {

constexpr double kPi = std::numbers::pi;

// Circle used by the band and shape batteries. The centre is deliberately off
// the lattice so band node counts are not biased by symmetry.
const ShapeDescriptor kProbeDisk = ShapeDescriptor::disk({0.47, 0.52}, 0.3);

CheckResult upper(std::string name, double value, double bound) {
  return {std::move(name), value, bound, value <= bound};
}

double max_abs_error(const ScalarField& a, const ScalarField& b) {
  double e = 0.0;
  auto x = a.values();
  auto y = b.values();
  for (std::size_t k = 0; k < x.size(); ++k) e = std::max(e, std::abs(x[k] - y[k]));
  return e;
}

double dirichlet_error(int n) {
  const GridSpec g = GridSpec::unit_square(n);
  const auto exact = ScalarField::sample(g, [](double x, double y) { return std::sin(kPi * x) * std::sin(kPi * y); });
  const ScalarField f = -2.0 * kPi * kPi * exact;
  return max_abs_error(solve_dirichlet(f), exact);
}

double neumann_error(int n) {
  const GridSpec g = GridSpec::unit_square(n);
  const auto exact = ScalarField::sample(g, [](double x, double) { return std::cos(kPi * x); });
  const ScalarField rhs = (1.0 + kPi * kPi) * exact;
  return max_abs_error(solve_neumann_helmholtz(rhs), exact);
}

}  // namespace

nlohmann::json to_json(const std::vector<CheckResult>& results) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : results) {
    out.push_back({{"name", r.name}, {"value", r.value}, {"bound", r.bound}, {"passed", r.passed}});
  }
  return out;
}

std::vector<CheckResult> adjoint_battery(int n, int pairs, std::uint64_t seed) {
  std::vector<CheckResult> out;
  const GridSpec g = GridSpec::unit_square(n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  double worst = 0.0;
  for (int p = 0; p < pairs; ++p) {
    ScalarField a(g), b(g);
    for (double& v : a.values()) v = unif(rng);
    for (double& v : b.values()) v = unif(rng);
    const double lhs = inner_product(forward(a), b);
    const double rhs = inner_product(a, forward(b));
    worst = std::max(worst, std::abs(lhs - rhs) / (l2_norm(a) * l2_norm(b)));
  }
  out.push_back(upper("adjoint symmetry |<Fa,b>-<a,Fb>|/(|a||b|)", worst, 1e-9));

  const double d1 = dirichlet_error(33), d2 = dirichlet_error(65), d3 = dirichlet_error(129);
  const double n1 = neumann_error(33), n2 = neumann_error(65), n3 = neumann_error(129);
  for (const auto& [name, order] :
       {std::pair{"dirichlet order 33->65", std::log2(d1 / d2)}, std::pair{"dirichlet order 65->129", std::log2(d2 / d3)},
        std::pair{"neumann order 33->65", std::log2(n1 / n2)}, std::pair{"neumann order 65->129", std::log2(n2 / n3)}}) {
    out.push_back({name, order, 0.3, std::abs(order - 2.0) <= 0.3});
  }
  return out;
}

std::vector<CheckResult> band_battery(int n) {
  std::vector<CheckResult> out;
  const GridSpec g = GridSpec::unit_square(n);
  const ScalarField phi = signed_distance_field(kProbeDisk, g);
  const SmoothingParam eps = SmoothingParam::grid_relative(g, 1.5);
  const double r = kProbeDisk.radius_x;
  const ScalarField one(g, 1.0);

  const double band = inner_product(deriv_P_eps(phi, eps), one);
  // {-eps < phi <= 0} is the annulus R <= |x - c| < R + eps.
  const double annulus = (kPi * (r + eps.eps) * (r + eps.eps) - kPi * r * r) / eps.eps;
  out.push_back(upper("ramp band integral vs annulus (rel)", std::abs(band / annulus - 1.0), 0.01));
  const double length = curve_length(extract_zero_level(phi));
  out.push_back(upper("ramp band integral vs contour length (rel)", std::abs(band / length - 1.0), 0.02));

  const CoareaSides sides = coarea_check(phi, -0.05, 0.0);
  out.push_back(upper("coarea sides (rel)", std::abs(sides.volume_side / sides.level_side - 1.0), 0.02));

  ScalarField zero_node(GridSpec::unit_square(9), -1.0);
  zero_node(4, 4) = 0.0;
  const auto s = SmoothingParam::absolute(1e-8);
  out.push_back(upper("Q_eps at an exact zero node minus 1/2", std::abs(apply_Q_eps(zero_node, s)(4, 4) - 0.5), 0.0));
  out.push_back(upper("P_eps at an exact zero node minus 1", std::abs(apply_P_eps(zero_node, s)(4, 4) - 1.0), 0.0));
  return out;
}

std::vector<CheckResult> shape_battery(const std::vector<int>& sizes) {
  std::vector<CheckResult> out;
  double previous = std::numeric_limits<double>::infinity();
  bool monotone = true;
  for (int n : sizes) {
    const GridSpec g = GridSpec::unit_square(n);
    const ScalarField phi = signed_distance_field(kProbeDisk, g);
    const double d = verify_relation(phi, ScalarField(g, 1.0), SmoothingParam::grid_relative(g, 1.5));
    monotone = monotone && d < previous;
    previous = d;
    out.push_back({"relative L2 gap shape vs level set derivative, n=" + std::to_string(n), d, 0.05,
                   n < 257 || d <= 0.05});
  }
  out.push_back({"gap decreases under refinement", monotone ? 1.0 : 0.0, 1.0, monotone});
  return out;
}

}  // namespace lsinv
