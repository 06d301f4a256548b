#include "lsinv/shapederiv.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "lsinv/levelset.hpp"

namespace lsinv {

namespace {

constexpr int kMaxSplitDepth = 6;

// Neumaier compensated sum; keeps the kernel sums independent of segment count noise.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Integral of q * log_kernel over the straight piece [a, b], q linear from qa to qb.
void accumulate_piece(Vec2 x, Vec2 a, Vec2 b, double qa, double qb, int depth, CompensatedSum& acc) {
  const Vec2 mid = 0.5 * (a + b);
  const double len = norm(b - a);
  double r = norm(x - mid);
  if (r < len && depth < kMaxSplitDepth) {
    const double qm = 0.5 * (qa + qb);
    accumulate_piece(x, a, mid, qa, qm, depth + 1, acc);
    accumulate_piece(x, mid, b, qm, qb, depth + 1, acc);
    return;
  }
  // A target on the piece itself: the mean of ln(1/r) over a segment of length
  // L centred on x equals ln(2e/L), i.e. the kernel at distance L/(2e).
  r = std::max(r, len / (2.0 * std::numbers::e));
  if (len > 0.0) acc.add(0.5 * (qa + qb) * log_kernel(r) * len);
}

}  // namespace

BoundaryDensity BoundaryDensity::zero(CurveSet curve) {
  BoundaryDensity d{std::move(curve), {}};
  for (const auto& c : d.curve.curves) d.values.emplace_back(c.vertices.size(), 0.0);
  return d;
}

BoundaryDensity normal_component(const CurveSet& curve, const VertexDisplacements& h_tilde) {
  if (h_tilde.size() != curve.curves.size()) {
    throw std::invalid_argument("normal_component: one displacement list per curve expected");
  }
  BoundaryDensity d{curve, {}};
  for (std::size_t c = 0; c < curve.curves.size(); ++c) {
    const auto& p = curve.curves[c];
    if (h_tilde[c].size() != p.vertices.size()) {
      throw std::invalid_argument("normal_component: one displacement per vertex expected");
    }
    std::vector<double> q(p.vertices.size());
    for (std::size_t k = 0; k < q.size(); ++k) q[k] = dot(p.normals[k], h_tilde[c][k]);
    d.values.push_back(std::move(q));
  }
  return d;
}

BoundaryDensity density_from_perturbation(const CurveSet& curve, const ScalarField& h,
                                          const ScalarField& grad_norm_phi) {
  require_same_spec(h.spec(), grad_norm_phi.spec(), "density_from_perturbation");
  BoundaryDensity d{curve, {}};
  for (const auto& p : curve.curves) {
    std::vector<double> q(p.vertices.size());
    for (std::size_t k = 0; k < q.size(); ++k) {
      const Vec2 v = p.vertices[k];
      q[k] = h.interpolate(v.x, v.y) / grad_norm_phi.interpolate(v.x, v.y);
    }
    d.values.push_back(std::move(q));
  }
  return d;
}

double log_kernel(double r) { return std::log(1.0 / r) / (2.0 * std::numbers::pi); }

double single_layer_at(const BoundaryDensity& q, Vec2 x) {
  CompensatedSum acc;
  for (std::size_t c = 0; c < q.curve.curves.size(); ++c) {
    const auto& p = q.curve.curves[c];
    const auto& vals = q.values[c];
    for (std::size_t k = 0; k < p.segment_count(); ++k) {
      const std::size_t k1 = (k + 1) % p.vertices.size();
      accumulate_piece(x, p.vertices[k], p.vertices[k1], vals[k], vals[k1], 0, acc);
    }
  }
  return -acc.value();
}

ScalarField single_layer_potential(const BoundaryDensity& q, const GridSpec& targets) {
  if (q.curve.empty()) throw std::invalid_argument("single_layer_potential: empty curve");
  if (q.values.size() != q.curve.curves.size()) {
    throw std::invalid_argument("single_layer_potential: density does not match curve");
  }
  ScalarField v(targets);
  for (int j = 0; j < targets.ny(); ++j) {
    for (int i = 0; i < targets.nx(); ++i) v(i, j) = single_layer_at(q, {targets.x(i), targets.y(j)});
  }
  return v;
}

ScalarField harmonic_correction(const ScalarField& v1, const SolverConfig& cfg) {
  const GridSpec& g = v1.spec();
  // Lift the boundary data, then remove its discrete Laplacian with a homogeneous solve.
  ScalarField lift(g);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      if (g.on_boundary(i, j)) lift(i, j) = -v1(i, j);
    }
  }
  ScalarField rhs = laplacian(lift);
  rhs *= -1.0;
  return lift + solve_dirichlet(rhs, cfg);
}

ScalarField shape_derivative(const BoundaryDensity& q, const GridSpec& grid, const SolverConfig& cfg) {
  const ScalarField v1 = single_layer_potential(q, grid);
  return v1 + harmonic_correction(v1, cfg);
}

ScalarField level_set_derivative(const ScalarField& phi, const ScalarField& h, const SmoothingParam& eps,
                                 const SolverConfig& cfg) {
  require_same_spec(phi.spec(), h.spec(), "level_set_derivative");
  return solve_dirichlet(deriv_P_eps(phi, eps) * h, cfg);
}

RelationCheck compare_derivatives(const ScalarField& phi, const ScalarField& h, const SmoothingParam& eps,
                                  const SolverConfig& cfg) {
  const CurveSet curve = extract_zero_level(phi);
  if (curve.empty()) throw InterfaceVanished("verify_relation: zero level set is empty");

  const BoundaryDensity q = density_from_perturbation(curve, h, grad_norm(phi));
  RelationCheck out{shape_derivative(q, phi.spec(), cfg), level_set_derivative(phi, h, eps, cfg), 0.0};
  const double denom = l2_norm(out.level_set);
  const double diff = l2_norm(out.shape - out.level_set);
  if (denom == 0.0) {
    out.discrepancy = diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  } else {
    out.discrepancy = diff / denom;
  }
  return out;
}

double verify_relation(const ScalarField& phi, const ScalarField& h, const SmoothingParam& eps,
                       const SolverConfig& cfg) {
  return compare_derivatives(phi, h, eps, cfg).discrepancy;
}

}  // namespace lsinv
