#include "lsinv/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lsinv/geometry.hpp"

namespace lsinv {

const char* to_string(EvolutionStatus s) {
  switch (s) {
    case EvolutionStatus::MaxSteps: return "max_steps";
    case EvolutionStatus::Converged: return "converged";
    case EvolutionStatus::Stalled: return "stalled";
    case EvolutionStatus::InterfaceVanished: return "interface_vanished";
    case EvolutionStatus::SolverFailure: return "solver_failure";
  }
  return "unknown";
}

void validate(const EvolutionConfig& cfg, const GridSpec& grid) {
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("EvolutionConfig: dt must be positive");
  if (cfg.max_steps < 1) throw std::invalid_argument("EvolutionConfig: max_steps must be at least 1");
  if (!(cfg.eps.eps > 0.0)) throw std::invalid_argument("EvolutionConfig: eps must be positive");
  if (cfg.eps.eps < grid.h() * (1.0 - 1e-12)) {
    throw std::invalid_argument("EvolutionConfig: eps must be at least the grid spacing");
  }
  if (cfg.reinit_every < 0) throw std::invalid_argument("EvolutionConfig: reinit_every must be >= 0");
  if (!(cfg.stop_discrepancy >= 0.0)) {
    throw std::invalid_argument("EvolutionConfig: stop_discrepancy must be >= 0");
  }
  if (!(cfg.grad_floor > 0.0)) throw std::invalid_argument("EvolutionConfig: grad_floor must be positive");
  if (cfg.max_halvings < 0) throw std::invalid_argument("EvolutionConfig: max_halvings must be >= 0");
}

double discrepancy(const ScalarField& phi, const ScalarField& y, const SmoothingParam& eps,
                   const SolverConfig& solver) {
  const ScalarField r = forward(apply_P_eps(phi, eps), solver) - y;
  return 0.5 * inner_product(r, r);
}

ScalarField velocity_iss(const ScalarField& phi, const ScalarField& y, const EvolutionConfig& cfg) {
  ScalarField source = deriv_P_eps(phi, cfg.eps);
  source *= adjoint_residual(apply_P_eps(phi, cfg.eps), y, cfg.solver);
  ScalarField v = solve_neumann_helmholtz(source, cfg.solver);
  v *= -1.0;
  return v;
}

ScalarField upwind_grad_norm(const ScalarField& phi, const ScalarField& speed, double floor) {
  const GridSpec& g = phi.spec();
  const int nx = g.nx();
  const int ny = g.ny();
  const double inv_h = 1.0 / g.h();
  ScalarField out(g);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      // Missing one-sided differences at the boundary copy the available one.
      double dxm = i > 0 ? (phi(i, j) - phi(i - 1, j)) * inv_h : 0.0;
      double dxp = i < nx - 1 ? (phi(i + 1, j) - phi(i, j)) * inv_h : 0.0;
      double dym = j > 0 ? (phi(i, j) - phi(i, j - 1)) * inv_h : 0.0;
      double dyp = j < ny - 1 ? (phi(i, j + 1) - phi(i, j)) * inv_h : 0.0;
      if (i == 0) dxm = dxp;
      if (i == nx - 1) dxp = dxm;
      if (j == 0) dym = dyp;
      if (j == ny - 1) dyp = dym;

      double sum;
      if (speed(i, j) > 0.0) {
        sum = std::pow(std::max(dxm, 0.0), 2) + std::pow(std::min(dxp, 0.0), 2) +
              std::pow(std::max(dym, 0.0), 2) + std::pow(std::min(dyp, 0.0), 2);
      } else {
        sum = std::pow(std::min(dxm, 0.0), 2) + std::pow(std::max(dxp, 0.0), 2) +
              std::pow(std::min(dym, 0.0), 2) + std::pow(std::max(dyp, 0.0), 2);
      }
      out(i, j) = std::max(std::sqrt(sum), floor);
    }
  }
  return out;
}

ScalarField velocity_santosa(const ScalarField& phi, const ScalarField& y, const EvolutionConfig& cfg) {
  // With phi > 0 inside, descent of the discrepancy needs d(phi)/dt = -r |grad phi|,
  // i.e. the front moves with normal speed r.
  const ScalarField r = adjoint_residual(apply_P_eps(phi, cfg.eps), y, cfg.solver);
  ScalarField v = upwind_grad_norm(phi, r, cfg.grad_floor);
  v *= r;
  v *= -1.0;
  return v;
}

ScalarField step(const ScalarField& phi, const ScalarField& vel, double dt) {
  require_same_spec(phi.spec(), vel.spec(), "step");
  ScalarField out = phi;
  auto o = out.values();
  auto v = vel.values();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] += dt * v[k];
  return out;
}

namespace {

struct SegmentBox {
  Vec2 a;
  Vec2 b;
};

double distance_to_segments(Vec2 p, const std::vector<SegmentBox>& segs) {
  double best2 = std::numeric_limits<double>::infinity();
  for (const auto& s : segs) {
    const Vec2 ab = s.b - s.a;
    const double len2 = dot(ab, ab);
    double t = len2 > 0.0 ? dot(p - s.a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const Vec2 d = p - (s.a + t * ab);
    best2 = std::min(best2, dot(d, d));
  }
  return std::sqrt(best2);
}

}  // namespace

ScalarField reinitialize(const ScalarField& phi) {
  const CurveSet zero = extract_zero_level(phi);
  std::vector<SegmentBox> segs;
  for (const auto& c : zero.curves) {
    for (std::size_t k = 0; k < c.segment_count(); ++k) {
      const auto [a, b] = c.segment(k);
      segs.push_back({a, b});
    }
  }
  if (segs.empty()) throw InterfaceVanished("reinitialize: zero level set is empty");

  const GridSpec& g = phi.spec();
  ScalarField out(g);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const double d = distance_to_segments({g.x(i), g.y(j)}, segs);
      out(i, j) = phi(i, j) >= 0.0 ? d : -d;
    }
  }
  return out;
}

namespace {

struct StateMetrics {
  double half_misfit_sq = 0.0;
  StepRecord record;
};

StateMetrics measure(const ScalarField& phi, const ScalarField& y, const EvolutionConfig& cfg) {
  StateMetrics m;
  const ScalarField r = forward(apply_P_eps(phi, cfg.eps), cfg.solver) - y;
  m.half_misfit_sq = 0.5 * inner_product(r, r);
  m.record.residual = std::sqrt(2.0 * m.half_misfit_sq);
  m.record.residual_sharp = l2_norm(forward(apply_P(phi), cfg.solver) - y);
  m.record.area = region_area(phi);
  const CurveSet c = extract_zero_level(phi);
  m.record.perimeter = curve_length(c);
  m.record.contour_count = static_cast<int>(c.curves.size());
  m.record.floor_hits = band_floor_hits(phi, cfg.eps, cfg.grad_floor);
  return m;
}

}  // namespace

EvolutionResult run(const ScalarField& phi0, const ScalarField& y, const EvolutionConfig& cfg,
                    const StepObserver& observer) {
  require_same_spec(phi0.spec(), y.spec(), "run");
  validate(cfg, phi0.spec());
  if (extract_zero_level(phi0).empty()) {
    throw std::invalid_argument("run: initial level set function has no zero level set");
  }

  EvolutionResult result{phi0, {}, EvolutionStatus::MaxSteps, {}};
  EvolutionTrace& trace = result.trace;
  ScalarField& phi = result.phi;

  StateMetrics current;
  try {
    current = measure(phi, y, cfg);
  } catch (const SolverError& e) {
    result.status = EvolutionStatus::SolverFailure;
    result.diagnostic = e.what();
    return result;
  }
  trace.initial = current.record;
  double t = 0.0;

  for (int k = 1; k <= cfg.max_steps; ++k) {
    // An already converged state is recorded as a zero-length step so that the
    // trace always ends on the step that met the stopping rule.
    if (std::min(current.record.residual, current.record.residual_sharp) <= cfg.stop_discrepancy) {
      StepRecord rec = current.record;
      rec.step = k;
      rec.t = t;
      rec.dt = 0.0;
      rec.halvings = 0;
      trace.steps.push_back(rec);
      if (observer) observer(k, phi);
      result.status = EvolutionStatus::Converged;
      break;
    }
    try {
      const ScalarField vel = cfg.method == EvolutionMethod::InverseScaleSpace ? velocity_iss(phi, y, cfg)
                                                                                 : velocity_santosa(phi, y, cfg);
      double dt = cfg.dt;
      int halvings = 0;
      ScalarField trial = step(phi, vel, dt);
      double trial_misfit = discrepancy(trial, y, cfg.eps, cfg.solver);
      while (cfg.backtracking && trial_misfit > current.half_misfit_sq) {
        if (halvings == cfg.max_halvings) break;
        dt *= 0.5;
        ++halvings;
        trial = step(phi, vel, dt);
        trial_misfit = discrepancy(trial, y, cfg.eps, cfg.solver);
      }
      if (cfg.backtracking && trial_misfit > current.half_misfit_sq) {
        result.status = EvolutionStatus::Stalled;
        result.diagnostic = "no descent after " + std::to_string(halvings) + " step halvings at step " +
                            std::to_string(k);
        break;
      }

      if (cfg.reinit_every > 0 && k % cfg.reinit_every == 0) {
        try {
          ScalarField redistanced = reinitialize(trial);
          if (!cfg.backtracking || discrepancy(redistanced, y, cfg.eps, cfg.solver) <= current.half_misfit_sq) {
            trial = std::move(redistanced);
          } else {
            trace.warnings.push_back("step " + std::to_string(k) +
                                     ": reinitialization skipped, it would increase the discrepancy");
          }
        } catch (const InterfaceVanished&) {
          // Reported below through the empty contour.
        }
      }

      phi = std::move(trial);
      t += dt;
      StateMetrics next = measure(phi, y, cfg);
      next.record.step = k;
      next.record.t = t;
      next.record.dt = dt;
      next.record.halvings = halvings;
      if (next.record.floor_hits > 0) {
        trace.warnings.push_back("step " + std::to_string(k) + ": gradient floor engaged at " +
                                 std::to_string(next.record.floor_hits) + " band nodes");
      }
      if (next.record.contour_count != current.record.contour_count) {
        trace.warnings.push_back("step " + std::to_string(k) + ": contour count changed from " +
                                 std::to_string(current.record.contour_count) + " to " +
                                 std::to_string(next.record.contour_count));
      }
      trace.steps.push_back(next.record);
      current = next;
      if (observer) observer(k, phi);

      if (current.record.contour_count == 0) {
        result.status = EvolutionStatus::InterfaceVanished;
        result.diagnostic = "zero level set vanished at step " + std::to_string(k);
        break;
      }
      if (std::min(current.record.residual, current.record.residual_sharp) <= cfg.stop_discrepancy) {
        result.status = EvolutionStatus::Converged;
        break;
      }
    } catch (const SolverError& e) {
      result.status = EvolutionStatus::SolverFailure;
      result.diagnostic = std::string(e.what()) + " (residual " + std::to_string(e.achieved_residual()) +
                          ") at step " + std::to_string(k);
      break;
    }
  }
  return result;
}

double optimality_residual(const ScalarField& phi, const ScalarField& phi_star, const ScalarField& y,
                           double alpha, const EvolutionConfig& cfg) {
  if (!(alpha > 0.0)) throw std::invalid_argument("optimality_residual: alpha must be positive");
  require_same_spec(phi.spec(), phi_star.spec(), "optimality_residual");
  ScalarField lhs = deriv_P_eps(phi, cfg.eps);
  lhs *= adjoint_residual(apply_P_eps(phi, cfg.eps), y, cfg.solver);
  lhs += alpha * apply_neumann_helmholtz(phi - phi_star);
  return l2_norm(lhs);
}

}  // namespace lsinv
