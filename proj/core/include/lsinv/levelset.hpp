#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lsinv/elliptic.hpp"
#include "lsinv/grid.hpp"
#include "lsinv/projection.hpp"

namespace lsinv {

enum class EvolutionMethod {
  /// Preconditioned flow: d(phi)/dt = -(I - Laplacian)^{-1} (P_eps'(phi) F(F(u) - y)).
  InverseScaleSpace,
  /// Hamilton-Jacobi baseline: d(phi)/dt = -F(F(u) - y) |grad phi|.
  Santosa,
};

struct EvolutionConfig {
  EvolutionMethod method = EvolutionMethod::InverseScaleSpace;
  /// Trial time step; the step controller halves it until the discrepancy does not grow.
  double dt = 1.0;
  int max_steps = 200;
  SmoothingParam eps{};
  /// Redistance every k steps; 0 disables.
  int reinit_every = 0;
  /// Stop once ||F(u) - y|| reaches this value.
  double stop_discrepancy = 0.0;
  SolverConfig solver{};
  double grad_floor = kDefaultGradFloor;
  bool backtracking = true;
  int max_halvings = 10;
};

/// Throws std::invalid_argument describing the first violated constraint.
void validate(const EvolutionConfig& cfg, const GridSpec& grid);

struct StepRecord {
  int step = 0;
  double t = 0.0;
  double dt = 0.0;
  int halvings = 0;
  /// ||F(P_eps(phi)) - y||, the quantity the flow decreases.
  double residual = 0.0;
  /// ||F(P(phi)) - y|| for the sharp reconstruction.
  double residual_sharp = 0.0;
  double area = 0.0;
  double perimeter = 0.0;
  int contour_count = 0;
  /// Band nodes where |grad phi| hit the floor.
  int floor_hits = 0;
};

struct EvolutionTrace {
  StepRecord initial;
  /// One record per completed step.
  std::vector<StepRecord> steps;
  std::vector<std::string> warnings;
};

enum class EvolutionStatus { MaxSteps, Converged, Stalled, InterfaceVanished, SolverFailure };

const char* to_string(EvolutionStatus s);

struct EvolutionResult {
  ScalarField phi;
  EvolutionTrace trace;
  EvolutionStatus status = EvolutionStatus::MaxSteps;
  std::string diagnostic;
};

/// Thrown when an operation needs a zero level set and there is none.
class InterfaceVanished : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 1/2 ||F(P_eps(phi)) - y||^2.
double discrepancy(const ScalarField& phi, const ScalarField& y, const SmoothingParam& eps,
                   const SolverConfig& solver = {});

ScalarField velocity_iss(const ScalarField& phi, const ScalarField& y, const EvolutionConfig& cfg);

/// Godunov upwind |grad phi| for the motion d(phi)/dt + speed |grad phi| = 0.
ScalarField upwind_grad_norm(const ScalarField& phi, const ScalarField& speed, double floor = kDefaultGradFloor);

ScalarField velocity_santosa(const ScalarField& phi, const ScalarField& y, const EvolutionConfig& cfg);

/// Explicit Euler update phi + dt * vel.
ScalarField step(const ScalarField& phi, const ScalarField& vel, double dt);

/// Signed distance to the extracted zero contour, keeping the sign of phi.
ScalarField reinitialize(const ScalarField& phi);

/// Called after every completed step with the step index and the new phi.
using StepObserver = std::function<void(int, const ScalarField&)>;

/// Velocity, controlled step and optional redistancing, repeated until
/// max_steps or until either residual drops to stop_discrepancy.
EvolutionResult run(const ScalarField& phi0, const ScalarField& y, const EvolutionConfig& cfg,
                    const StepObserver& observer = {});

/// L2 norm of P_eps'(phi) F(F(u) - y) + alpha (I - Laplacian)(phi - phi_star), u = P_eps(phi),
/// with mirrored ghost nodes for the Helmholtz term.
double optimality_residual(const ScalarField& phi, const ScalarField& phi_star, const ScalarField& y,
                           double alpha, const EvolutionConfig& cfg);

}  // namespace lsinv
