#pragma once

#include <stdexcept>
#include <string>

#include "lsinv/grid.hpp"

namespace lsinv {

enum class SolverMethod { DirectSparse, ConjugateGradient };

struct SolverConfig {
  SolverMethod method = SolverMethod::DirectSparse;
  /// Relative residual tolerance for iterative solves.
  double tol = 1e-10;
  int max_iter = 20000;
};

/// Raised when an iterative solve stops short of its tolerance.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double achieved_residual, int iterations)
      : std::runtime_error(what), achieved_residual_(achieved_residual), iterations_(iterations) {}

  double achieved_residual() const { return achieved_residual_; }
  int iterations() const { return iterations_; }

 private:
  double achieved_residual_;
  int iterations_;
};

/// v with (5-point Laplacian v) = f at interior nodes and v = 0 on the boundary.
ScalarField solve_dirichlet(const ScalarField& f, const SolverConfig& cfg = {});

/// The forward map u -> Laplacian^{-1} u with homogeneous Dirichlet data.
ScalarField forward(const ScalarField& u, const SolverConfig& cfg = {});

/// F(F(u) - y). The discrete F is self-adjoint in the trapezoidal pairing, so
/// this is the L2 gradient of 1/2 ||F(u) - y||^2.
ScalarField adjoint_residual(const ScalarField& u, const ScalarField& y, const SolverConfig& cfg = {});

/// v with (I - Laplacian) v = g and mirrored ghost nodes (zero normal derivative).
ScalarField solve_neumann_helmholtz(const ScalarField& g, const SolverConfig& cfg = {});

/// (I - Laplacian) v with the same mirrored ghost nodes; the exact inverse of
/// solve_neumann_helmholtz.
ScalarField apply_neumann_helmholtz(const ScalarField& v);

/// Drops every cached factorization. Mostly useful for benchmarks.
void clear_solver_cache();

}  // namespace lsinv
