#pragma once

#include <vector>

#include "lsinv/elliptic.hpp"
#include "lsinv/geometry.hpp"
#include "lsinv/grid.hpp"
#include "lsinv/projection.hpp"

namespace lsinv {

/// Normal displacement density on a contour: one value per vertex, per curve.
struct BoundaryDensity {
  CurveSet curve;
  std::vector<std::vector<double>> values;

  static BoundaryDensity zero(CurveSet curve);
};

/// Vector displacement field sampled at the contour vertices.
using VertexDisplacements = std::vector<std::vector<Vec2>>;

/// n . h_tilde at every vertex. The tangential part is discarded here and
/// never reaches the potential.
BoundaryDensity normal_component(const CurveSet& curve, const VertexDisplacements& h_tilde);

/// h / |grad phi| at every vertex, both factors bilinearly interpolated.
BoundaryDensity density_from_perturbation(const CurveSet& curve, const ScalarField& h,
                                          const ScalarField& grad_norm_phi);

/// Fundamental solution of -Laplacian in the plane: ln(1/r) / (2 pi).
double log_kernel(double r);

/// v1(x) = -sum over segments of q(mid) log_kernel(|x - mid|) length. Segments
/// closer to x than their own length are bisected recursively (up to 6 levels).
double single_layer_at(const BoundaryDensity& q, Vec2 x);
ScalarField single_layer_potential(const BoundaryDensity& q, const GridSpec& targets);

/// Discrete harmonic v2 with v2 = -v1 on the boundary.
ScalarField harmonic_correction(const ScalarField& v1, const SolverConfig& cfg = {});

/// Transmission-problem solution v1 + v2 for the normal displacement density q.
ScalarField shape_derivative(const BoundaryDensity& q, const GridSpec& grid, const SolverConfig& cfg = {});

/// F(P_eps'(phi) h): derivative of F(P_eps(phi)) in direction h.
ScalarField level_set_derivative(const ScalarField& phi, const ScalarField& h, const SmoothingParam& eps,
                                 const SolverConfig& cfg = {});

struct RelationCheck {
  ScalarField shape;
  ScalarField level_set;
  /// ||shape - level_set|| / ||level_set||, 0 when both vanish.
  double discrepancy = 0.0;
};

/// Builds both derivatives for the level set perturbation h and compares them.
RelationCheck compare_derivatives(const ScalarField& phi, const ScalarField& h, const SmoothingParam& eps,
                                  const SolverConfig& cfg = {});

double verify_relation(const ScalarField& phi, const ScalarField& h, const SmoothingParam& eps,
                       const SolverConfig& cfg = {});

}  // namespace lsinv
