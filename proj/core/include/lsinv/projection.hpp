#pragma once

#include "lsinv/grid.hpp"

namespace lsinv {

/// Width of the smoothing ramp used by P_eps and Q_eps.
struct SmoothingParam {
  double eps = 0.0;
  /// eps expressed as a multiple of the grid spacing; 0 when eps was given directly.
  double grid_multiple = 0.0;

  static SmoothingParam absolute(double eps);
  static SmoothingParam grid_relative(const GridSpec& spec, double multiple = 1.5);
};

// Scalar branches. The sharp projection sends t >= 0 to 1.
double project(double t);
double project_eps(double t, double eps);
double project_eps_slope(double t, double eps);
double project_q_eps(double t, double eps);

/// Indicator of {phi >= 0}.
ScalarField apply_P(const ScalarField& phi);

/// Piecewise-linear ramp: 0 below -eps, 1 + t/eps on [-eps, 0], 1 above 0.
ScalarField apply_P_eps(const ScalarField& phi, const SmoothingParam& s);

/// Slope of the ramp: 1/eps on the half-open band (-eps, 0], else 0. This is the
/// grid stand-in for delta(phi)/|grad phi|.
ScalarField deriv_P_eps(const ScalarField& phi, const SmoothingParam& s);

/// Symmetric ramp (t + eps)/(2 eps) on [-eps, eps]; its pointwise limit is 1/2 at t = 0.
ScalarField apply_Q_eps(const ScalarField& phi, const SmoothingParam& s);

/// Number of nodes inside the ramp band where |grad phi| falls below `floor`.
int band_floor_hits(const ScalarField& phi, const SmoothingParam& s, double floor = kDefaultGradFloor);

}  // namespace lsinv
