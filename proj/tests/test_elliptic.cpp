#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "lsinv/elliptic.hpp"
#include "lsinv/shapes.hpp"
#include "lsinv/projection.hpp"
#include "support/oracles.hpp"

namespace lsinv {
namespace {

constexpr double kPi = std::numbers::pi;

ScalarField random_field(const GridSpec& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  ScalarField f(g);
  for (double& v : f.values()) v = unif(rng);
  return f;
}

TEST(Dirichlet, ZeroSourceGivesZero) {
  const ScalarField v = solve_dirichlet(ScalarField(GridSpec::unit_square(33)));
  EXPECT_EQ(oracle::max_abs(v), 0.0);
}

double manufactured_dirichlet_error(int n) {
  const GridSpec g = GridSpec::unit_square(n);
  const auto exact = ScalarField::sample(g, [](double x, double y) { return std::sin(kPi * x) * std::sin(kPi * y); });
  return oracle::max_abs_diff(solve_dirichlet(-2.0 * kPi * kPi * exact), exact);
}

TEST(Dirichlet, ManufacturedSolutionSecondOrder) {
  const double e1 = manufactured_dirichlet_error(33);
  const double e2 = manufactured_dirichlet_error(65);
  const double e3 = manufactured_dirichlet_error(129);
  // Truncation error pi^4 h^2 / 12 per axis bounds the constant.
  EXPECT_LT(e2, kPi * kPi * kPi * kPi / 6.0 / (64.0 * 64.0));
  EXPECT_NEAR(std::log2(e1 / e2), 2.0, 0.1);
  EXPECT_NEAR(std::log2(e2 / e3), 2.0, 0.1);
}

TEST(Dirichlet, UnitSourceCentreValueMatchesSeries) {
  const double series = oracle::poisson_unit_source(0.5, 0.5);
  EXPECT_NEAR(series, -0.07367, 1e-5);
  const GridSpec g = GridSpec::unit_square(257);
  const ScalarField v = solve_dirichlet(ScalarField(g, 1.0));
  EXPECT_NEAR(v(128, 128), series, 2e-4);
}

TEST(Dirichlet, MatchesDenseSolve) {
  const GridSpec g = GridSpec::unit_square(33);
  const ScalarField f = random_field(g, 3);
  EXPECT_LT(oracle::max_abs_diff(solve_dirichlet(f), oracle::dense_dirichlet(f)), 1e-12);
}

TEST(Dirichlet, MaximumPrinciple) {
  const GridSpec g = GridSpec::unit_square(65);
  ScalarField f = random_field(g, 11);
  for (double& v : f.values()) v = std::abs(v);
  for (double v : solve_dirichlet(f).values()) EXPECT_LE(v, 1e-12);
}

TEST(Dirichlet, IsLinear) {
  const GridSpec g = GridSpec::unit_square(33);
  const ScalarField a = random_field(g, 1);
  const ScalarField b = random_field(g, 2);
  const ScalarField lhs = solve_dirichlet(2.5 * a + (-0.5) * b);
  const ScalarField rhs = 2.5 * solve_dirichlet(a) + (-0.5) * solve_dirichlet(b);
  EXPECT_LT(oracle::max_abs_diff(lhs, rhs), 1e-13);
}

TEST(Dirichlet, ConjugateGradientAgreesWithDirect) {
  const GridSpec g = GridSpec::unit_square(65);
  const ScalarField f = random_field(g, 5);
  SolverConfig cg{SolverMethod::ConjugateGradient, 1e-12, 20000};
  const ScalarField direct = solve_dirichlet(f);
  EXPECT_LT(oracle::max_abs_diff(solve_dirichlet(f, cg), direct), 1e-9 * oracle::max_abs(direct) + 1e-12);
}

TEST(Dirichlet, ConjugateGradientReportsShortfall) {
  const GridSpec g = GridSpec::unit_square(65);
  SolverConfig cg{SolverMethod::ConjugateGradient, 1e-14, 3};
  try {
    solve_dirichlet(random_field(g, 9), cg);
    FAIL() << "expected SolverError";
  } catch (const SolverError& e) {
    EXPECT_GT(e.achieved_residual(), 1e-14);
    EXPECT_EQ(e.iterations(), 3);
  }
  EXPECT_THROW(solve_dirichlet(random_field(g, 9), SolverConfig{SolverMethod::ConjugateGradient, 0.0, 10}),
               std::invalid_argument);
}

TEST(Forward, ZeroAndSign) {
  const GridSpec g = GridSpec::unit_square(129);
  EXPECT_EQ(oracle::max_abs(forward(ScalarField(g))), 0.0);
  const ScalarField chi = apply_P(signed_distance_field(ShapeDescriptor::disk({0.5, 0.5}, 0.2), g));
  const ScalarField y = forward(chi);
  EXPECT_LT(y.min(), 0.0);
  EXPECT_LE(y.max(), 1e-12);
  EXPECT_EQ(y, solve_dirichlet(chi));
}

TEST(Forward, SelfAdjointInTrapezoidPairing) {
  const GridSpec g = GridSpec::unit_square(65);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const ScalarField a = random_field(g, 100 + s);
    const ScalarField b = random_field(g, 200 + s);
    const double gap = std::abs(inner_product(forward(a), b) - inner_product(a, forward(b)));
    EXPECT_LE(gap, 1e-9 * l2_norm(a) * l2_norm(b));
  }
}

TEST(AdjointResidual, VanishesOnExactData) {
  const GridSpec g = GridSpec::unit_square(33);
  const ScalarField u = random_field(g, 4);
  const SolverConfig cfg;
  EXPECT_LE(oracle::max_abs(adjoint_residual(u, forward(u), cfg)), 2.0 * cfg.tol);
}

TEST(AdjointResidual, ZeroModelGivesMinusFy) {
  const GridSpec g = GridSpec::unit_square(33);
  const ScalarField y = random_field(g, 6);
  EXPECT_LT(oracle::max_abs_diff(adjoint_residual(ScalarField(g), y), -1.0 * forward(y)), 1e-15);
}

TEST(AdjointResidual, MatchesDenseComposition) {
  const GridSpec g = GridSpec::unit_square(33);
  const ScalarField u = random_field(g, 7);
  const ScalarField y = random_field(g, 8);
  const ScalarField expected = oracle::dense_dirichlet(oracle::dense_dirichlet(u) - y);
  EXPECT_LT(oracle::max_abs_diff(adjoint_residual(u, y), expected), 1e-12);
}

TEST(NeumannHelmholtz, ConstantIsFixed) {
  const GridSpec g = GridSpec::unit_square(33);
  const ScalarField v = solve_neumann_helmholtz(ScalarField(g, 2.5));
  EXPECT_LT(oracle::max_abs_diff(v, ScalarField(g, 2.5)), 1e-12);
}

double neumann_error(int n) {
  const GridSpec g = GridSpec::unit_square(n);
  const auto exact = ScalarField::sample(g, [](double x, double) { return std::cos(kPi * x); });
  return oracle::max_abs_diff(solve_neumann_helmholtz((1.0 + kPi * kPi) * exact), exact);
}

TEST(NeumannHelmholtz, ManufacturedCosineSecondOrder) {
  const double e1 = neumann_error(33);
  const double e2 = neumann_error(65);
  const double e3 = neumann_error(129);
  EXPECT_LT(e2, 1.0 / (64.0 * 64.0));
  EXPECT_NEAR(std::log2(e1 / e2), 2.0, 0.1);
  EXPECT_NEAR(std::log2(e2 / e3), 2.0, 0.1);
}

TEST(NeumannHelmholtz, PreservesIntegral) {
  const GridSpec g = GridSpec::unit_square(65);
  ScalarField gfield = random_field(g, 12);
  const double mean = inner_product(gfield, ScalarField(g, 1.0));
  gfield -= ScalarField(g, mean);
  ASSERT_LT(std::abs(inner_product(gfield, ScalarField(g, 1.0))), 1e-14);
  const ScalarField v = solve_neumann_helmholtz(gfield);
  EXPECT_LT(std::abs(inner_product(v, ScalarField(g, 1.0))), 1e-12);
}

TEST(NeumannHelmholtz, PositiveAndContractive) {
  const GridSpec g = GridSpec::unit_square(65);
  ScalarField gfield = random_field(g, 13);
  for (double& v : gfield.values()) v = std::abs(v);
  const ScalarField v = solve_neumann_helmholtz(gfield);
  EXPECT_GE(v.min(), 0.0);
  EXPECT_LE(v.max(), gfield.max());
}

TEST(NeumannHelmholtz, IsLinearAndInvertedByApply) {
  const GridSpec g = GridSpec::unit_square(33);
  const ScalarField a = random_field(g, 14);
  const ScalarField b = random_field(g, 15);
  const ScalarField lhs = solve_neumann_helmholtz(3.0 * a + b);
  EXPECT_LT(oracle::max_abs_diff(lhs, 3.0 * solve_neumann_helmholtz(a) + solve_neumann_helmholtz(b)), 1e-13);
  EXPECT_LT(oracle::max_abs_diff(apply_neumann_helmholtz(solve_neumann_helmholtz(a)), a), 1e-10);
}

TEST(NeumannHelmholtz, ConjugateGradientAgreesWithDirect) {
  const GridSpec g = GridSpec::unit_square(65);
  const ScalarField a = random_field(g, 16);
  const SolverConfig cg{SolverMethod::ConjugateGradient, 1e-12, 20000};
  EXPECT_LT(oracle::max_abs_diff(solve_neumann_helmholtz(a, cg), solve_neumann_helmholtz(a)), 1e-9);
}

TEST(SolverCache, ClearingKeepsResultsIdentical) {
  const GridSpec g = GridSpec::unit_square(33);
  const ScalarField f = random_field(g, 17);
  const ScalarField before = solve_dirichlet(f);
  clear_solver_cache();
  EXPECT_EQ(solve_dirichlet(f), before);
}

}  // namespace
}  // namespace lsinv
