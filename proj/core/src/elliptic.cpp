#include "lsinv/elliptic.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

namespace lsinv {

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

enum class OperatorKind { Dirichlet, NeumannHelmholtz };

// Symmetric positive definite system matrix, scaled by h^2, and its factorization.
struct Operator {
  SparseMatrix matrix;
  std::unique_ptr<Eigen::SimplicialLDLT<SparseMatrix>> ldlt;
};

// Interior unknowns only; rows hold 4 v_k - sum(neighbours), i.e. -h^2 Laplacian.
SparseMatrix assemble_dirichlet(const GridSpec& g) {
  const int mx = g.nx() - 2;
  const int my = g.ny() - 2;
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(mx) * my * 5);
  auto id = [mx](int i, int j) { return j * mx + i; };
  for (int j = 0; j < my; ++j) {
    for (int i = 0; i < mx; ++i) {
      const int row = id(i, j);
      entries.emplace_back(row, row, 4.0);
      if (i > 0) entries.emplace_back(row, id(i - 1, j), -1.0);
      if (i < mx - 1) entries.emplace_back(row, id(i + 1, j), -1.0);
      if (j > 0) entries.emplace_back(row, id(i, j - 1), -1.0);
      if (j < my - 1) entries.emplace_back(row, id(i, j + 1), -1.0);
    }
  }
  SparseMatrix a(mx * my, mx * my);
  a.setFromTriplets(entries.begin(), entries.end());
  return a;
}

// All nodes are unknowns. Ghost nodes mirror their interior neighbour, which
// doubles the inward coupling on boundary rows; scaling each row by its
// trapezoidal weight restores symmetry.
SparseMatrix assemble_neumann_helmholtz(const GridSpec& g) {
  const int nx = g.nx();
  const int ny = g.ny();
  const double h2 = g.h() * g.h();
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(g.size() * 5);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int row = static_cast<int>(g.index(i, j));
      const double w = g.trapezoid_weight(i, j);
      entries.emplace_back(row, row, w * (h2 + 4.0));
      auto couple = [&](int ii, int jj, double c) {
        entries.emplace_back(row, static_cast<int>(g.index(ii, jj)), -w * c);
      };
      if (i == 0) {
        couple(1, j, 2.0);
      } else if (i == nx - 1) {
        couple(nx - 2, j, 2.0);
      } else {
        couple(i - 1, j, 1.0);
        couple(i + 1, j, 1.0);
      }
      if (j == 0) {
        couple(i, 1, 2.0);
      } else if (j == ny - 1) {
        couple(i, ny - 2, 2.0);
      } else {
        couple(i, j - 1, 1.0);
        couple(i, j + 1, 1.0);
      }
    }
  }
  SparseMatrix a(static_cast<Eigen::Index>(g.size()), static_cast<Eigen::Index>(g.size()));
  a.setFromTriplets(entries.begin(), entries.end());
  return a;
}

using CacheKey = std::tuple<OperatorKind, bool, int, int, double, double, double, double>;

std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

std::map<CacheKey, std::shared_ptr<const Operator>>& cache() {
  static std::map<CacheKey, std::shared_ptr<const Operator>> c;
  return c;
}

std::shared_ptr<const Operator> get_operator(OperatorKind kind, const GridSpec& g, bool factorize) {
  const Bounds& b = g.bounds();
  const CacheKey key{kind, factorize, g.nx(), g.ny(), b.x0, b.x1, b.y0, b.y1};
  std::lock_guard lock(cache_mutex());
  auto& c = cache();
  if (auto it = c.find(key); it != c.end()) return it->second;

  auto op = std::make_shared<Operator>();
  op->matrix = kind == OperatorKind::Dirichlet ? assemble_dirichlet(g) : assemble_neumann_helmholtz(g);
  if (factorize) {
    op->ldlt = std::make_unique<Eigen::SimplicialLDLT<SparseMatrix>>(op->matrix);
    if (op->ldlt->info() != Eigen::Success) {
      throw SolverError("sparse factorization failed", -1.0, 0);
    }
  }
  c.emplace(key, op);
  return op;
}

Vector solve_system(OperatorKind kind, const GridSpec& g, const Vector& rhs, const SolverConfig& cfg) {
  if (cfg.method == SolverMethod::DirectSparse) {
    auto op = get_operator(kind, g, true);
    return op->ldlt->solve(rhs);
  }
  if (!(cfg.tol > 0.0) || cfg.max_iter < 1) {
    throw std::invalid_argument("SolverConfig: tol and max_iter must be positive");
  }
  auto op = get_operator(kind, g, false);
  if (rhs.squaredNorm() == 0.0) return Vector::Zero(rhs.size());
  Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(cfg.tol);
  cg.setMaxIterations(cfg.max_iter);
  cg.compute(op->matrix);
  Vector x = cg.solve(rhs);
  if (cg.info() != Eigen::Success) {
    throw SolverError("conjugate gradient did not reach tolerance", cg.error(),
                      static_cast<int>(cg.iterations()));
  }
  return x;
}

}  // namespace

ScalarField solve_dirichlet(const ScalarField& f, const SolverConfig& cfg) {
  const GridSpec& g = f.spec();
  const int mx = g.nx() - 2;
  const int my = g.ny() - 2;
  const double h2 = g.h() * g.h();
  Vector rhs(mx * my);
  for (int j = 0; j < my; ++j) {
    for (int i = 0; i < mx; ++i) rhs[j * mx + i] = -h2 * f(i + 1, j + 1);
  }
  const Vector x = solve_system(OperatorKind::Dirichlet, g, rhs, cfg);
  ScalarField v(g);
  for (int j = 0; j < my; ++j) {
    for (int i = 0; i < mx; ++i) v(i + 1, j + 1) = x[j * mx + i];
  }
  return v;
}

ScalarField forward(const ScalarField& u, const SolverConfig& cfg) { return solve_dirichlet(u, cfg); }

ScalarField adjoint_residual(const ScalarField& u, const ScalarField& y, const SolverConfig& cfg) {
  require_same_spec(u.spec(), y.spec(), "adjoint_residual");
  return forward(forward(u, cfg) - y, cfg);
}

ScalarField solve_neumann_helmholtz(const ScalarField& g, const SolverConfig& cfg) {
  const GridSpec& s = g.spec();
  const double h2 = s.h() * s.h();
  Vector rhs(static_cast<Eigen::Index>(s.size()));
  for (int j = 0; j < s.ny(); ++j) {
    for (int i = 0; i < s.nx(); ++i) {
      rhs[static_cast<Eigen::Index>(s.index(i, j))] = s.trapezoid_weight(i, j) * h2 * g(i, j);
    }
  }
  const Vector x = solve_system(OperatorKind::NeumannHelmholtz, s, rhs, cfg);
  return ScalarField(s, std::vector<double>(x.data(), x.data() + x.size()));
}

ScalarField apply_neumann_helmholtz(const ScalarField& v) {
  const GridSpec& s = v.spec();
  const int nx = s.nx();
  const int ny = s.ny();
  const double inv_h2 = 1.0 / (s.h() * s.h());
  ScalarField out(s);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double west = v(i == 0 ? 1 : i - 1, j);
      const double east = v(i == nx - 1 ? nx - 2 : i + 1, j);
      const double south = v(i, j == 0 ? 1 : j - 1);
      const double north = v(i, j == ny - 1 ? ny - 2 : j + 1);
      out(i, j) = v(i, j) - (west + east + south + north - 4.0 * v(i, j)) * inv_h2;
    }
  }
  return out;
}

void clear_solver_cache() {
  std::lock_guard lock(cache_mutex());
  cache().clear();
}

}  // namespace lsinv
