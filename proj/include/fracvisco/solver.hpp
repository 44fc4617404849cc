#pragma once

// Fully discrete scheme: Crank-Nicolson in time with the fractional integral
// replaced by q_n. For n = 0..N-1,
//
//   (1/dt) M (W^{n+1} - W^n) + (1/2) K (q_{n+1}(W) + q_n(W)) = (F^{n+1} + F^n) / 2,
//
// with M the rho-weighted mass matrix, K the stiffness matrix, q_0 = 0 and W^0
// the elliptic projection of the initial velocity. Only B(n+1, n+1) = 1
// multiplies the unknown, so the step matrix
//
//   A = (1/dt) M + (scale/2) K,   scale = dt^{1-alpha} / Gamma(3 - alpha),
//
// is constant. The history enters as K applied to one combined vector
// sum_i (B(n+1, i) + B(n, i)) W^i.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "fracvisco/fem.hpp"
#include "fracvisco/fracquad.hpp"
#include "fracvisco/linalg.hpp"

namespace fracvisco {

/// Body force at a point and time.
using TimeVectorFn = std::function<Vec2(const Point&, double)>;
/// Traction at a boundary point, side and time.
using TimeTractionFn = std::function<Vec2(const Point&, Side, double)>;

struct ProblemSetup {
  std::shared_ptr<const FeSpace> space;
  Material material;
  double T = 1.0;
  std::size_t N = 1;
  TimeVectorFn f;
  std::optional<TimeTractionFn> traction;
  /// Gradient of the initial velocity; W^0 is its elliptic projection.
  GradientFn w0_grad = zero_mat2;

  /// Throws std::invalid_argument on T <= 0, N == 0, a bad material, a missing
  /// space or forcing, or an empty Dirichlet boundary.
  void validate() const;
};

struct SolverOptions {
  CgOptions cg;
  AssemblyOptions assembly;
  bool warm_start = true;
  /// Steps whose discrete residual is re-evaluated from the stored solution
  /// through the uncombined history sum.
  std::size_t residual_checks = 3;
  double residual_tol = 1e-8;
};

struct PhaseTimes {
  double assembly = 0.0;
  double projection = 0.0;
  double loads = 0.0;
  double history = 0.0;
  double solve = 0.0;
  double checks = 0.0;
  double total = 0.0;
};

struct SolveRecord {
  /// W^0 .. W^N
  std::vector<Vector> steps;
  /// One report per time step (N entries).
  std::vector<CgReport> cg_reports;
  PhaseTimes wall_times;
  /// Largest relative residual found by the residual checks.
  double max_checked_residual = 0.0;
};

/// A time step failed: CG did not converge, a non-finite value appeared, or a
/// residual check exceeded its tolerance.
class SolverError : public std::runtime_error {
public:
  SolverError(std::size_t step, const std::string& what);
  std::size_t step() const { return step_; }

private:
  std::size_t step_;
};

/// A = (1/dt) M + (scale/2) K with the constrained dofs eliminated.
SparseMatrix step_matrix(const SparseMatrix& mass, const SparseMatrix& stiffness,
                         const FracWeights& weights, std::span<const std::size_t> constrained);

/// Assembles M and K from the setup and returns the step matrix.
SparseMatrix step_matrix(const ProblemSetup& setup, const AssemblyOptions& options = {});

/**
 * Right-hand side for W^{n+1}, n = history.size() - 1:
 *
 *   (1/dt) M W^n - (scale/2) K [sum_{i<=n} B(n+1,i) W^i + sum_{i<=n} B(n,i) W^i]
 *     + (F^n + F^{n+1}) / 2
 *
 * where the second sum is absent for n = 0. Constrained entries are zero.
 */
Vector step_rhs(const SparseMatrix& mass, const SparseMatrix& stiffness, const FracWeights& weights,
                std::span<const Vector> history, std::span<const double> load_n,
                std::span<const double> load_next, std::span<const std::size_t> constrained,
                Exec exec = Exec::parallel);

/// Relative residual of step n -> n+1 evaluated from stored vectors with the
/// uncombined form sum_i B(n+1,i) K W^i + sum_i B(n,i) K W^i, over free dofs.
double step_residual(const SparseMatrix& mass, const SparseMatrix& stiffness,
                     const FracWeights& weights, std::span<const Vector> steps, std::size_t n,
                     std::span<const double> load_n, std::span<const double> load_next,
                     std::span<const std::size_t> constrained);

/// Time loop on pre-assembled operators; `load(n)` returns F(t_n).
SolveRecord march(const SparseMatrix& mass, const SparseMatrix& stiffness,
                  const FracWeights& weights, Vector initial,
                  const std::function<Vector(std::size_t)>& load,
                  std::span<const std::size_t> constrained, const SolverOptions& options = {});

/// Full solve: assembly, elliptic projection of the initial velocity, time loop.
SolveRecord run(const ProblemSetup& setup, const SolverOptions& options = {});

}  // namespace fracvisco
