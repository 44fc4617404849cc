#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fracvisco/kernels.hpp"

namespace fracvisco {

using Vector = std::vector<double>;
using kernels::Exec;

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Compressed sparse row matrix. Column indices are strictly increasing in
/// every row. Immutable after construction.
class SparseMatrix {
public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t nrows, std::size_t ncols, std::vector<std::size_t> row_offsets,
               std::vector<std::size_t> col_indices, std::vector<double> values);

  std::size_t nrows() const { return nrows_; }
  std::size_t ncols() const { return ncols_; }
  std::size_t nnz() const { return values_.size(); }

  const std::vector<std::size_t>& row_offsets() const { return row_offsets_; }
  const std::vector<std::size_t>& col_indices() const { return col_indices_; }
  const std::vector<double>& values() const { return values_; }

  /// Entry (i, j); zero when not stored.
  double at(std::size_t i, std::size_t j) const;

  /// Symmetric in structure and in values to `rel_tol` relative to max |a_ij|.
  bool is_symmetric(double rel_tol = 1e-12) const;

  kernels::CsrView view() const {
    return {nrows_, ncols_, row_offsets_, col_indices_, values_};
  }

private:
  std::size_t nrows_ = 0;
  std::size_t ncols_ = 0;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<std::size_t> col_indices_;
  std::vector<double> values_;
};

/// Duplicates are summed in input order; entries whose sum has magnitude
/// below 1e-300 are dropped.
SparseMatrix from_triplets(std::size_t nrows, std::size_t ncols, std::span<const Triplet> triplets);

Vector spmv(const SparseMatrix& a, std::span<const double> x, Exec exec = Exec::parallel);

/// alpha*A + beta*B over the union sparsity pattern.
SparseMatrix add_scaled(double alpha, const SparseMatrix& a, double beta, const SparseMatrix& b);

double dot(std::span<const double> x, std::span<const double> y, Exec exec = Exec::parallel);
double norm2(std::span<const double> x, Exec exec = Exec::parallel);

struct CgReport {
  std::size_t iterations = 0;
  double final_relative_residual = 0.0;
  bool converged = false;
};

struct CgOptions {
  double tol = 1e-10;
  std::size_t max_iter = 10000;
  bool jacobi = false;
  Exec exec = Exec::parallel;
};

/// Thrown when a NaN or Inf shows up inside an iteration.
class NumericalBreakdown : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/**
 * Conjugate gradients for a symmetric positive definite system.
 *
 * Stops when ||b - Ax||_2 / ||b||_2 <= tol, measured on the true residual.
 * Non-convergence after max_iter is reported through CgReport, not thrown.
 * `x0`, when given, is used as the starting iterate.
 */
std::pair<Vector, CgReport> cg_solve(const SparseMatrix& a, std::span<const double> b,
                                     const CgOptions& options = {},
                                     std::span<const double> x0 = {});

struct DirichletValue {
  std::size_t dof;
  double value;
};

/// Symmetric elimination of prescribed dofs: rhs is corrected by the
/// constrained columns, constrained rows and columns become identity rows and
/// the rhs carries the prescribed value there.
std::pair<SparseMatrix, Vector> eliminate_dirichlet(const SparseMatrix& a,
                                                    std::span<const double> b,
                                                    std::span<const DirichletValue> constrained);

}  // namespace fracvisco
