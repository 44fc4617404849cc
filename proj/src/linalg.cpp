#include "fracvisco/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace fracvisco {

SparseMatrix::SparseMatrix(std::size_t nrows, std::size_t ncols,
                           std::vector<std::size_t> row_offsets,
                           std::vector<std::size_t> col_indices, std::vector<double> values)
    : nrows_(nrows),
      ncols_(ncols),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)) {
  if (row_offsets_.size() != nrows_ + 1 || row_offsets_.front() != 0 ||
      row_offsets_.back() != col_indices_.size() || col_indices_.size() != values_.size())
    throw std::invalid_argument("SparseMatrix: inconsistent CSR arrays");
  for (std::size_t i = 0; i < nrows_; ++i) {
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      if (col_indices_[k] >= ncols_) throw std::out_of_range("SparseMatrix: column out of range");
      if (k > row_offsets_[i] && col_indices_[k] <= col_indices_[k - 1])
        throw std::invalid_argument("SparseMatrix: columns not strictly increasing");
    }
  }
}

double SparseMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= nrows_ || j >= ncols_) throw std::out_of_range("SparseMatrix::at: index out of range");
  const auto first = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i]);
  const auto last = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i + 1]);
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - col_indices_.begin())];
}

bool SparseMatrix::is_symmetric(double rel_tol) const {
  if (nrows_ != ncols_) return false;
  double scale = 0.0;
  for (double v : values_) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < nrows_; ++i) {
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      const std::size_t j = col_indices_[k];
      const auto first = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[j]);
      const auto last = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[j + 1]);
      const auto it = std::lower_bound(first, last, i);
      if (it == last || *it != i) return false;
      const double other = values_[static_cast<std::size_t>(it - col_indices_.begin())];
      if (std::abs(other - values_[k]) > rel_tol * scale) return false;
    }
  }
  return true;
}

SparseMatrix from_triplets(std::size_t nrows, std::size_t ncols,
                           std::span<const Triplet> triplets) {
  // Stable counting sort by row, then stable sort by column inside each row,
  // so duplicates are summed in input order.
  std::vector<std::size_t> count(nrows + 1, 0);
  for (const auto& t : triplets) {
    if (t.row >= nrows || t.col >= ncols) {
      std::ostringstream msg;
      msg << "from_triplets: index (" << t.row << ", " << t.col << ") out of range for " << nrows
          << "x" << ncols;
      throw std::out_of_range(msg.str());
    }
    ++count[t.row + 1];
  }
  std::partial_sum(count.begin(), count.end(), count.begin());
  std::vector<std::size_t> order(triplets.size());
  {
    std::vector<std::size_t> cursor(count.begin(), count.end() - 1);
    for (std::size_t k = 0; k < triplets.size(); ++k) order[cursor[triplets[k].row]++] = k;
  }

  std::vector<std::size_t> offsets(nrows + 1, 0);
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  cols.reserve(triplets.size() / 2);
  vals.reserve(triplets.size() / 2);
  for (std::size_t i = 0; i < nrows; ++i) {
    const auto first = order.begin() + static_cast<std::ptrdiff_t>(count[i]);
    const auto last = order.begin() + static_cast<std::ptrdiff_t>(count[i + 1]);
    std::stable_sort(first, last, [&](std::size_t a, std::size_t b) {
      return triplets[a].col < triplets[b].col;
    });
    for (auto it = first; it != last;) {
      const std::size_t col = triplets[*it].col;
      double sum = 0.0;
      for (; it != last && triplets[*it].col == col; ++it) sum += triplets[*it].value;
      if (std::abs(sum) >= 1e-300) {
        cols.push_back(col);
        vals.push_back(sum);
      }
    }
    offsets[i + 1] = cols.size();
  }
  return SparseMatrix(nrows, ncols, std::move(offsets), std::move(cols), std::move(vals));
}

Vector spmv(const SparseMatrix& a, std::span<const double> x, Exec exec) {
  Vector y(a.nrows());
  kernels::spmv(exec, a.view(), x, y);
  return y;
}

SparseMatrix add_scaled(double alpha, const SparseMatrix& a, double beta, const SparseMatrix& b) {
  if (a.nrows() != b.nrows() || a.ncols() != b.ncols())
    throw std::invalid_argument("add_scaled: dimension mismatch");
  std::vector<std::size_t> offsets(a.nrows() + 1, 0);
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  cols.reserve(std::max(a.nnz(), b.nnz()));
  vals.reserve(std::max(a.nnz(), b.nnz()));
  const auto& ar = a.row_offsets();
  const auto& br = b.row_offsets();
  for (std::size_t i = 0; i < a.nrows(); ++i) {
    std::size_t ka = ar[i], kb = br[i];
    while (ka < ar[i + 1] || kb < br[i + 1]) {
      const std::size_t ca = ka < ar[i + 1] ? a.col_indices()[ka] : a.ncols();
      const std::size_t cb = kb < br[i + 1] ? b.col_indices()[kb] : b.ncols();
      if (ca < cb) {
        cols.push_back(ca);
        vals.push_back(alpha * a.values()[ka++]);
      } else if (cb < ca) {
        cols.push_back(cb);
        vals.push_back(beta * b.values()[kb++]);
      } else {
        cols.push_back(ca);
        vals.push_back(alpha * a.values()[ka++] + beta * b.values()[kb++]);
      }
    }
    offsets[i + 1] = cols.size();
  }
  return SparseMatrix(a.nrows(), a.ncols(), std::move(offsets), std::move(cols),
                      std::move(vals));
}

double dot(std::span<const double> x, std::span<const double> y, Exec exec) {
  return kernels::dot(exec, x, y);
}

double norm2(std::span<const double> x, Exec exec) { return std::sqrt(kernels::dot(exec, x, x)); }

namespace {

void require_finite(double value, const char* what, std::size_t iteration) {
  if (!std::isfinite(value)) {
    std::ostringstream msg;
    msg << "cg_solve: non-finite " << what << " at iteration " << iteration;
    throw NumericalBreakdown(msg.str());
  }
}

}  // namespace

std::pair<Vector, CgReport> cg_solve(const SparseMatrix& a, std::span<const double> b,
                                     const CgOptions& options, std::span<const double> x0) {
  const std::size_t n = a.nrows();
  if (a.ncols() != n || b.size() != n) throw std::invalid_argument("cg_solve: dimension mismatch");
  if (!x0.empty() && x0.size() != n) throw std::invalid_argument("cg_solve: x0 size mismatch");
  const Exec exec = options.exec;

  const double bnorm = norm2(b, exec);
  require_finite(bnorm, "right-hand side norm", 0);
  CgReport report;
  if (bnorm == 0.0) {
    report.converged = true;
    return {Vector(n, 0.0), report};
  }

  Vector inv_diag;
  if (options.jacobi) {
    inv_diag.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double d = a.at(i, i);
      if (!(d > 0.0)) throw NumericalBreakdown("cg_solve: Jacobi preconditioner needs a positive diagonal");
      inv_diag[i] = 1.0 / d;
    }
  }
  const auto precondition = [&](const Vector& r, Vector& z) {
    if (options.jacobi) {
      for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    } else {
      std::copy(r.begin(), r.end(), z.begin());
    }
  };

  Vector x = x0.empty() ? Vector(n, 0.0) : Vector(x0.begin(), x0.end());
  Vector r(n), z(n), p(n), ap(n);
  const auto true_residual = [&]() {
    kernels::spmv(exec, a.view(), x, ap);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ap[i];
    return norm2(r, exec) / bnorm;
  };

  double rel = true_residual();
  require_finite(rel, "residual", 0);
  // Outer loop restarts from the true residual whenever the recursively
  // updated one claims convergence but the true one does not.
  while (rel > options.tol && report.iterations < options.max_iter) {
    precondition(r, z);
    p = z;
    double rz = dot(r, z, exec);
    while (report.iterations < options.max_iter) {
      kernels::spmv(exec, a.view(), p, ap);
      const double pap = dot(p, ap, exec);
      require_finite(pap, "curvature p'Ap", report.iterations);
      if (pap <= 0.0) {
        std::ostringstream msg;
        msg << "cg_solve: matrix not positive definite (p'Ap = " << pap << ") at iteration "
            << report.iterations;
        throw NumericalBreakdown(msg.str());
      }
      const double step = rz / pap;
      kernels::axpy(exec, step, p, x);
      kernels::axpy(exec, -step, ap, r);
      ++report.iterations;
      const double rec = norm2(r, exec) / bnorm;
      require_finite(rec, "residual", report.iterations);
      if (rec <= options.tol) break;
      precondition(r, z);
      const double rz_next = dot(r, z, exec);
      const double beta = rz_next / rz;
      rz = rz_next;
      for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    rel = true_residual();
    require_finite(rel, "residual", report.iterations);
  }
  report.final_relative_residual = rel;
  report.converged = rel <= options.tol;
  return {std::move(x), report};
}

std::pair<SparseMatrix, Vector> eliminate_dirichlet(const SparseMatrix& a,
                                                    std::span<const double> b,
                                                    std::span<const DirichletValue> constrained) {
  const std::size_t n = a.nrows();
  if (a.ncols() != n || b.size() != n)
    throw std::invalid_argument("eliminate_dirichlet: dimension mismatch");
  if (constrained.empty()) return {a, Vector(b.begin(), b.end())};

  std::vector<char> is_fixed(n, 0);
  Vector g(n, 0.0);
  for (const auto& c : constrained) {
    if (c.dof >= n) throw std::out_of_range("eliminate_dirichlet: dof index out of range");
    if (is_fixed[c.dof] && g[c.dof] != c.value) {
      std::ostringstream msg;
      msg << "eliminate_dirichlet: dof " << c.dof << " constrained to conflicting values";
      throw std::invalid_argument(msg.str());
    }
    is_fixed[c.dof] = 1;
    g[c.dof] = c.value;
  }

  Vector rhs(b.begin(), b.end());
  std::vector<std::size_t> offsets(n + 1, 0);
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  cols.reserve(a.nnz() + n);
  vals.reserve(a.nnz() + n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t begin = a.row_offsets()[i], end = a.row_offsets()[i + 1];
    if (is_fixed[i]) {
      bool diagonal_done = false;
      for (std::size_t k = begin; k < end; ++k) {
        const std::size_t j = a.col_indices()[k];
        if (!diagonal_done && j > i) {
          cols.push_back(i);
          vals.push_back(1.0);
          diagonal_done = true;
        }
        cols.push_back(j);
        vals.push_back(j == i ? 1.0 : 0.0);
        if (j == i) diagonal_done = true;
      }
      if (!diagonal_done) {
        cols.push_back(i);
        vals.push_back(1.0);
      }
      rhs[i] = g[i];
    } else {
      for (std::size_t k = begin; k < end; ++k) {
        const std::size_t j = a.col_indices()[k];
        double v = a.values()[k];
        if (is_fixed[j]) {
          rhs[i] -= v * g[j];
          v = 0.0;
        }
        cols.push_back(j);
        vals.push_back(v);
      }
    }
    offsets[i + 1] = cols.size();
  }
  return {SparseMatrix(n, n, std::move(offsets), std::move(cols), std::move(vals)),
          std::move(rhs)};
}

}  // namespace fracvisco
