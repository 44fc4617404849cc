// Serial reference kernels. Kept deliberately plain; the OpenMP versions in
// kernels_omp.cpp are tested and benchmarked against these.

#include "fracvisco/kernels.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace fracvisco::kernels {

namespace serial {

void spmv(const CsrView& a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < a.nrows; ++i) {
    double sum = 0.0;
    for (std::size_t k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k)
      sum += a.values[k] * x[a.col_indices[k]];
    y[i] = sum;
  }
}

double dot(std::span<const double> x, std::span<const double> y) {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += x[i] * y[i];
  return sum;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void weighted_sum(std::span<const double> coeffs, std::span<const std::vector<double>> vectors,
                  std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t v = 0; v < vectors.size(); ++v) {
    const double c = coeffs[v];
    const auto& vec = vectors[v];
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += c * vec[i];
  }
}

}  // namespace serial

namespace {

void check_spmv(const CsrView& a, std::span<const double> x, std::span<double> y) {
  if (x.size() != a.ncols || y.size() != a.nrows)
    throw std::invalid_argument("spmv: dimension mismatch");
}

void check_same(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

void check_weighted(std::span<const double> coeffs, std::span<const std::vector<double>> vectors,
                    std::span<double> out) {
  check_same(coeffs.size(), vectors.size(), "weighted_sum");
  for (const auto& v : vectors) check_same(v.size(), out.size(), "weighted_sum");
}

}  // namespace

void spmv(Exec exec, const CsrView& a, std::span<const double> x, std::span<double> y) {
  check_spmv(a, x, y);
  exec == Exec::parallel ? omp::spmv(a, x, y) : serial::spmv(a, x, y);
}

double dot(Exec exec, std::span<const double> x, std::span<const double> y) {
  check_same(x.size(), y.size(), "dot");
  return exec == Exec::parallel ? omp::dot(x, y) : serial::dot(x, y);
}

void axpy(Exec exec, double alpha, std::span<const double> x, std::span<double> y) {
  check_same(x.size(), y.size(), "axpy");
  exec == Exec::parallel ? omp::axpy(alpha, x, y) : serial::axpy(alpha, x, y);
}

void weighted_sum(Exec exec, std::span<const double> coeffs,
                  std::span<const std::vector<double>> vectors, std::span<double> out) {
  check_weighted(coeffs, vectors, out);
  exec == Exec::parallel ? omp::weighted_sum(coeffs, vectors, out)
                         : serial::weighted_sum(coeffs, vectors, out);
}

}  // namespace fracvisco::kernels
