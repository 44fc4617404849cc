#pragma once

// Data-parallel vector kernels. Each kernel exists twice: a plain serial
// reference in `serial::` and an OpenMP version in `omp::`. The OpenMP
// versions are deterministic for any thread count: spmv, axpy and
// weighted_sum accumulate every output entry in the same order as the serial
// reference (bitwise equal), and dot reduces fixed-size blocks in index order.

#include <cstddef>
#include <span>
#include <vector>

namespace fracvisco::kernels {

enum class Exec { serial, parallel };

/// Non-owning view of CSR storage.
struct CsrView {
  std::size_t nrows = 0;
  std::size_t ncols = 0;
  std::span<const std::size_t> row_offsets;
  std::span<const std::size_t> col_indices;
  std::span<const double> values;
};

/// Block length used by the parallel dot product.
inline constexpr std::size_t dot_block = 2048;

namespace serial {
void spmv(const CsrView& a, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
/// out = sum_i coeffs[i] * vectors[i]
void weighted_sum(std::span<const double> coeffs, std::span<const std::vector<double>> vectors,
                  std::span<double> out);
}  // namespace serial

namespace omp {
void spmv(const CsrView& a, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void weighted_sum(std::span<const double> coeffs, std::span<const std::vector<double>> vectors,
                  std::span<double> out);
}  // namespace omp

void spmv(Exec exec, const CsrView& a, std::span<const double> x, std::span<double> y);
double dot(Exec exec, std::span<const double> x, std::span<const double> y);
void axpy(Exec exec, double alpha, std::span<const double> x, std::span<double> y);
void weighted_sum(Exec exec, std::span<const double> coeffs,
                  std::span<const std::vector<double>> vectors, std::span<double> out);

/// Number of OpenMP threads the parallel kernels will use (1 without OpenMP).
int max_threads();
void set_threads(int n);

}  // namespace fracvisco::kernels
