#include "fracvisco/kernels.hpp"

#include <algorithm>
#include <cstdint>

#include <omp.h>

namespace fracvisco::kernels {

namespace omp {

void spmv(const CsrView& a, std::span<const double> x, std::span<double> y) {
  const auto n = static_cast<std::int64_t>(a.nrows);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k)
      sum += a.values[k] * x[a.col_indices[k]];
    y[i] = sum;
  }
}

double dot(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  const std::size_t nblocks = (n + dot_block - 1) / dot_block;
  std::vector<double> partial(nblocks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < static_cast<std::int64_t>(nblocks); ++b) {
    const std::size_t begin = static_cast<std::size_t>(b) * dot_block;
    const std::size_t end = std::min(n, begin + dot_block);
    double sum = 0.0;
    for (std::size_t i = begin; i < end; ++i) sum += x[i] * y[i];
    partial[b] = sum;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  const auto n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void weighted_sum(std::span<const double> coeffs, std::span<const std::vector<double>> vectors,
                  std::span<double> out) {
  // Entries are tiled so each tile of `out` stays in cache while the whole
  // history streams through it; per entry the summation order is unchanged.
  constexpr std::size_t tile = 1024;
  const std::size_t n = out.size();
  const auto ntiles = static_cast<std::int64_t>((n + tile - 1) / tile);
#pragma omp parallel for schedule(static)
  for (std::int64_t t = 0; t < ntiles; ++t) {
    const std::size_t begin = static_cast<std::size_t>(t) * tile;
    const std::size_t end = std::min(n, begin + tile);
    std::fill(out.begin() + begin, out.begin() + end, 0.0);
    for (std::size_t v = 0; v < vectors.size(); ++v) {
      const double c = coeffs[v];
      const double* vec = vectors[v].data();
      for (std::size_t i = begin; i < end; ++i) out[i] += c * vec[i];
    }
  }
}

}  // namespace omp

int max_threads() { return omp_get_max_threads(); }

void set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

}  // namespace fracvisco::kernels
