#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fracvisco/kernels.hpp"
#include "fracvisco/linalg.hpp"

using namespace fracvisco;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

SparseMatrix random_matrix(std::size_t n, std::size_t per_row, std::mt19937& rng) {
  std::uniform_int_distribution<std::size_t> col(0, n - 1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < per_row; ++k) t.push_back({i, col(rng), u(rng)});
  return from_triplets(n, n, t);
}

}  // namespace

TEST(Kernels, SpmvSerialMatchesParallelBitwise) {
  std::mt19937 rng(1);
  const auto a = random_matrix(5000, 9, rng);
  const auto x = random_vector(5000, rng);
  std::vector<double> ys(5000), yp(5000);
  kernels::spmv(Exec::serial, a.view(), x, ys);
  kernels::spmv(Exec::parallel, a.view(), x, yp);
  EXPECT_EQ(ys, yp);
}

TEST(Kernels, WeightedSumSerialMatchesParallelBitwise) {
  std::mt19937 rng(2);
  std::vector<std::vector<double>> vs;
  for (int i = 0; i < 37; ++i) vs.push_back(random_vector(10007, rng));
  const auto c = random_vector(37, rng);
  std::vector<double> s(10007), p(10007);
  kernels::weighted_sum(Exec::serial, c, vs, s);
  kernels::weighted_sum(Exec::parallel, c, vs, p);
  EXPECT_EQ(s, p);
  // Independent check of one entry.
  double ref = 0.0;
  for (std::size_t i = 0; i < vs.size(); ++i) ref += c[i] * vs[i][123];
  EXPECT_NEAR(s[123], ref, 1e-13);
}

TEST(Kernels, DotAgreesAndIsThreadCountIndependent) {
  std::mt19937 rng(3);
  const auto x = random_vector(100003, rng);
  const auto y = random_vector(100003, rng);
  const double s = kernels::dot(Exec::serial, x, y);
  const int saved = kernels::max_threads();
  kernels::set_threads(1);
  const double p1 = kernels::dot(Exec::parallel, x, y);
  kernels::set_threads(4);
  const double p4 = kernels::dot(Exec::parallel, x, y);
  kernels::set_threads(saved);
  EXPECT_EQ(p1, p4);
  EXPECT_NEAR(s, p1, 1e-12 * std::sqrt(static_cast<double>(x.size())));
}

TEST(Kernels, AxpySerialMatchesParallel) {
  std::mt19937 rng(4);
  const auto x = random_vector(4099, rng);
  auto ys = random_vector(4099, rng);
  auto yp = ys;
  kernels::axpy(Exec::serial, 0.37, x, ys);
  kernels::axpy(Exec::parallel, 0.37, x, yp);
  EXPECT_EQ(ys, yp);
}

TEST(Kernels, DimensionMismatchThrows) {
  std::vector<double> a(3), b(4);
  EXPECT_THROW(kernels::dot(Exec::serial, a, b), std::invalid_argument);
  EXPECT_THROW(kernels::axpy(Exec::parallel, 1.0, a, b), std::invalid_argument);
  std::vector<std::vector<double>> vs{a, b};
  std::vector<double> c(2), out(3);
  EXPECT_THROW(kernels::weighted_sum(Exec::serial, c, vs, out), std::invalid_argument);
}
