#pragma once

// Discrete Riemann-Liouville integral of order 1 - alpha on a uniform grid.
//
// The history w(t_0), ..., w(t_n) is interpolated piecewise linearly and the
// interpolant is integrated exactly against the kernel (t_n - s)^{-alpha}.
// This gives
//
//   q_n(w) = dt^{1-alpha} / Gamma(3 - alpha) * sum_{i=0}^{n} B(n, i) w(t_i)
//
// with, writing p = 2 - alpha,
//
//   B(n, 0) = n^{1-alpha} (p - n) + (n - 1)^p
//   B(n, i) = (n-i-1)^p + (n-i+1)^p - 2 (n-i)^p,   1 <= i <= n-1
//   B(n, n) = 1
//
// The rule is exact for piecewise linear w and has O(dt^2) error for C^2 w.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace fracvisco {

class FracWeights {
public:
  /// Grid t_n = n dt, dt = T / N. Throws std::invalid_argument unless
  /// 0 < alpha < 1, T > 0 and N >= 1.
  FracWeights(double alpha, double T, std::size_t N);

  double alpha() const { return alpha_; }
  std::size_t steps() const { return N_; }
  double dt() const { return dt_; }
  /// dt^{1-alpha} / Gamma(3 - alpha)
  double scale() const { return scale_; }
  double final_time() const { return T_; }

  /// B(n, i) for 0 <= i <= n <= N, n >= 1. Throws std::out_of_range otherwise.
  double weight(std::size_t n, std::size_t i) const;

  /// Writes B(n, 0..n) into out (size n + 1).
  void weights_row(std::size_t n, std::span<double> out) const;

private:
  double alpha_;
  double T_;
  std::size_t N_;
  double dt_;
  double scale_;
  // interior_[m] = (m-1)^p + (m+1)^p - 2 m^p for m >= 1
  std::vector<double> interior_;
};

/// Weight formula evaluated directly, without a FracWeights table. Uses a
/// cancellation-free form of the second differences.
double frac_weight(double alpha, std::size_t n, std::size_t i);

/// q_n applied to a history of coefficient vectors W^0..W^n (length n+1).
/// An empty history or n = 0 yields the zero vector (the integral over an
/// empty interval). Throws std::invalid_argument on ragged histories.
std::vector<double> qn_apply(const FracWeights& weights,
                             std::span<const std::vector<double>> history);

/// Scalar version of qn_apply.
double qn_apply_scalar(const FracWeights& weights, std::span<const double> samples);

/// Closed-form I^{1-alpha} t^p = Gamma(p+1) / Gamma(p+2-alpha) t^{p+1-alpha}.
/// Throws std::invalid_argument for p <= -1, t < 0 or alpha outside (0, 1).
double rl_integral_power(double alpha, double p, double t);

/// Finite power sum sum_k c_k t^{p_k}.
struct PowerSeries {
  struct Term {
    double coeff;
    double power;
  };
  std::vector<Term> terms;

  double operator()(double t) const;
  double derivative(double t) const;
  /// I^{1-alpha} of the series, term by term via rl_integral_power.
  double fractional_integral(double alpha, double t) const;
};

struct QuadratureOrderResult {
  std::vector<std::size_t> steps;
  /// max_n |I^{1-alpha} w(t_n) - q_n(w)| for each entry of `steps`.
  std::vector<double> errors;
  /// Least-squares slope of log(error) against log(dt). Empty when exact.
  std::optional<double> order;
  /// All errors at round-off level.
  bool exact = false;
};

/// Runs the discrete rule on [0, T] for every N in the sweep and compares
/// against `oracle(t)` = I^{1-alpha} w(t).
QuadratureOrderResult quadrature_error_order(double alpha, const std::function<double(double)>& w,
                                             const std::function<double(double)>& oracle, double T,
                                             std::span<const std::size_t> sweep);

/// Same, with the closed-form oracle of a power series.
QuadratureOrderResult quadrature_error_order(double alpha, const PowerSeries& w, double T,
                                             std::span<const std::size_t> sweep);

/// Least-squares slope of y against x.
double fit_slope(std::span<const double> x, std::span<const double> y);

}  // namespace fracvisco
