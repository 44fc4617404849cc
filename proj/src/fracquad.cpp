#include "fracvisco/fracquad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "fracvisco/kernels.hpp"

namespace fracvisco {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
}

// (m-1)^p + (m+1)^p - 2 m^p  written as  m^p [ ((1+1/m)^p - 1) + ((1-1/m)^p - 1) ]
double second_difference(double p, double m) {
  const double x = 1.0 / m;
  return std::pow(m, p) * (std::expm1(p * std::log1p(x)) + std::expm1(p * std::log1p(-x)));
}

// n^{1-alpha} (p - n) + (n-1)^p  written as  n^p ((1-1/n)^p - 1) + p n^{p-1}
double first_weight(double p, double n) {
  return std::pow(n, p) * std::expm1(p * std::log1p(-1.0 / n)) + p * std::pow(n, p - 1.0);
}

}  // namespace

double frac_weight(double alpha, std::size_t n, std::size_t i) {
  check_alpha(alpha);
  if (n == 0 || i > n) throw std::out_of_range("frac_weight: need 0 <= i <= n, n >= 1");
  const double p = 2.0 - alpha;
  if (i == n) return 1.0;
  if (i == 0) return first_weight(p, static_cast<double>(n));
  return second_difference(p, static_cast<double>(n - i));
}

FracWeights::FracWeights(double alpha, double T, std::size_t N)
    : alpha_(alpha), T_(T), N_(N) {
  check_alpha(alpha);
  if (!(T > 0.0)) throw std::invalid_argument("FracWeights: T must be positive");
  if (N == 0) throw std::invalid_argument("FracWeights: N must be >= 1");
  dt_ = T / static_cast<double>(N);
  scale_ = std::pow(dt_, 1.0 - alpha) / std::tgamma(3.0 - alpha);
  const double p = 2.0 - alpha;
  interior_.resize(N + 1, 0.0);
  for (std::size_t m = 1; m < interior_.size(); ++m)
    interior_[m] = second_difference(p, static_cast<double>(m));
}

double FracWeights::weight(std::size_t n, std::size_t i) const {
  if (n == 0 || n > N_ || i > n) {
    std::ostringstream msg;
    msg << "FracWeights::weight: invalid index (n=" << n << ", i=" << i << ", N=" << N_ << ")";
    throw std::out_of_range(msg.str());
  }
  if (i == n) return 1.0;
  if (i == 0) return first_weight(2.0 - alpha_, static_cast<double>(n));
  return interior_[n - i];
}

void FracWeights::weights_row(std::size_t n, std::span<double> out) const {
  if (out.size() != n + 1) throw std::invalid_argument("weights_row: output size must be n + 1");
  for (std::size_t i = 0; i <= n; ++i) out[i] = weight(n, i);
}

std::vector<double> qn_apply(const FracWeights& weights,
                             std::span<const std::vector<double>> history) {
  if (history.empty()) return {};
  const std::size_t dim = history.front().size();
  for (const auto& v : history)
    if (v.size() != dim) throw std::invalid_argument("qn_apply: history vectors differ in size");
  std::vector<double> out(dim, 0.0);
  const std::size_t n = history.size() - 1;
  if (n == 0) return out;
  std::vector<double> coeffs(n + 1);
  weights.weights_row(n, coeffs);
  for (double& c : coeffs) c *= weights.scale();
  kernels::weighted_sum(kernels::Exec::serial, coeffs, history, out);
  return out;
}

double qn_apply_scalar(const FracWeights& weights, std::span<const double> samples) {
  if (samples.size() <= 1) return 0.0;
  const std::size_t n = samples.size() - 1;
  double sum = 0.0;
  for (std::size_t i = 0; i <= n; ++i) sum += weights.weight(n, i) * samples[i];
  return weights.scale() * sum;
}

double rl_integral_power(double alpha, double p, double t) {
  check_alpha(alpha);
  if (!(p > -1.0)) throw std::invalid_argument("rl_integral_power: need p > -1");
  if (!(t >= 0.0)) throw std::invalid_argument("rl_integral_power: need t >= 0");
  if (t == 0.0) return 0.0;
  // Ratio of Gammas through lgamma keeps large p finite.
  const double log_ratio = std::lgamma(p + 1.0) - std::lgamma(p + 2.0 - alpha);
  return std::exp(log_ratio + (p + 1.0 - alpha) * std::log(t));
}

double PowerSeries::operator()(double t) const {
  double sum = 0.0;
  for (const auto& term : terms) sum += term.coeff * std::pow(t, term.power);
  return sum;
}

double PowerSeries::derivative(double t) const {
  double sum = 0.0;
  for (const auto& term : terms) {
    if (term.power == 0.0) continue;
    sum += term.coeff * term.power * std::pow(t, term.power - 1.0);
  }
  return sum;
}

double PowerSeries::fractional_integral(double alpha, double t) const {
  double sum = 0.0;
  for (const auto& term : terms) sum += term.coeff * rl_integral_power(alpha, term.power, t);
  return sum;
}

double fit_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_slope: need >= 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

QuadratureOrderResult quadrature_error_order(double alpha, const std::function<double(double)>& w,
                                             const std::function<double(double)>& oracle, double T,
                                             std::span<const std::size_t> sweep) {
  QuadratureOrderResult result;
  double magnitude = 0.0;
  for (std::size_t N : sweep) {
    const FracWeights weights(alpha, T, N);
    std::vector<double> samples;
    samples.reserve(N + 1);
    double max_err = 0.0;
    for (std::size_t n = 0; n <= N; ++n) {
      const double t = static_cast<double>(n) * weights.dt();
      samples.push_back(w(t));
      const double exact = oracle(t);
      magnitude = std::max(magnitude, std::abs(exact));
      max_err = std::max(max_err, std::abs(exact - qn_apply_scalar(weights, samples)));
    }
    result.steps.push_back(N);
    result.errors.push_back(max_err);
  }
  // Round-off floor: a few hundred ulps of the largest integral value.
  const double floor = 512.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, magnitude);
  result.exact = std::all_of(result.errors.begin(), result.errors.end(),
                             [floor](double e) { return e <= floor; });
  if (!result.exact && result.steps.size() >= 2) {
    std::vector<double> log_dt, log_err;
    for (std::size_t k = 0; k < result.steps.size(); ++k) {
      log_dt.push_back(std::log(T / static_cast<double>(result.steps[k])));
      log_err.push_back(std::log(result.errors[k]));
    }
    result.order = fit_slope(log_dt, log_err);
  }
  return result;
}

QuadratureOrderResult quadrature_error_order(double alpha, const PowerSeries& w, double T,
                                             std::span<const std::size_t> sweep) {
  return quadrature_error_order(
      alpha, [&w](double t) { return w(t); },
      [&w, alpha](double t) { return w.fractional_integral(alpha, t); }, T, sweep);
}

}  // namespace fracvisco
