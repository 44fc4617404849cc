#include "fracvisco/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace fracvisco {

LineRule gauss_legendre(int npoints) {
  if (npoints < 1) throw std::invalid_argument("gauss_legendre: need at least one point");
  const int n = npoints;
  LineRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  rule.degree = 2 * n - 1;
  // Returns (P_n(x), P_n'(x)) by the three-term recurrence.
  const auto legendre = [n](double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    return std::pair{p1, n * (x * p1 - p0) / (x * x - 1.0)};
  };
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [pn, dpn] = legendre(x);
      const double dx = pn / dpn;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Map [-1, 1] -> [0, 1].
    rule.points[i] = 0.5 * (1.0 - x);
    rule.points[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = 0.5 * w;
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

LineRule segment_rule(int degree) {
  if (degree < 0) throw std::invalid_argument("segment_rule: negative degree");
  return gauss_legendre(degree / 2 + 1);
}

QuadratureRule triangle_rule(int degree) {
  if (degree < 0) throw std::invalid_argument("triangle_rule: negative degree");
  // xi = u, eta = v (1 - u), Jacobian (1 - u): degree + 1 in u, degree in v.
  const LineRule gu = segment_rule(degree + 1);
  const LineRule gv = segment_rule(degree);
  QuadratureRule rule;
  rule.degree = degree;
  for (std::size_t i = 0; i < gu.points.size(); ++i) {
    const double u = gu.points[i];
    for (std::size_t j = 0; j < gv.points.size(); ++j) {
      const double xi = u;
      const double eta = gv.points[j] * (1.0 - u);
      rule.points.push_back({1.0 - xi - eta, xi, eta});
      rule.weights.push_back(gu.weights[i] * gv.weights[j] * (1.0 - u));
    }
  }
  return rule;
}

}  // namespace fracvisco
