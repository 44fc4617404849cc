#pragma once

#include <array>
#include <vector>

namespace fracvisco {

/// Rule on the reference triangle {xi, eta >= 0, xi + eta <= 1}.
/// Points are barycentric (1 - xi - eta, xi, eta); weights sum to 1/2.
struct QuadratureRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  int degree = 0;
};

/// Rule on [0, 1]; weights sum to 1.
struct LineRule {
  std::vector<double> points;
  std::vector<double> weights;
  int degree = 0;
};

/// Gauss-Legendre with `npoints` nodes mapped to [0, 1] (exact to degree 2n-1).
LineRule gauss_legendre(int npoints);

/// Smallest Gauss-Legendre rule exact for polynomials of `degree` on [0, 1].
LineRule segment_rule(int degree);

/// Collapsed (Duffy) tensor Gauss-Legendre rule, exact for polynomials of
/// total degree `degree`, all weights positive.
QuadratureRule triangle_rule(int degree);

}  // namespace fracvisco
