#pragma once

// Separable manufactured solutions w(x, y, t) = g(t) Phi(x, y) of the reduced
// velocity model
//
//   rho w' - div I^{1-alpha}( D eps(w) ) = f,
//
// for which the forcing is available in closed form:
//
//   f = rho g'(t) Phi - G(t) div(D eps(Phi)),   G = I^{1-alpha} g.

#include <array>
#include <functional>
#include <string>

#include "fracvisco/fem.hpp"
#include "fracvisco/fields.hpp"
#include "fracvisco/fracquad.hpp"

namespace fracvisco {

/// Second derivatives of a vector field: hessian[c][i][j] = d^2 Phi_c / dx_i dx_j.
using Hessian = std::array<Mat2, 2>;

struct SpatialField {
  std::function<Vec2(const Point&)> value;
  std::function<Mat2(const Point&)> gradient;
  std::function<Hessian(const Point&)> hessian;
};

/// (sin(pi x) sin(pi y), x y (1 - x)(1 - y)); vanishes on the unit square boundary.
SpatialField sine_bubble_field();
/// Constant field.
SpatialField translation_field(Vec2 c);
/// Phi(x) = A x.
SpatialField linear_field(Mat2 a);

enum class CaseName { example1, example2, custom };

const char* to_string(CaseName name);

struct ManufacturedCase {
  CaseName name = CaseName::custom;
  /// Time factor; every power must be positive so that g(0) = 0.
  PowerSeries g;
  SpatialField phi;
  Material material;

  double alpha() const { return material.alpha; }

  /// Throws std::invalid_argument on an invalid material or a non-positive power.
  void validate() const;

  /// True when g''' is unbounded near t = 0 (a non-integer power below 3).
  bool singular_third_derivative() const;

  /// Temporal convergence order the scheme can reach for this g:
  /// 2 - alpha when g''' is singular, otherwise 2.
  double expected_temporal_order() const;
};

/// w = (t + t^1.5) * sine_bubble_field().
ManufacturedCase example1(const Material& material = {});
/// w = t^3.5 * sine_bubble_field().
ManufacturedCase example2(const Material& material = {});

/// div(D eps(Phi)) = mu_hat Lap(Phi) + (lambda_hat + mu_hat) grad(div Phi).
Vec2 stress_divergence(const SpatialField& phi, const Material& material, const Point& p);

Vec2 exact_velocity(const ManufacturedCase& c, const Point& p, double t);
Mat2 exact_gradient(const ManufacturedCase& c, const Point& p, double t);
Vec2 forcing(const ManufacturedCase& c, const Point& p, double t);
/// Traction I^{1-alpha}(D eps(w)) n on a rectangle side.
Vec2 exact_traction(const ManufacturedCase& c, const Point& p, Side side, double t);

}  // namespace fracvisco
