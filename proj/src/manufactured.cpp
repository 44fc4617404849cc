#include "fracvisco/manufactured.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fracvisco {

SpatialField sine_bubble_field() {
  constexpr double pi = std::numbers::pi;
  SpatialField f;
  f.value = [](const Point& p) -> Vec2 {
    return {std::sin(pi * p.x) * std::sin(pi * p.y), p.x * p.y * (1.0 - p.x) * (1.0 - p.y)};
  };
  f.gradient = [](const Point& p) -> Mat2 {
    const double sx = std::sin(pi * p.x), cx = std::cos(pi * p.x);
    const double sy = std::sin(pi * p.y), cy = std::cos(pi * p.y);
    const double ax = p.x - p.x * p.x, ay = p.y - p.y * p.y;
    const double dax = 1.0 - 2.0 * p.x, day = 1.0 - 2.0 * p.y;
    return {{{pi * cx * sy, pi * sx * cy}, {dax * ay, ax * day}}};
  };
  f.hessian = [](const Point& p) -> Hessian {
    const double sx = std::sin(pi * p.x), cx = std::cos(pi * p.x);
    const double sy = std::sin(pi * p.y), cy = std::cos(pi * p.y);
    const double ax = p.x - p.x * p.x, ay = p.y - p.y * p.y;
    const double dax = 1.0 - 2.0 * p.x, day = 1.0 - 2.0 * p.y;
    const double pi2 = pi * pi;
    return {Mat2{{{-pi2 * sx * sy, pi2 * cx * cy}, {pi2 * cx * cy, -pi2 * sx * sy}}},
            Mat2{{{-2.0 * ay, dax * day}, {dax * day, -2.0 * ax}}}};
  };
  return f;
}

SpatialField translation_field(Vec2 c) {
  SpatialField f;
  f.value = [c](const Point&) { return c; };
  f.gradient = zero_mat2;
  f.hessian = [](const Point&) { return Hessian{}; };
  return f;
}

SpatialField linear_field(Mat2 a) {
  SpatialField f;
  f.value = [a](const Point& p) -> Vec2 {
    return {a[0][0] * p.x + a[0][1] * p.y, a[1][0] * p.x + a[1][1] * p.y};
  };
  f.gradient = [a](const Point&) { return a; };
  f.hessian = [](const Point&) { return Hessian{}; };
  return f;
}

const char* to_string(CaseName name) {
  switch (name) {
    case CaseName::example1: return "example1";
    case CaseName::example2: return "example2";
    case CaseName::custom: return "custom";
  }
  return "?";
}

void ManufacturedCase::validate() const {
  material.validate();
  if (g.terms.empty()) throw std::invalid_argument("ManufacturedCase: empty time factor");
  for (const auto& term : g.terms)
    if (!(term.power > 0.0))
      throw std::invalid_argument("ManufacturedCase: time factor powers must be positive (g(0) = 0)");
  if (!phi.value || !phi.gradient || !phi.hessian)
    throw std::invalid_argument("ManufacturedCase: spatial field is incomplete");
}

bool ManufacturedCase::singular_third_derivative() const {
  for (const auto& term : g.terms) {
    const bool integer = term.power == std::floor(term.power);
    if (!integer && term.power < 3.0 && term.coeff != 0.0) return true;
  }
  return false;
}

double ManufacturedCase::expected_temporal_order() const {
  return singular_third_derivative() ? 2.0 - alpha() : 2.0;
}

ManufacturedCase example1(const Material& material) {
  ManufacturedCase c;
  c.name = CaseName::example1;
  c.g.terms = {{1.0, 1.0}, {1.0, 1.5}};
  c.phi = sine_bubble_field();
  c.material = material;
  return c;
}

ManufacturedCase example2(const Material& material) {
  ManufacturedCase c;
  c.name = CaseName::example2;
  c.g.terms = {{1.0, 3.5}};
  c.phi = sine_bubble_field();
  c.material = material;
  return c;
}

Vec2 stress_divergence(const SpatialField& phi, const Material& material, const Point& p) {
  const Hessian h = phi.hessian(p);
  const double mu = material.mu_hat;
  const double lm = material.lambda_hat + material.mu_hat;
  Vec2 out{};
  for (int i = 0; i < 2; ++i) {
    const double laplacian = h[i][0][0] + h[i][1][1];
    // d_i (div Phi) = sum_j d_i d_j Phi_j
    const double grad_div = h[0][i][0] + h[1][i][1];
    out[i] = mu * laplacian + lm * grad_div;
  }
  return out;
}

Vec2 exact_velocity(const ManufacturedCase& c, const Point& p, double t) {
  const double g = c.g(t);
  const Vec2 v = c.phi.value(p);
  return {g * v[0], g * v[1]};
}

Mat2 exact_gradient(const ManufacturedCase& c, const Point& p, double t) {
  const double g = c.g(t);
  Mat2 m = c.phi.gradient(p);
  for (auto& row : m)
    for (double& v : row) v *= g;
  return m;
}

Vec2 forcing(const ManufacturedCase& c, const Point& p, double t) {
  const double dg = c.g.derivative(t);
  const double big_g = c.g.fractional_integral(c.alpha(), t);
  const Vec2 v = c.phi.value(p);
  const Vec2 l = stress_divergence(c.phi, c.material, p);
  const double rho = c.material.rho;
  return {rho * dg * v[0] - big_g * l[0], rho * dg * v[1] - big_g * l[1]};
}

Vec2 exact_traction(const ManufacturedCase& c, const Point& p, Side side, double t) {
  const double big_g = c.g.fractional_integral(c.alpha(), t);
  const Mat2 sigma = c.material.stress(c.phi.gradient(p));
  const Point n = outward_normal(side);
  return {big_g * (sigma[0][0] * n.x + sigma[0][1] * n.y),
          big_g * (sigma[1][0] * n.x + sigma[1][1] * n.y)};
}

}  // namespace fracvisco
