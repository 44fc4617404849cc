#pragma once

#include <array>
#include <functional>

#include "fracvisco/mesh.hpp"

namespace fracvisco {

using Vec2 = std::array<double, 2>;
/// Gradient of a vector field: grad[i][j] = d u_i / d x_j.
using Mat2 = std::array<std::array<double, 2>, 2>;

using VectorFn = std::function<Vec2(const Point&)>;
using GradientFn = std::function<Mat2(const Point&)>;
/// Boundary traction at a point on the given side.
using TractionFn = std::function<Vec2(const Point&, Side)>;

inline Vec2 zero_vec2(const Point&) { return {0.0, 0.0}; }
inline Mat2 zero_mat2(const Point&) { return {{{0.0, 0.0}, {0.0, 0.0}}}; }

}  // namespace fracvisco
