#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <set>
#include <span>
#include <vector>

#include "fracvisco/fields.hpp"
#include "fracvisco/mesh.hpp"

namespace fracvisco {

/**
 * Vector-valued continuous Lagrange space of degree 1 or 2 on a Mesh.
 *
 * Scalar dofs are the vertices, followed (degree 2) by one dof per edge at its
 * midpoint. Vector dofs are component-blocked: all x-components first, then
 * all y-components, so vector dof = component * n_scalar_dofs() + scalar dof.
 *
 * Local ordering on a triangle (v0, v1, v2): vertex dofs 0..2, then edge dofs
 * for (v0,v1), (v1,v2), (v2,v0).
 */
class FeSpace {
public:
  FeSpace(std::shared_ptr<const Mesh> mesh, int degree, std::set<Side> dirichlet_sides);

  const Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
  int degree() const { return degree_; }

  std::size_t n_scalar_dofs() const { return dof_coords_.size(); }
  std::size_t n_dofs() const { return 2 * n_scalar_dofs(); }
  std::size_t dofs_per_cell() const { return degree_ == 1 ? 3 : 6; }
  std::size_t num_edges() const { return num_edges_; }

  /// Scalar dofs of triangle t in local order.
  std::span<const std::size_t> cell_dofs(std::size_t t) const {
    return {cell_dofs_.data() + t * dofs_per_cell(), dofs_per_cell()};
  }

  const std::vector<Point>& dof_coords() const { return dof_coords_; }

  /// Scalar dofs of each boundary edge: (first vertex, second vertex[, midpoint]).
  std::span<const std::size_t> boundary_edge_dofs(std::size_t e) const {
    const std::size_t per = degree_ == 1 ? 2 : 3;
    return {boundary_edge_dofs_.data() + e * per, per};
  }

  /// Sorted vector-dof indices fixed to zero (both components on Dirichlet sides).
  const std::vector<std::size_t>& dirichlet_dofs() const { return dirichlet_dofs_; }
  const std::set<Side>& dirichlet_sides() const { return dirichlet_sides_; }
  std::set<Side> neumann_sides() const;

private:
  std::shared_ptr<const Mesh> mesh_;
  int degree_;
  std::set<Side> dirichlet_sides_;
  std::size_t num_edges_ = 0;
  std::vector<std::size_t> cell_dofs_;
  std::vector<std::size_t> boundary_edge_dofs_;
  std::vector<Point> dof_coords_;
  std::vector<std::size_t> dirichlet_dofs_;
};

/// Reference basis values and (xi, eta)-gradients at a barycentric point.
void reference_basis(int degree, const std::array<double, 3>& bary, std::span<double> values,
                     std::span<std::array<double, 2>> grads);

/// Values of the 1D Lagrange basis restricted to an edge, at s in [0, 1],
/// ordered (start vertex, end vertex[, midpoint]).
void edge_basis(int degree, double s, std::span<double> values);

/// Affine map of one triangle.
struct CellGeometry {
  Point origin;
  std::array<std::array<double, 2>, 2> jacobian;      // columns: v1 - v0, v2 - v0
  std::array<std::array<double, 2>, 2> inv_jacobian_t;  // J^{-T}
  double det = 0.0;

  CellGeometry(const Mesh& mesh, std::size_t t);
  Point map(const std::array<double, 3>& bary) const;
  std::array<double, 2> physical_gradient(const std::array<double, 2>& ref) const;
};

/// Nodal interpolant of a vector field.
std::vector<double> interpolate(const FeSpace& space, const VectorFn& field);

/// Value and gradient of a discrete field inside triangle t.
struct PointEvaluation {
  Vec2 value;
  Mat2 gradient;
};
PointEvaluation evaluate(const FeSpace& space, std::span<const double> coeffs, std::size_t t,
                         const std::array<double, 3>& bary);

}  // namespace fracvisco
