#include "fracvisco/fe_space.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>

namespace fracvisco {

FeSpace::FeSpace(std::shared_ptr<const Mesh> mesh, int degree, std::set<Side> dirichlet_sides)
    : mesh_(std::move(mesh)), degree_(degree), dirichlet_sides_(std::move(dirichlet_sides)) {
  if (!mesh_) throw std::invalid_argument("FeSpace: null mesh");
  if (degree_ != 1 && degree_ != 2) throw std::invalid_argument("FeSpace: degree must be 1 or 2");

  const Mesh& m = *mesh_;
  const std::size_t nv = m.num_vertices();
  dof_coords_ = m.vertices();

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_index;
  const auto key = [](std::size_t a, std::size_t b) {
    return a < b ? std::pair{a, b} : std::pair{b, a};
  };
  for (const auto& tri : m.triangles()) {
    for (int k = 0; k < 3; ++k) {
      const auto [it, inserted] = edge_index.try_emplace(key(tri[k], tri[(k + 1) % 3]), edge_index.size());
      (void)it;
      (void)inserted;
    }
  }
  num_edges_ = edge_index.size();

  // Edge numbering follows first appearance in triangle order.
  std::vector<std::pair<std::size_t, std::size_t>> edges(num_edges_);
  for (const auto& [verts, idx] : edge_index) edges[idx] = verts;

  cell_dofs_.reserve(m.num_triangles() * dofs_per_cell());
  for (const auto& tri : m.triangles()) {
    cell_dofs_.insert(cell_dofs_.end(), tri.begin(), tri.end());
    if (degree_ == 2) {
      for (int k = 0; k < 3; ++k)
        cell_dofs_.push_back(nv + edge_index.at(key(tri[k], tri[(k + 1) % 3])));
    }
  }

  if (degree_ == 2) {
    for (const auto& [a, b] : edges) {
      const Point& pa = m.vertices()[a];
      const Point& pb = m.vertices()[b];
      dof_coords_.push_back({0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)});
    }
  }

  std::set<std::size_t> fixed;
  for (const auto& e : m.boundary_edges()) {
    boundary_edge_dofs_.push_back(e.vertices[0]);
    boundary_edge_dofs_.push_back(e.vertices[1]);
    std::size_t mid = 0;
    if (degree_ == 2) {
      mid = nv + edge_index.at(key(e.vertices[0], e.vertices[1]));
      boundary_edge_dofs_.push_back(mid);
    }
    if (dirichlet_sides_.count(e.side)) {
      fixed.insert(e.vertices[0]);
      fixed.insert(e.vertices[1]);
      if (degree_ == 2) fixed.insert(mid);
    }
  }
  const std::size_t ns = n_scalar_dofs();
  for (int c = 0; c < 2; ++c)
    for (auto s : fixed) dirichlet_dofs_.push_back(c * ns + s);
}

std::set<Side> FeSpace::neumann_sides() const {
  std::set<Side> out;
  for (Side s : all_sides)
    if (!dirichlet_sides_.count(s)) out.insert(s);
  return out;
}

void reference_basis(int degree, const std::array<double, 3>& bary, std::span<double> values,
                     std::span<std::array<double, 2>> grads) {
  static constexpr std::array<std::array<double, 2>, 3> dl{{{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}}};
  if (degree == 1) {
    for (int i = 0; i < 3; ++i) {
      values[i] = bary[i];
      grads[i] = dl[i];
    }
    return;
  }
  for (int i = 0; i < 3; ++i) {
    const double l = bary[i];
    values[i] = l * (2.0 * l - 1.0);
    grads[i] = {(4.0 * l - 1.0) * dl[i][0], (4.0 * l - 1.0) * dl[i][1]};
  }
  for (int k = 0; k < 3; ++k) {
    const int a = k, b = (k + 1) % 3;
    values[3 + k] = 4.0 * bary[a] * bary[b];
    grads[3 + k] = {4.0 * (bary[b] * dl[a][0] + bary[a] * dl[b][0]),
                    4.0 * (bary[b] * dl[a][1] + bary[a] * dl[b][1])};
  }
}

void edge_basis(int degree, double s, std::span<double> values) {
  if (degree == 1) {
    values[0] = 1.0 - s;
    values[1] = s;
  } else {
    values[0] = (1.0 - s) * (1.0 - 2.0 * s);
    values[1] = s * (2.0 * s - 1.0);
    values[2] = 4.0 * s * (1.0 - s);
  }
}

CellGeometry::CellGeometry(const Mesh& mesh, std::size_t t) {
  const auto& tri = mesh.triangles()[t];
  const Point& p0 = mesh.vertices()[tri[0]];
  const Point& p1 = mesh.vertices()[tri[1]];
  const Point& p2 = mesh.vertices()[tri[2]];
  origin = p0;
  jacobian = {{{p1.x - p0.x, p2.x - p0.x}, {p1.y - p0.y, p2.y - p0.y}}};
  det = jacobian[0][0] * jacobian[1][1] - jacobian[0][1] * jacobian[1][0];
  // J^{-T} = (1/det) [[ J11, -J10], [-J01, J00]]
  inv_jacobian_t = {{{jacobian[1][1] / det, -jacobian[1][0] / det},
                     {-jacobian[0][1] / det, jacobian[0][0] / det}}};
}

Point CellGeometry::map(const std::array<double, 3>& bary) const {
  return {origin.x + jacobian[0][0] * bary[1] + jacobian[0][1] * bary[2],
          origin.y + jacobian[1][0] * bary[1] + jacobian[1][1] * bary[2]};
}

std::array<double, 2> CellGeometry::physical_gradient(const std::array<double, 2>& ref) const {
  return {inv_jacobian_t[0][0] * ref[0] + inv_jacobian_t[0][1] * ref[1],
          inv_jacobian_t[1][0] * ref[0] + inv_jacobian_t[1][1] * ref[1]};
}

std::vector<double> interpolate(const FeSpace& space, const VectorFn& field) {
  const std::size_t ns = space.n_scalar_dofs();
  std::vector<double> coeffs(2 * ns);
  for (std::size_t s = 0; s < ns; ++s) {
    const Vec2 v = field(space.dof_coords()[s]);
    coeffs[s] = v[0];
    coeffs[ns + s] = v[1];
  }
  return coeffs;
}

PointEvaluation evaluate(const FeSpace& space, std::span<const double> coeffs, std::size_t t,
                         const std::array<double, 3>& bary) {
  if (coeffs.size() != space.n_dofs()) throw std::invalid_argument("evaluate: coefficient size mismatch");
  std::array<double, 6> phi{};
  std::array<std::array<double, 2>, 6> dphi{};
  reference_basis(space.degree(), bary, phi, dphi);
  const CellGeometry geo(space.mesh(), t);
  const auto dofs = space.cell_dofs(t);
  const std::size_t ns = space.n_scalar_dofs();
  PointEvaluation out{{0.0, 0.0}, {{{0.0, 0.0}, {0.0, 0.0}}}};
  for (std::size_t a = 0; a < dofs.size(); ++a) {
    const auto g = geo.physical_gradient(dphi[a]);
    for (int c = 0; c < 2; ++c) {
      const double u = coeffs[c * ns + dofs[a]];
      out.value[c] += u * phi[a];
      out.gradient[c][0] += u * g[0];
      out.gradient[c][1] += u * g[1];
    }
  }
  return out;
}

}  // namespace fracvisco
