#include "fracvisco/fem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>

#include "fracvisco/quadrature.hpp"

namespace fracvisco {

void Material::validate() const {
  if (!(rho > 0.0)) throw std::invalid_argument("Material: rho must be positive");
  if (!(mu_hat > 0.0)) throw std::invalid_argument("Material: mu_hat must be positive");
  if (!(lambda_hat >= 0.0)) throw std::invalid_argument("Material: lambda_hat must be non-negative");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("Material: alpha must lie in (0, 1)");
}

Mat2 Material::stress(const Mat2& grad) const {
  const double e00 = grad[0][0];
  const double e11 = grad[1][1];
  const double e01 = 0.5 * (grad[0][1] + grad[1][0]);
  const double tr = e00 + e11;
  return {{{2.0 * mu_hat * e00 + lambda_hat * tr, 2.0 * mu_hat * e01},
           {2.0 * mu_hat * e01, 2.0 * mu_hat * e11 + lambda_hat * tr}}};
}

namespace {

int resolve(int requested, int fallback) { return requested >= 0 ? requested : fallback; }

/// Reference basis tabulated at the points of a rule.
struct Tabulation {
  QuadratureRule rule;
  std::size_t nloc;
  std::vector<double> phi;                   // [q * nloc + a]
  std::vector<std::array<double, 2>> dphi;   // [q * nloc + a]

  Tabulation(int degree, int rule_degree)
      : rule(triangle_rule(rule_degree)), nloc(degree == 1 ? 3 : 6) {
    phi.resize(rule.points.size() * nloc);
    dphi.resize(rule.points.size() * nloc);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      reference_basis(degree, rule.points[q],
                      std::span<double>(phi.data() + q * nloc, nloc),
                      std::span<std::array<double, 2>>(dphi.data() + q * nloc, nloc));
    }
  }
};

double contract(const Mat2& a, const Mat2& b) {
  return a[0][0] * b[0][0] + a[0][1] * b[0][1] + a[1][0] * b[1][0] + a[1][1] * b[1][1];
}

Mat2 unit_gradient(int component, const std::array<double, 2>& g) {
  Mat2 m{{{0.0, 0.0}, {0.0, 0.0}}};
  m[component] = g;
  return m;
}

}  // namespace

SparseMatrix assemble_mass(const FeSpace& space, double rho, const AssemblyOptions& options) {
  const Tabulation tab(space.degree(), 2 * space.degree());
  const std::size_t nloc = tab.nloc;
  const std::size_t ns = space.n_scalar_dofs();
  const std::size_t ncells = space.mesh().num_triangles();
  const std::size_t per_cell = 2 * nloc * nloc;
  std::vector<Triplet> triplets(ncells * per_cell);
  const bool parallel = options.exec == Exec::parallel;

#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t ti = 0; ti < static_cast<std::int64_t>(ncells); ++ti) {
    const auto t = static_cast<std::size_t>(ti);
    const CellGeometry geo(space.mesh(), t);
    const auto dofs = space.cell_dofs(t);
    std::array<double, 36> local{};
    for (std::size_t q = 0; q < tab.rule.points.size(); ++q) {
      const double w = rho * tab.rule.weights[q] * geo.det;
      const double* phi = tab.phi.data() + q * nloc;
      for (std::size_t a = 0; a < nloc; ++a)
        for (std::size_t b = 0; b < nloc; ++b) local[a * nloc + b] += w * phi[a] * phi[b];
    }
    Triplet* out = triplets.data() + t * per_cell;
    for (std::size_t c = 0; c < 2; ++c)
      for (std::size_t a = 0; a < nloc; ++a)
        for (std::size_t b = 0; b < nloc; ++b)
          *out++ = {c * ns + dofs[a], c * ns + dofs[b], local[a * nloc + b]};
  }
  return from_triplets(space.n_dofs(), space.n_dofs(), triplets);
}

SparseMatrix assemble_stiffness(const FeSpace& space, const Material& material,
                                const AssemblyOptions& options) {
  const Tabulation tab(space.degree(), 2 * space.degree());
  const std::size_t nloc = tab.nloc;
  const std::size_t nvec = 2 * nloc;
  const std::size_t ns = space.n_scalar_dofs();
  const std::size_t ncells = space.mesh().num_triangles();
  const std::size_t per_cell = nvec * nvec;
  std::vector<Triplet> triplets(ncells * per_cell);
  const bool parallel = options.exec == Exec::parallel;

#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t ti = 0; ti < static_cast<std::int64_t>(ncells); ++ti) {
    const auto t = static_cast<std::size_t>(ti);
    const CellGeometry geo(space.mesh(), t);
    const auto dofs = space.cell_dofs(t);
    // Local vector dof index: c * nloc + a.
    std::array<double, 144> local{};
    std::array<Mat2, 12> grad{};
    std::array<Mat2, 12> sigma{};
    for (std::size_t q = 0; q < tab.rule.points.size(); ++q) {
      const double w = tab.rule.weights[q] * geo.det;
      for (std::size_t a = 0; a < nloc; ++a) {
        const auto g = geo.physical_gradient(tab.dphi[q * nloc + a]);
        for (int c = 0; c < 2; ++c) {
          grad[c * nloc + a] = unit_gradient(c, g);
          sigma[c * nloc + a] = material.stress(grad[c * nloc + a]);
        }
      }
      for (std::size_t i = 0; i < nvec; ++i)
        for (std::size_t j = 0; j < nvec; ++j) local[i * nvec + j] += w * contract(sigma[j], grad[i]);
    }
    Triplet* out = triplets.data() + t * per_cell;
    for (std::size_t i = 0; i < nvec; ++i) {
      const std::size_t row = (i / nloc) * ns + dofs[i % nloc];
      for (std::size_t j = 0; j < nvec; ++j)
        *out++ = {row, (j / nloc) * ns + dofs[j % nloc], local[i * nvec + j]};
    }
  }
  return from_triplets(space.n_dofs(), space.n_dofs(), triplets);
}

Vector assemble_load(const FeSpace& space, const VectorFn& f,
                     const std::optional<TractionFn>& traction, const AssemblyOptions& options) {
  const std::set<Side> neumann = space.neumann_sides();
  if (traction && neumann.empty())
    throw std::invalid_argument("assemble_load: traction given but the space has no Neumann boundary");

  const int degree = resolve(options.load_degree, 2 * space.degree() + 2);
  const Tabulation tab(space.degree(), degree);
  const std::size_t nloc = tab.nloc;
  const std::size_t ns = space.n_scalar_dofs();
  const std::size_t ncells = space.mesh().num_triangles();
  std::vector<double> local(ncells * 2 * nloc, 0.0);
  const bool parallel = options.exec == Exec::parallel;

#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t ti = 0; ti < static_cast<std::int64_t>(ncells); ++ti) {
    const auto t = static_cast<std::size_t>(ti);
    const CellGeometry geo(space.mesh(), t);
    double* out = local.data() + t * 2 * nloc;
    for (std::size_t q = 0; q < tab.rule.points.size(); ++q) {
      const Vec2 fv = f(geo.map(tab.rule.points[q]));
      const double w = tab.rule.weights[q] * geo.det;
      const double* phi = tab.phi.data() + q * nloc;
      for (std::size_t a = 0; a < nloc; ++a) {
        out[a] += w * fv[0] * phi[a];
        out[nloc + a] += w * fv[1] * phi[a];
      }
    }
  }

  Vector load(space.n_dofs(), 0.0);
  for (std::size_t t = 0; t < ncells; ++t) {
    const auto dofs = space.cell_dofs(t);
    const double* in = local.data() + t * 2 * nloc;
    for (std::size_t a = 0; a < nloc; ++a) {
      load[dofs[a]] += in[a];
      load[ns + dofs[a]] += in[nloc + a];
    }
  }

  if (traction) {
    const LineRule line = segment_rule(degree);
    const auto& edges = space.mesh().boundary_edges();
    std::array<double, 3> psi{};
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (!neumann.count(edges[e].side)) continue;
      const Point& p0 = space.mesh().vertices()[edges[e].vertices[0]];
      const Point& p1 = space.mesh().vertices()[edges[e].vertices[1]];
      const double length = std::hypot(p1.x - p0.x, p1.y - p0.y);
      const auto dofs = space.boundary_edge_dofs(e);
      for (std::size_t q = 0; q < line.points.size(); ++q) {
        const double s = line.points[q];
        const Point x{p0.x + s * (p1.x - p0.x), p0.y + s * (p1.y - p0.y)};
        const Vec2 g = (*traction)(x, edges[e].side);
        edge_basis(space.degree(), s, psi);
        const double w = line.weights[q] * length;
        for (std::size_t a = 0; a < dofs.size(); ++a) {
          load[dofs[a]] += w * g[0] * psi[a];
          load[ns + dofs[a]] += w * g[1] * psi[a];
        }
      }
    }
  }
  return load;
}

ErrorNorms error_norms(const FeSpace& space, std::span<const double> coeffs,
                       const VectorFn& exact, const GradientFn& exact_grad,
                       const Material& material, const AssemblyOptions& options) {
  if (coeffs.size() != space.n_dofs()) throw std::invalid_argument("error_norms: coefficient size mismatch");
  const int degree = resolve(options.norm_degree, 2 * space.degree() + 4);
  const Tabulation tab(space.degree(), degree);
  const std::size_t nloc = tab.nloc;
  const std::size_t ns = space.n_scalar_dofs();
  const std::size_t ncells = space.mesh().num_triangles();
  std::vector<std::array<double, 3>> per_cell(ncells);
  const bool parallel = options.exec == Exec::parallel;

#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t ti = 0; ti < static_cast<std::int64_t>(ncells); ++ti) {
    const auto t = static_cast<std::size_t>(ti);
    const CellGeometry geo(space.mesh(), t);
    const auto dofs = space.cell_dofs(t);
    std::array<double, 3> acc{};
    for (std::size_t q = 0; q < tab.rule.points.size(); ++q) {
      Vec2 uh{0.0, 0.0};
      Mat2 guh{{{0.0, 0.0}, {0.0, 0.0}}};
      for (std::size_t a = 0; a < nloc; ++a) {
        const double phi = tab.phi[q * nloc + a];
        const auto g = geo.physical_gradient(tab.dphi[q * nloc + a]);
        for (int c = 0; c < 2; ++c) {
          const double u = coeffs[c * ns + dofs[a]];
          uh[c] += u * phi;
          guh[c][0] += u * g[0];
          guh[c][1] += u * g[1];
        }
      }
      const Point x = geo.map(tab.rule.points[q]);
      const Vec2 u = exact(x);
      const Mat2 gu = exact_grad(x);
      const Vec2 e{uh[0] - u[0], uh[1] - u[1]};
      const Mat2 ge{{{guh[0][0] - gu[0][0], guh[0][1] - gu[0][1]},
                     {guh[1][0] - gu[1][0], guh[1][1] - gu[1][1]}}};
      const double w = tab.rule.weights[q] * geo.det;
      acc[0] += w * (e[0] * e[0] + e[1] * e[1]);
      acc[1] += w * contract(ge, ge);
      acc[2] += w * contract(material.stress(ge), ge);
    }
    per_cell[t] = acc;
  }

  std::array<double, 3> total{};
  for (const auto& c : per_cell)
    for (int k = 0; k < 3; ++k) total[k] += c[k];
  return {std::sqrt(total[0]), std::sqrt(total[0] + total[1]), std::sqrt(std::max(0.0, total[2]))};
}

std::vector<DirichletValue> homogeneous_constraints(const FeSpace& space) {
  std::vector<DirichletValue> out;
  out.reserve(space.dirichlet_dofs().size());
  for (auto d : space.dirichlet_dofs()) out.push_back({d, 0.0});
  return out;
}

Vector elliptic_project(const FeSpace& space, const Material& material, const GradientFn& w0_grad,
                        const CgOptions& cg, const AssemblyOptions& options) {
  return elliptic_project(space, material, assemble_stiffness(space, material, options), w0_grad,
                          cg, options);
}

Vector elliptic_project(const FeSpace& space, const Material& material,
                        const SparseMatrix& stiffness, const GradientFn& w0_grad,
                        const CgOptions& cg, const AssemblyOptions& options) {
  if (space.dirichlet_dofs().empty())
    throw std::invalid_argument("elliptic_project: needs a nonempty Dirichlet boundary");
  const int degree = resolve(options.load_degree, 2 * space.degree() + 2);
  const Tabulation tab(space.degree(), degree);
  const std::size_t nloc = tab.nloc;
  const std::size_t ns = space.n_scalar_dofs();
  const std::size_t ncells = space.mesh().num_triangles();
  std::vector<double> local(ncells * 2 * nloc, 0.0);
  const bool parallel = options.exec == Exec::parallel;

#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t ti = 0; ti < static_cast<std::int64_t>(ncells); ++ti) {
    const auto t = static_cast<std::size_t>(ti);
    const CellGeometry geo(space.mesh(), t);
    double* out = local.data() + t * 2 * nloc;
    for (std::size_t q = 0; q < tab.rule.points.size(); ++q) {
      const Mat2 sigma = material.stress(w0_grad(geo.map(tab.rule.points[q])));
      const double w = tab.rule.weights[q] * geo.det;
      for (std::size_t a = 0; a < nloc; ++a) {
        const auto g = geo.physical_gradient(tab.dphi[q * nloc + a]);
        for (int c = 0; c < 2; ++c)
          out[c * nloc + a] += w * (sigma[c][0] * g[0] + sigma[c][1] * g[1]);
      }
    }
  }
  Vector rhs(space.n_dofs(), 0.0);
  for (std::size_t t = 0; t < ncells; ++t) {
    const auto dofs = space.cell_dofs(t);
    const double* in = local.data() + t * 2 * nloc;
    for (std::size_t a = 0; a < nloc; ++a) {
      rhs[dofs[a]] += in[a];
      rhs[ns + dofs[a]] += in[nloc + a];
    }
  }

  const auto constraints = homogeneous_constraints(space);
  auto [a, b] = eliminate_dirichlet(stiffness, rhs, constraints);
  auto [w, report] = cg_solve(a, b, cg);
  if (!report.converged) {
    std::ostringstream msg;
    msg << "elliptic_project: CG did not converge (relative residual "
        << report.final_relative_residual << " after " << report.iterations << " iterations)";
    throw std::runtime_error(msg.str());
  }
  return w;
}

}  // namespace fracvisco
