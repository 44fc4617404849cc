#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fracvisco/fe_space.hpp"

using namespace fracvisco;

namespace {

std::shared_ptr<const Mesh> square(std::size_t n) {
  return std::make_shared<const Mesh>(build_unit_square(n));
}

const std::set<Side> all_dirichlet(all_sides.begin(), all_sides.end());

std::array<double, 3> random_bary(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double a = u(rng), b = u(rng);
  if (a + b > 1.0) {
    a = 1.0 - a;
    b = 1.0 - b;
  }
  return {1.0 - a - b, a, b};
}

// Reference nodes in local dof order.
std::vector<std::array<double, 3>> reference_nodes(int degree) {
  std::vector<std::array<double, 3>> nodes{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  if (degree == 2) {
    nodes.push_back({0.5, 0.5, 0});
    nodes.push_back({0, 0.5, 0.5});
    nodes.push_back({0.5, 0, 0.5});
  }
  return nodes;
}

}  // namespace

TEST(FeSpace, DofCounts) {
  for (std::size_t n : {1u, 3u, 8u}) {
    const FeSpace p1(square(n), 1, all_dirichlet);
    const FeSpace p2(square(n), 2, all_dirichlet);
    EXPECT_EQ(p1.n_dofs(), 2 * (n + 1) * (n + 1));
    EXPECT_EQ(p2.n_dofs(), 2 * (2 * n + 1) * (2 * n + 1));
    EXPECT_EQ(p2.num_edges(), 3 * n * n + 2 * n);
    EXPECT_EQ(p1.dirichlet_dofs().size(), 2 * 4 * n);
    EXPECT_EQ(p2.dirichlet_dofs().size(), 2 * 8 * n);
    EXPECT_TRUE(std::is_sorted(p2.dirichlet_dofs().begin(), p2.dirichlet_dofs().end()));
    EXPECT_TRUE(p1.neumann_sides().empty());
  }
  const FeSpace left(square(4), 2, {Side::left});
  EXPECT_EQ(left.dirichlet_dofs().size(), 2 * 9u);
  EXPECT_EQ(left.neumann_sides().size(), 3u);
  EXPECT_THROW(FeSpace(square(2), 3, all_dirichlet), std::invalid_argument);
  EXPECT_THROW(FeSpace(nullptr, 1, all_dirichlet), std::invalid_argument);
}

TEST(ReferenceBasis, PartitionOfUnityAndKronecker) {
  std::mt19937 rng(13);
  for (int degree : {1, 2}) {
    const std::size_t nb = degree == 1 ? 3 : 6;
    std::vector<double> v(nb);
    std::vector<std::array<double, 2>> g(nb);
    for (int trial = 0; trial < 50; ++trial) {
      reference_basis(degree, random_bary(rng), v, g);
      double sum = 0.0, gx = 0.0, gy = 0.0;
      for (std::size_t i = 0; i < nb; ++i) {
        sum += v[i];
        gx += g[i][0];
        gy += g[i][1];
      }
      EXPECT_NEAR(sum, 1.0, 1e-14);
      EXPECT_NEAR(gx, 0.0, 1e-13);
      EXPECT_NEAR(gy, 0.0, 1e-13);
    }
    const auto nodes = reference_nodes(degree);
    for (std::size_t j = 0; j < nb; ++j) {
      reference_basis(degree, nodes[j], v, g);
      for (std::size_t i = 0; i < nb; ++i) EXPECT_NEAR(v[i], i == j ? 1.0 : 0.0, 1e-15);
    }
  }
}

TEST(ReferenceBasis, GradientsMatchFiniteDifferences) {
  std::mt19937 rng(14);
  const double eps = 1e-6;
  for (int degree : {1, 2}) {
    const std::size_t nb = degree == 1 ? 3 : 6;
    std::vector<double> v(nb), vp(nb), vm(nb);
    std::vector<std::array<double, 2>> g(nb), dummy(nb);
    for (int trial = 0; trial < 10; ++trial) {
      const auto b = random_bary(rng);
      reference_basis(degree, b, v, g);
      for (int dir = 0; dir < 2; ++dir) {
        auto bp = b, bm = b;
        // xi = b[1], eta = b[2]; b[0] = 1 - xi - eta
        bp[1 + dir] += eps;
        bp[0] -= eps;
        bm[1 + dir] -= eps;
        bm[0] += eps;
        reference_basis(degree, bp, vp, dummy);
        reference_basis(degree, bm, vm, dummy);
        for (std::size_t i = 0; i < nb; ++i)
          EXPECT_NEAR(g[i][dir], (vp[i] - vm[i]) / (2 * eps), 1e-8);
      }
    }
  }
}

TEST(EdgeBasis, MatchesTraceOfReferenceBasis) {
  for (int degree : {1, 2}) {
    const std::size_t nb = degree == 1 ? 3 : 6;
    std::vector<double> v(nb), e(degree + 1);
    std::vector<std::array<double, 2>> g(nb);
    for (double s : {0.0, 0.2, 0.5, 0.9, 1.0}) {
      reference_basis(degree, {1.0 - s, s, 0.0}, v, g);
      edge_basis(degree, s, e);
      EXPECT_NEAR(e[0], v[0], 1e-15);
      EXPECT_NEAR(e[1], v[1], 1e-15);
      if (degree == 2) EXPECT_NEAR(e[2], v[3], 1e-15);
      EXPECT_NEAR(v[2], 0.0, 1e-15);
    }
  }
}

TEST(FeSpace, DofCoordinatesMatchMappedNodes) {
  for (int degree : {1, 2}) {
    const FeSpace space(square(3), degree, all_dirichlet);
    const auto nodes = reference_nodes(degree);
    for (std::size_t t = 0; t < space.mesh().num_triangles(); ++t) {
      const CellGeometry geo(space.mesh(), t);
      EXPECT_NEAR(geo.det, 2.0 * space.mesh().signed_area(t), 1e-15);
      const auto dofs = space.cell_dofs(t);
      for (std::size_t j = 0; j < dofs.size(); ++j) {
        const Point p = geo.map(nodes[j]);
        EXPECT_NEAR(space.dof_coords()[dofs[j]].x, p.x, 1e-15);
        EXPECT_NEAR(space.dof_coords()[dofs[j]].y, p.y, 1e-15);
      }
    }
  }
}

TEST(FeSpace, DirichletDofsLieOnTaggedSides) {
  const FeSpace space(square(4), 2, {Side::left, Side::top});
  const std::size_t ns = space.n_scalar_dofs();
  for (auto d : space.dirichlet_dofs()) {
    const Point p = space.dof_coords()[d % ns];
    EXPECT_TRUE(p.x == 0.0 || p.y == 1.0);
  }
}

TEST(FeSpace, InterpolationReproducesPolynomialsOfDegreeK) {
  std::mt19937 rng(15);
  for (int degree : {1, 2}) {
    const FeSpace space(square(3), degree, all_dirichlet);
    const double q = degree == 2 ? 1.0 : 0.0;
    const VectorFn field = [q](const Point& p) -> Vec2 {
      return {1.0 + 2.0 * p.x - p.y + q * p.x * p.y, -0.5 + p.y + q * (p.x * p.x - 3.0 * p.y * p.y)};
    };
    const auto grad = [q](const Point& p) -> Mat2 {
      return {{{2.0 + q * p.y, -1.0 + q * p.x}, {2.0 * q * p.x, 1.0 - 6.0 * q * p.y}}};
    };
    const auto coeffs = interpolate(space, field);
    for (std::size_t t = 0; t < space.mesh().num_triangles(); ++t) {
      const auto b = random_bary(rng);
      const Point p = CellGeometry(space.mesh(), t).map(b);
      const auto ev = evaluate(space, coeffs, t, b);
      const Vec2 f = field(p);
      const Mat2 g = grad(p);
      for (int i = 0; i < 2; ++i) {
        EXPECT_NEAR(ev.value[i], f[i], 1e-13);
        for (int j = 0; j < 2; ++j) EXPECT_NEAR(ev.gradient[i][j], g[i][j], 1e-12);
      }
    }
    const std::vector<double> wrong(space.n_dofs() + 1);
    EXPECT_THROW(evaluate(space, wrong, 0, {1, 0, 0}), std::invalid_argument);
  }
}

TEST(FeSpace, BoundaryEdgeDofsAreOnTheEdge) {
  const FeSpace space(square(2), 2, all_dirichlet);
  const auto& mesh = space.mesh();
  for (std::size_t e = 0; e < mesh.boundary_edges().size(); ++e) {
    const auto& edge = mesh.boundary_edges()[e];
    const auto dofs = space.boundary_edge_dofs(e);
    ASSERT_EQ(dofs.size(), 3u);
    const Point a = mesh.vertices()[edge.vertices[0]];
    const Point b = mesh.vertices()[edge.vertices[1]];
    EXPECT_DOUBLE_EQ(space.dof_coords()[dofs[0]].x, a.x);
    EXPECT_DOUBLE_EQ(space.dof_coords()[dofs[1]].y, b.y);
    EXPECT_NEAR(space.dof_coords()[dofs[2]].x, 0.5 * (a.x + b.x), 1e-15);
    EXPECT_NEAR(space.dof_coords()[dofs[2]].y, 0.5 * (a.y + b.y), 1e-15);
  }
}
