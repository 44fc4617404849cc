#include "fracvisco/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace fracvisco {

const char* to_string(Side side) {
  switch (side) {
    case Side::left: return "left";
    case Side::right: return "right";
    case Side::bottom: return "bottom";
    case Side::top: return "top";
  }
  return "?";
}

Point outward_normal(Side side) {
  switch (side) {
    case Side::left: return {-1.0, 0.0};
    case Side::right: return {1.0, 0.0};
    case Side::bottom: return {0.0, -1.0};
    case Side::top: return {0.0, 1.0};
  }
  return {};
}

namespace {

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

Mesh::Mesh(std::vector<Point> vertices, std::vector<std::array<std::size_t, 3>> triangles,
           std::vector<BoundaryEdge> boundary_edges, Point lower, Point upper)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      boundary_edges_(std::move(boundary_edges)),
      lower_(lower),
      upper_(upper) {
  h_min_ = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tri = triangles_[t];
    for (auto v : tri) {
      if (v >= vertices_.size()) throw std::out_of_range("Mesh: triangle vertex index out of range");
    }
    if (!(signed_area(t) > 0.0)) throw std::invalid_argument("Mesh: triangle with non-positive area");
    const double diam = std::max({distance(vertices_[tri[0]], vertices_[tri[1]]),
                                  distance(vertices_[tri[1]], vertices_[tri[2]]),
                                  distance(vertices_[tri[2]], vertices_[tri[0]])});
    h_ = std::max(h_, diam);
    h_min_ = std::min(h_min_, diam);
  }
}

double Mesh::signed_area(std::size_t t) const {
  const auto& tri = triangles_[t];
  const Point& a = vertices_[tri[0]];
  const Point& b = vertices_[tri[1]];
  const Point& c = vertices_[tri[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

Mesh build_rectangle(Point lower, Point upper, std::size_t nx, std::size_t ny) {
  if (nx == 0 || ny == 0) throw std::invalid_argument("build_rectangle: cell counts must be >= 1");
  if (!(upper.x > lower.x) || !(upper.y > lower.y))
    throw std::invalid_argument("build_rectangle: degenerate rectangle");

  const auto id = [nx](std::size_t i, std::size_t j) { return j * (nx + 1) + i; };

  std::vector<Point> vertices;
  vertices.reserve((nx + 1) * (ny + 1));
  for (std::size_t j = 0; j <= ny; ++j) {
    // Endpoints are pinned so boundary coordinates are exact.
    const double y = j == ny ? upper.y
                             : lower.y + (upper.y - lower.y) * static_cast<double>(j) /
                                             static_cast<double>(ny);
    for (std::size_t i = 0; i <= nx; ++i) {
      const double x = i == nx ? upper.x
                               : lower.x + (upper.x - lower.x) * static_cast<double>(i) /
                                               static_cast<double>(nx);
      vertices.push_back({x, y});
    }
  }

  std::vector<std::array<std::size_t, 3>> triangles;
  triangles.reserve(2 * nx * ny);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t ll = id(i, j), lr = id(i + 1, j), ur = id(i + 1, j + 1),
                        ul = id(i, j + 1);
      triangles.push_back({ll, lr, ur});
      triangles.push_back({ll, ur, ul});
    }
  }

  std::vector<BoundaryEdge> edges;
  edges.reserve(2 * (nx + ny));
  for (std::size_t i = 0; i < nx; ++i) edges.push_back({{id(i, 0), id(i + 1, 0)}, Side::bottom});
  for (std::size_t j = 0; j < ny; ++j) edges.push_back({{id(nx, j), id(nx, j + 1)}, Side::right});
  for (std::size_t i = nx; i > 0; --i) edges.push_back({{id(i, ny), id(i - 1, ny)}, Side::top});
  for (std::size_t j = ny; j > 0; --j) edges.push_back({{id(0, j), id(0, j - 1)}, Side::left});

  return Mesh(std::move(vertices), std::move(triangles), std::move(edges), lower, upper);
}

Mesh build_unit_square(std::size_t n_cells_per_side) {
  if (n_cells_per_side == 0) throw std::invalid_argument("build_unit_square: n must be >= 1");
  return build_rectangle({0.0, 0.0}, {1.0, 1.0}, n_cells_per_side, n_cells_per_side);
}

std::set<std::size_t> boundary_vertices(const Mesh& mesh, const std::set<Side>& tags) {
  std::set<std::size_t> out;
  for (const auto& e : mesh.boundary_edges()) {
    if (tags.count(e.side)) out.insert(e.vertices.begin(), e.vertices.end());
  }
  return out;
}

bool is_conforming(const Mesh& mesh) {
  std::map<std::pair<std::size_t, std::size_t>, int> incidence;
  for (const auto& tri : mesh.triangles()) {
    for (int k = 0; k < 3; ++k) {
      auto a = tri[k], b = tri[(k + 1) % 3];
      if (a > b) std::swap(a, b);
      ++incidence[{a, b}];
    }
  }
  std::size_t single = 0;
  for (const auto& [edge, count] : incidence) {
    if (count < 1 || count > 2) return false;
    if (count == 1) ++single;
  }
  if (single != mesh.boundary_edges().size()) return false;
  for (const auto& e : mesh.boundary_edges()) {
    auto a = e.vertices[0], b = e.vertices[1];
    if (a > b) std::swap(a, b);
    const auto it = incidence.find({a, b});
    if (it == incidence.end() || it->second != 1) return false;
  }
  return true;
}

void write_mesh(std::ostream& os, const Mesh& mesh) {
  const auto old_precision = os.precision(17);
  os << mesh.num_vertices() << ' ' << mesh.num_triangles() << ' '
     << mesh.boundary_edges().size() << '\n';
  for (const auto& p : mesh.vertices()) os << p.x << ' ' << p.y << '\n';
  for (const auto& t : mesh.triangles()) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (const auto& e : mesh.boundary_edges())
    os << e.vertices[0] << ' ' << e.vertices[1] << ' ' << to_string(e.side) << '\n';
  os.precision(old_precision);
}

}  // namespace fracvisco
