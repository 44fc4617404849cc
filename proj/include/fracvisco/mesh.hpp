#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <set>
#include <vector>

namespace fracvisco {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

enum class Side { left, right, bottom, top };

inline constexpr std::array<Side, 4> all_sides{Side::left, Side::right, Side::bottom,
                                               Side::top};

const char* to_string(Side side);

/// Outward unit normal of an axis-aligned rectangle side.
Point outward_normal(Side side);

struct BoundaryEdge {
  std::array<std::size_t, 2> vertices;
  Side side;
};

/**
 * Conforming triangulation of an axis-aligned rectangle.
 *
 * Triangles are stored counterclockwise. Boundary edges carry the side of the
 * rectangle they lie on; a corner vertex belongs to both adjacent sides.
 * Immutable once built.
 */
class Mesh {
public:
  Mesh(std::vector<Point> vertices, std::vector<std::array<std::size_t, 3>> triangles,
       std::vector<BoundaryEdge> boundary_edges, Point lower, Point upper);

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<std::array<std::size_t, 3>>& triangles() const { return triangles_; }
  const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_edges_; }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }

  /// Maximum element diameter.
  double h() const { return h_; }
  /// Minimum element diameter.
  double h_min() const { return h_min_; }

  Point lower() const { return lower_; }
  Point upper() const { return upper_; }

  /// Signed area of triangle t (positive for counterclockwise).
  double signed_area(std::size_t t) const;

private:
  std::vector<Point> vertices_;
  std::vector<std::array<std::size_t, 3>> triangles_;
  std::vector<BoundaryEdge> boundary_edges_;
  Point lower_;
  Point upper_;
  double h_ = 0.0;
  double h_min_ = 0.0;
};

/// Structured mesh of [x0,x1]x[y0,y1] with nx*ny cells, each split along the
/// diagonal from its lower-left to its upper-right corner.
Mesh build_rectangle(Point lower, Point upper, std::size_t nx, std::size_t ny);

/// Unit square with n cells per side: (n+1)^2 vertices, 2n^2 triangles, h = sqrt(2)/n.
Mesh build_unit_square(std::size_t n_cells_per_side);

/// Vertices lying on any of the tagged sides.
std::set<std::size_t> boundary_vertices(const Mesh& mesh, const std::set<Side>& tags);

/// True when every interior edge is shared by exactly two triangles, every
/// boundary edge by one, and the tagged boundary edges are exactly the edges
/// with a single incident triangle.
bool is_conforming(const Mesh& mesh);

/// Plain-text dump: header `nv nt ne`, then `x y`, `i j k`, `i j tag` lines.
void write_mesh(std::ostream& os, const Mesh& mesh);

}  // namespace fracvisco
