#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace twophase {

using Point = std::array<double, 2>;
using Triangle = std::array<int, 3>;

/// Nodal (P1) values, one per mesh vertex.
using ScalarField = std::vector<double>;
/// Piecewise-constant (P0) values, one per triangle.
using CellField = std::vector<double>;

/// Planar triangulation. Immutable once constructed: triangles are stored
/// counterclockwise, and areas and boundary flags are computed up front.
class Mesh {
 public:
  /// Validates indices, reorients clockwise triangles and rejects degenerate
  /// ones. Throws InvalidArgument.
  Mesh(std::vector<Point> vertices, std::vector<Triangle> triangles);

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_cells() const { return triangles_.size(); }

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<double>& cell_area() const { return cell_area_; }
  double total_area() const { return total_area_; }
  double max_cell_area() const { return max_cell_area_; }

  /// True for vertices on an edge owned by exactly one triangle.
  bool is_boundary(std::size_t v) const { return is_boundary_[v] != 0; }
  std::size_t num_boundary_vertices() const;

  Point centroid(std::size_t cell) const;

 private:
  std::vector<Point> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<double> cell_area_;
  std::vector<std::uint8_t> is_boundary_;
  double total_area_ = 0.0;
  double max_cell_area_ = 0.0;
};

/// Structured triangulation of [0,lx]x[0,ly]; every grid cell is split along
/// its lower-left to upper-right diagonal.
Mesh build_rect_mesh(int nx, int ny, double lx, double ly);

/// Reads "nv nt", nv lines "x y", nt lines "i j k" (0-based).
/// Throws ParseError naming the offending line.
Mesh load_mesh(std::istream& in);
void write_mesh(std::ostream& out, const Mesh& mesh);

/// Exact per-triangle mean of the P1 interpolant of u.
CellField cell_average(std::span<const double> u, const Mesh& mesh);

/// Exact per-triangle mean of the squared P1 interpolant of u.
CellField cell_average_square(std::span<const double> u, const Mesh& mesh);

}  // namespace twophase
