#include "twophase/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>

#include "twophase/errors.hpp"

namespace twophase {

namespace {

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
}

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

void check_length(std::span<const double> u, const Mesh& mesh) {
  if (u.size() != mesh.num_vertices()) {
    throw InvalidArgument("nodal field has " + std::to_string(u.size()) +
                          " entries, mesh has " +
                          std::to_string(mesh.num_vertices()) + " vertices");
  }
}

}  // namespace

Mesh::Mesh(std::vector<Point> vertices, std::vector<Triangle> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  if (triangles_.empty()) throw InvalidArgument("mesh has no triangles");
  const int nv = static_cast<int>(vertices_.size());

  cell_area_.resize(triangles_.size());
  std::unordered_map<std::uint64_t, int> edge_count;
  edge_count.reserve(3 * triangles_.size());

  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    auto& tri = triangles_[t];
    for (int v : tri) {
      if (v < 0 || v >= nv) {
        throw InvalidArgument("triangle " + std::to_string(t) +
                              " references vertex " + std::to_string(v) +
                              " (mesh has " + std::to_string(nv) + ")");
      }
    }
    double area = signed_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
    if (area < 0.0) {
      std::swap(tri[1], tri[2]);
      area = -area;
    }
    if (!(area > 0.0)) {
      throw InvalidArgument("triangle " + std::to_string(t) + " is degenerate");
    }
    cell_area_[t] = area;
    total_area_ += area;
    max_cell_area_ = std::max(max_cell_area_, area);
    for (int e = 0; e < 3; ++e) ++edge_count[edge_key(tri[e], tri[(e + 1) % 3])];
  }

  is_boundary_.assign(vertices_.size(), 0);
  for (const auto& [key, count] : edge_count) {
    if (count == 1) {
      is_boundary_[key >> 32] = 1;
      is_boundary_[key & 0xffffffffu] = 1;
    }
  }
}

std::size_t Mesh::num_boundary_vertices() const {
  return static_cast<std::size_t>(std::count(is_boundary_.begin(), is_boundary_.end(), 1));
}

Point Mesh::centroid(std::size_t cell) const {
  const auto& t = triangles_[cell];
  const auto& a = vertices_[t[0]];
  const auto& b = vertices_[t[1]];
  const auto& c = vertices_[t[2]];
  return {(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0};
}

Mesh build_rect_mesh(int nx, int ny, double lx, double ly) {
  if (nx < 1 || ny < 1 || !(lx > 0.0) || !(ly > 0.0)) {
    throw InvalidArgument("rectangle mesh needs nx, ny >= 1 and lx, ly > 0");
  }
  std::vector<Point> vertices;
  vertices.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      vertices.push_back({lx * i / nx, ly * j / ny});
    }
  }
  std::vector<Triangle> triangles;
  triangles.reserve(2 * static_cast<std::size_t>(nx) * ny);
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v00 = id(i, j), v10 = id(i + 1, j);
      const int v01 = id(i, j + 1), v11 = id(i + 1, j + 1);
      triangles.push_back({v00, v10, v11});
      triangles.push_back({v00, v11, v01});
    }
  }
  return Mesh(std::move(vertices), std::move(triangles));
}

Mesh load_mesh(std::istream& in) {
  std::string line;
  int lineno = 0;
  auto next_line = [&](const char* what) -> std::istringstream {
    while (std::getline(in, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") != std::string::npos) {
        return std::istringstream(line);
      }
    }
    throw ParseError(std::string("unexpected end of file, expected ") + what, lineno + 1);
  };
  auto expect_end = [&](std::istringstream& ss) {
    std::string rest;
    if (ss >> rest) throw ParseError("trailing token '" + rest + "'", lineno);
  };

  long long nv = 0, nt = 0;
  {
    auto ss = next_line("header 'nv nt'");
    if (!(ss >> nv >> nt) || nv < 3 || nt < 1) {
      throw ParseError("malformed header, expected 'nv nt' with nv >= 3, nt >= 1", lineno);
    }
    expect_end(ss);
  }

  std::vector<Point> vertices(static_cast<std::size_t>(nv));
  for (auto& p : vertices) {
    auto ss = next_line("vertex 'x y'");
    if (!(ss >> p[0] >> p[1]) || !std::isfinite(p[0]) || !std::isfinite(p[1])) {
      throw ParseError("malformed vertex, expected 'x y'", lineno);
    }
    expect_end(ss);
  }

  std::vector<Triangle> triangles(static_cast<std::size_t>(nt));
  for (auto& t : triangles) {
    auto ss = next_line("triangle 'i j k'");
    long long a = 0, b = 0, c = 0;
    if (!(ss >> a >> b >> c)) throw ParseError("malformed triangle, expected 'i j k'", lineno);
    expect_end(ss);
    for (long long v : {a, b, c}) {
      if (v < 0 || v >= nv) {
        throw ParseError("vertex index " + std::to_string(v) + " out of range [0," +
                             std::to_string(nv) + ")",
                         lineno);
      }
    }
    t = {static_cast<int>(a), static_cast<int>(b), static_cast<int>(c)};
    if (signed_area(vertices[t[0]], vertices[t[1]], vertices[t[2]]) == 0.0) {
      throw ParseError("degenerate triangle", lineno);
    }
  }
  return Mesh(std::move(vertices), std::move(triangles));
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  const auto old_precision = out.precision(17);
  out << mesh.num_vertices() << ' ' << mesh.num_cells() << '\n';
  for (const auto& p : mesh.vertices()) out << p[0] << ' ' << p[1] << '\n';
  for (const auto& t : mesh.triangles()) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out.precision(old_precision);
}

CellField cell_average(std::span<const double> u, const Mesh& mesh) {
  check_length(u, mesh);
  CellField out(mesh.num_cells());
  const auto& tris = mesh.triangles();
  for (std::size_t c = 0; c < tris.size(); ++c) {
    const auto& t = tris[c];
    out[c] = (u[t[0]] + u[t[1]] + u[t[2]]) / 3.0;
  }
  return out;
}

CellField cell_average_square(std::span<const double> u, const Mesh& mesh) {
  check_length(u, mesh);
  CellField out(mesh.num_cells());
  const auto& tris = mesh.triangles();
  for (std::size_t c = 0; c < tris.size(); ++c) {
    const double a = u[tris[c][0]], b = u[tris[c][1]], d = u[tris[c][2]];
    const double s = a + b + d;
    out[c] = (s * s + a * a + b * b + d * d) / 12.0;
  }
  return out;
}

}  // namespace twophase
