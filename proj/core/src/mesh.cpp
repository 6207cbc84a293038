#include "nashlab/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>
#include <tuple>

namespace nashlab {

namespace {

double signed_volume(const Mesh& mesh, const Cell& cell) {
  const int d = mesh.dim;
  Eigen::Matrix3d edges = Eigen::Matrix3d::Identity();
  for (int k = 0; k < d; ++k) {
    const Point& p = mesh.vertices[cell[k + 1]];
    const Point& o = mesh.vertices[cell[0]];
    for (int c = 0; c < d; ++c) edges(c, k) = p[c] - o[c];
  }
  double factorial = 1.0;
  for (int k = 2; k <= d; ++k) factorial *= k;
  return edges.topLeftCorner(d, d).determinant() / factorial;
}

double facet_measure(const Mesh& mesh, const std::array<Index, 3>& f) {
  switch (mesh.dim) {
    case 1:
      return 1.0;
    case 2: {
      const Point& a = mesh.vertices[f[0]];
      const Point& b = mesh.vertices[f[1]];
      return std::hypot(b[0] - a[0], b[1] - a[1]);
    }
    default: {
      const Point& a = mesh.vertices[f[0]];
      const Point& b = mesh.vertices[f[1]];
      const Point& c = mesh.vertices[f[2]];
      const Eigen::Vector3d u(b[0] - a[0], b[1] - a[1], b[2] - a[2]);
      const Eigen::Vector3d v(c[0] - a[0], c[1] - a[1], c[2] - a[2]);
      return 0.5 * u.cross(v).norm();
    }
  }
}

// Fills facets, measures and the boundary vertex list from vertices + cells.
void finalize(Mesh& mesh) {
  const int d = mesh.dim;
  mesh.cell_volumes.resize(mesh.cells.size());
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    double v = signed_volume(mesh, mesh.cells[c]);
    if (v < 0.0) {
      if (d == 1) {
        std::swap(mesh.cells[c][0], mesh.cells[c][1]);
      } else {
        std::swap(mesh.cells[c][d - 1], mesh.cells[c][d]);
      }
      v = -v;
    }
    if (!(v > 0.0)) {
      throw Error("mesh: degenerate cell " + std::to_string(c));
    }
    mesh.cell_volumes[c] = v;
  }

  using Key = std::array<Index, 3>;
  std::vector<std::pair<Key, Index>> faces;
  faces.reserve(mesh.cells.size() * static_cast<std::size_t>(d + 1));
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    for (int skip = 0; skip <= d; ++skip) {
      Key key{-1, -1, -1};
      int m = 0;
      for (int k = 0; k <= d; ++k) {
        if (k != skip) key[m++] = mesh.cells[c][k];
      }
      std::sort(key.begin(), key.begin() + d);
      faces.emplace_back(key, static_cast<Index>(c));
    }
  }
  std::sort(faces.begin(), faces.end());

  mesh.boundary_facets.clear();
  for (std::size_t i = 0; i < faces.size();) {
    std::size_t j = i;
    while (j < faces.size() && faces[j].first == faces[i].first) ++j;
    const std::size_t count = j - i;
    if (count == 1) {
      mesh.boundary_facets.push_back({faces[i].first, faces[i].second});
    } else if (count != 2) {
      throw Error("mesh: face shared by " + std::to_string(count) + " cells");
    }
    i = j;
  }

  mesh.facet_areas.resize(mesh.boundary_facets.size());
  std::vector<Index> bverts;
  for (std::size_t f = 0; f < mesh.boundary_facets.size(); ++f) {
    const auto& facet = mesh.boundary_facets[f];
    mesh.facet_areas[f] = facet_measure(mesh, facet.vertices);
    if (!(mesh.facet_areas[f] > 0.0)) {
      throw Error("mesh: degenerate boundary facet " + std::to_string(f));
    }
    for (int k = 0; k < d; ++k) bverts.push_back(facet.vertices[k]);
  }
  std::sort(bverts.begin(), bverts.end());
  bverts.erase(std::unique(bverts.begin(), bverts.end()), bverts.end());
  mesh.boundary_vertices = std::move(bverts);
}

// Kuhn subdivision of every grid block accepted by `keep`; unused grid
// vertices are dropped while preserving lexicographic order.
template <typename Keep>
Mesh build_structured(std::span<const double> extents, std::span<const int> divisions,
                      Keep keep) {
  const int d = static_cast<int>(extents.size());
  Mesh mesh;
  mesh.dim = d;

  std::array<Index, 3> n{1, 1, 1};
  std::array<Index, 3> stride{1, 1, 1};
  for (int k = 0; k < d; ++k) n[k] = divisions[k];
  for (int k = 1; k < 3; ++k) stride[k] = stride[k - 1] * (n[k - 1] + 1);
  const Index grid_points = stride[2] * (d == 3 ? n[2] + 1 : 1);

  std::vector<int> perm(d);
  std::vector<Cell> cells;
  std::vector<char> used(static_cast<std::size_t>(grid_points), 0);

  const Index blocks = n[0] * (d > 1 ? n[1] : 1) * (d > 2 ? n[2] : 1);
  for (Index b = 0; b < blocks; ++b) {
    std::array<Index, 3> idx{b % n[0], d > 1 ? (b / n[0]) % n[1] : 0,
                             d > 2 ? b / (n[0] * n[1]) : 0};
    if (!keep(idx)) continue;
    Index corner = 0;
    for (int k = 0; k < d; ++k) corner += idx[k] * stride[k];

    std::iota(perm.begin(), perm.end(), 0);
    do {
      Cell cell{-1, -1, -1, -1};
      Index v = corner;
      cell[0] = v;
      for (int k = 0; k < d; ++k) {
        v += stride[perm[k]];
        cell[k + 1] = v;
      }
      for (int k = 0; k <= d; ++k) used[static_cast<std::size_t>(cell[k])] = 1;
      cells.push_back(cell);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  std::vector<Index> renumber(static_cast<std::size_t>(grid_points), -1);
  for (Index g = 0; g < grid_points; ++g) {
    if (!used[static_cast<std::size_t>(g)]) continue;
    renumber[static_cast<std::size_t>(g)] = static_cast<Index>(mesh.vertices.size());
    Point p{0.0, 0.0, 0.0};
    Index rest = g;
    for (int k = d - 1; k >= 0; --k) {
      const Index i = rest / stride[k];
      rest -= i * stride[k];
      p[k] = extents[k] * static_cast<double>(i) / static_cast<double>(n[k]);
    }
    mesh.vertices.push_back(p);
  }
  for (auto& cell : cells) {
    for (int k = 0; k <= d; ++k) cell[k] = renumber[static_cast<std::size_t>(cell[k])];
  }
  mesh.cells = std::move(cells);

  for (int k = 0; k < d; ++k) {
    mesh.grid_spacing = std::max(mesh.grid_spacing, extents[k] / divisions[k]);
  }
  finalize(mesh);
  return mesh;
}

}  // namespace

double Mesh::volume() const {
  return std::accumulate(cell_volumes.begin(), cell_volumes.end(), 0.0);
}

double Mesh::boundary_measure() const {
  return std::accumulate(facet_areas.begin(), facet_areas.end(), 0.0);
}

Vector Mesh::vertex_volumes() const {
  Vector w = Vector::Zero(num_vertices());
  const double share = 1.0 / (dim + 1);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (int k = 0; k <= dim; ++k) w[cells[c][k]] += share * cell_volumes[c];
  }
  return w;
}

Vector Mesh::boundary_vertex_measures() const {
  Vector w = Vector::Zero(num_boundary_vertices());
  const double share = 1.0 / dim;
  for (std::size_t f = 0; f < boundary_facets.size(); ++f) {
    for (int k = 0; k < dim; ++k) {
      w[boundary_slot(boundary_facets[f].vertices[k])] += share * facet_areas[f];
    }
  }
  return w;
}

Index Mesh::boundary_slot(Index vertex) const {
  auto it = std::lower_bound(boundary_vertices.begin(), boundary_vertices.end(), vertex);
  if (it == boundary_vertices.end() || *it != vertex) return -1;
  return static_cast<Index>(it - boundary_vertices.begin());
}

Mesh build_box_mesh(std::span<const double> extents, std::span<const int> divisions) {
  const std::size_t d = extents.size();
  if (d < 1 || d > 3) {
    throw Error("build_box_mesh: dimension must be 1, 2 or 3 (got " + std::to_string(d) + ")");
  }
  if (divisions.size() != d) {
    throw Error("build_box_mesh: need one division count per extent");
  }
  for (std::size_t k = 0; k < d; ++k) {
    if (!(extents[k] > 0.0) || !std::isfinite(extents[k])) {
      throw Error("build_box_mesh: extents must be positive and finite");
    }
    if (divisions[k] < 1) {
      throw Error("build_box_mesh: divisions must be >= 1");
    }
  }
  return build_structured(extents, divisions, [](const std::array<Index, 3>&) { return true; });
}

Mesh build_lshape_mesh(int dim, int divisions) {
  if (dim != 2 && dim != 3) {
    throw Error("build_lshape_mesh: dimension must be 2 or 3");
  }
  if (divisions < 2) {
    throw Error("build_lshape_mesh: divisions must be >= 2");
  }
  if (divisions % 2 != 0) {
    throw Error("build_lshape_mesh: divisions must be even so the notch aligns with the grid");
  }
  const std::array<double, 3> extents{1.0, 1.0, 1.0};
  const std::array<int, 3> divs{divisions, divisions, divisions};
  const Index half = divisions / 2;
  return build_structured(std::span<const double>(extents.data(), dim),
                          std::span<const int>(divs.data(), dim),
                          [dim, half](const std::array<Index, 3>& idx) {
                            for (int k = 0; k < dim; ++k) {
                              if (idx[k] < half) return true;
                            }
                            return false;
                          });
}

std::string format_shortest(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw Error("format_shortest: conversion failed");
  return std::string(buf, end);
}

void write_mesh_text(const Mesh& mesh, std::ostream& out) {
  for (const auto& p : mesh.vertices) {
    out << "v " << format_shortest(p[0]) << ' ' << format_shortest(p[1]) << ' '
        << format_shortest(p[2]) << '\n';
  }
  for (const auto& c : mesh.cells) {
    out << 'c';
    for (int k = 0; k <= mesh.dim; ++k) out << ' ' << c[k];
    out << '\n';
  }
}

}  // namespace nashlab
