#pragma once

#include "nashlab/types.hpp"

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

namespace nashlab {

/// Vertex coordinates; components beyond the mesh dimension are zero.
using Point = std::array<double, 3>;

/// Up to four vertex indices. Only the first dim + 1 are meaningful.
using Cell = std::array<Index, 4>;

struct BoundaryFacet {
  std::array<Index, 3> vertices{-1, -1, -1};  // first dim entries used
  Index owner = -1;                           // cell carrying this facet
};

/// Conforming simplicial mesh of a box or L-shaped domain in R^d, d <= 3.
///
/// Boundary facets carry the (d-1)-dimensional Hausdorff measure; in d = 1
/// the two end points get counting measure 1.
struct Mesh {
  int dim = 0;
  std::vector<Point> vertices;
  std::vector<Cell> cells;
  std::vector<BoundaryFacet> boundary_facets;
  std::vector<double> cell_volumes;
  std::vector<double> facet_areas;

  /// Sorted global indices of vertices lying on some boundary facet.
  std::vector<Index> boundary_vertices;

  /// Largest grid step of the underlying structured grid.
  double grid_spacing = 0.0;

  [[nodiscard]] Index num_vertices() const { return static_cast<Index>(vertices.size()); }
  [[nodiscard]] Index num_cells() const { return static_cast<Index>(cells.size()); }
  [[nodiscard]] Index num_boundary_vertices() const {
    return static_cast<Index>(boundary_vertices.size());
  }

  [[nodiscard]] double volume() const;
  [[nodiscard]] double boundary_measure() const;

  /// Lumped volume weights: each cell gives |cell| / (d+1) to its vertices.
  [[nodiscard]] Vector vertex_volumes() const;

  /// Lumped boundary weights per boundary vertex (facet area / d each).
  [[nodiscard]] Vector boundary_vertex_measures() const;

  /// Position of a global vertex inside boundary_vertices, or -1.
  [[nodiscard]] Index boundary_slot(Index vertex) const;
};

Mesh build_box_mesh(std::span<const double> extents, std::span<const int> divisions);

/// [0,1]^d minus the corner block [1/2,1]^d, for d in {2,3}.
Mesh build_lshape_mesh(int dim, int divisions);

/// Plain text dump: "v x y z" per vertex then "c i0 .. id" per cell.
void write_mesh_text(const Mesh& mesh, std::ostream& out);

/// Shortest decimal string that parses back to exactly `value`.
std::string format_shortest(double value);

}  // namespace nashlab
