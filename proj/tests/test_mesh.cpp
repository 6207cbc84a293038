#include "nashlab/mesh.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <vector>

using namespace nashlab;

namespace {

Mesh box(std::vector<double> extents, std::vector<int> divisions) {
  return build_box_mesh(extents, divisions);
}

// Facet keys (sorted vertex tuples) of every cell, with multiplicities.
std::map<std::vector<Index>, int> facet_counts(const Mesh& mesh) {
  std::map<std::vector<Index>, int> counts;
  const int d = mesh.dim;
  for (const auto& c : mesh.cells) {
    for (int skip = 0; skip <= d; ++skip) {
      std::vector<Index> f;
      for (int k = 0; k <= d; ++k) {
        if (k != skip) f.push_back(c[k]);
      }
      std::sort(f.begin(), f.end());
      ++counts[f];
    }
  }
  return counts;
}

double simplex_volume(const Mesh& mesh, const Cell& c) {
  const int d = mesh.dim;
  Matrix j(d, d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) j(b, a) = mesh.vertices[c[a + 1]][b] - mesh.vertices[c[0]][b];
  }
  double fact = 1.0;
  for (int k = 2; k <= d; ++k) fact *= k;
  return std::abs(j.determinant()) / fact;
}

}  // namespace

TEST(BoxMesh, CountsInThreeDimensions) {
  const Mesh m = box({1, 1, 1}, {3, 3, 3});
  EXPECT_EQ(m.dim, 3);
  EXPECT_EQ(m.num_vertices(), 64);
  EXPECT_EQ(m.num_cells(), 6 * 27);
  EXPECT_EQ(m.boundary_facets.size(), 12u * 9u);
  EXPECT_EQ(m.num_boundary_vertices(), 64 - 8);
  EXPECT_DOUBLE_EQ(m.grid_spacing, 1.0 / 3.0);
}

TEST(BoxMesh, SmallHandCounts) {
  const Mesh sq = box({1, 1}, {1, 1});
  EXPECT_EQ(sq.num_vertices(), 4);
  EXPECT_EQ(sq.num_cells(), 2);
  EXPECT_NEAR(sq.volume(), 1.0, 1e-15);
  EXPECT_NEAR(sq.boundary_measure(), 4.0, 1e-15);
  const Mesh cube = box({1, 1, 1}, {2, 2, 2});
  EXPECT_EQ(cube.num_vertices(), 27);
  EXPECT_EQ(cube.num_cells(), 48);
  EXPECT_NEAR(cube.volume(), 1.0, 1e-14);
  EXPECT_NEAR(cube.boundary_measure(), 6.0, 1e-14);
  const Mesh line = box({1}, {2});
  EXPECT_EQ(line.num_vertices(), 3);
  EXPECT_EQ(line.boundary_facets.size(), 2u);
}

TEST(BoxMesh, CountsInOneAndTwoDimensions) {
  const Mesh line = box({1}, {4});
  EXPECT_EQ(line.num_vertices(), 5);
  EXPECT_EQ(line.num_cells(), 4);
  EXPECT_EQ(line.num_boundary_vertices(), 2);
  EXPECT_NEAR(line.boundary_measure(), 2.0, 1e-15);  // counting measure on the end points

  const Mesh sq = box({2, 1}, {4, 2});
  EXPECT_EQ(sq.num_vertices(), 15);
  EXPECT_EQ(sq.num_cells(), 16);
  EXPECT_EQ(sq.num_boundary_vertices(), 12);
  EXPECT_NEAR(sq.boundary_measure(), 6.0, 1e-14);
  EXPECT_NEAR(sq.volume(), 2.0, 1e-14);
}

TEST(BoxMesh, VolumeAndSurfaceOfAnisotropicBox) {
  const Mesh m = box({2, 1, 0.5}, {4, 3, 2});
  EXPECT_NEAR(m.volume(), 1.0, 1e-13);
  EXPECT_NEAR(m.boundary_measure(), 2 * (2 * 1 + 2 * 0.5 + 1 * 0.5), 1e-13);
  EXPECT_NEAR(m.vertex_volumes().sum(), 1.0, 1e-13);
  EXPECT_NEAR(m.boundary_vertex_measures().sum(), m.boundary_measure(), 1e-13);
  EXPECT_DOUBLE_EQ(m.grid_spacing, 0.5);
}

TEST(BoxMesh, CellVolumesMatchDeterminants) {
  const Mesh m = box({1, 2, 1}, {2, 3, 2});
  ASSERT_EQ(m.cell_volumes.size(), m.cells.size());
  for (std::size_t k = 0; k < m.cells.size(); ++k) {
    EXPECT_GT(m.cell_volumes[k], 0.0);
    EXPECT_NEAR(m.cell_volumes[k], simplex_volume(m, m.cells[k]), 1e-14);
  }
}

TEST(BoxMesh, ConformingFacetAdjacency) {
  for (int d = 2; d <= 3; ++d) {
    std::vector<double> ext(static_cast<std::size_t>(d), 1.0);
    std::vector<int> div(static_cast<std::size_t>(d), 3);
    const Mesh m = box(ext, div);
    const auto counts = facet_counts(m);
    std::size_t boundary = 0;
    for (const auto& [f, n] : counts) {
      ASSERT_LE(n, 2);
      if (n == 1) ++boundary;
    }
    EXPECT_EQ(boundary, m.boundary_facets.size());
    for (const auto& bf : m.boundary_facets) {
      std::vector<Index> key(bf.vertices.begin(), bf.vertices.begin() + d);
      std::sort(key.begin(), key.end());
      ASSERT_TRUE(counts.count(key));
      EXPECT_EQ(counts.at(key), 1);
    }
  }
}

TEST(BoxMesh, BoundaryVerticesSortedAndOnBoundary) {
  const Mesh m = box({1, 1, 1}, {4, 4, 4});
  EXPECT_TRUE(std::is_sorted(m.boundary_vertices.begin(), m.boundary_vertices.end()));
  for (Index v : m.boundary_vertices) {
    const auto& p = m.vertices[static_cast<std::size_t>(v)];
    bool on = false;
    for (int k = 0; k < 3; ++k) on = on || p[k] < 1e-12 || p[k] > 1 - 1e-12;
    EXPECT_TRUE(on);
  }
  for (Index s = 0; s < m.num_boundary_vertices(); ++s) {
    EXPECT_EQ(m.boundary_slot(m.boundary_vertices[static_cast<std::size_t>(s)]), s);
  }
  EXPECT_EQ(m.boundary_slot(m.num_vertices() / 2), -1);  // centre vertex
}

TEST(BoxMesh, LumpedWeightsPositive) {
  const Mesh m = box({1, 1, 1}, {3, 2, 4});
  EXPECT_GT(m.vertex_volumes().minCoeff(), 0.0);
  EXPECT_GT(m.boundary_vertex_measures().minCoeff(), 0.0);
}

TEST(BoxMesh, RejectsBadInput) {
  EXPECT_THROW(box({1, 1}, {2}), Error);
  EXPECT_THROW(box({1, 1}, {0, 2}), Error);
  EXPECT_THROW(box({1, -1}, {2, 2}), Error);
  EXPECT_THROW(box({1, 1, 1, 1}, {1, 1, 1, 1}), Error);
}

TEST(LShapeMesh, AreaAndPerimeter) {
  const Mesh m = build_lshape_mesh(2, 4);
  EXPECT_NEAR(m.volume(), 0.75, 1e-14);
  EXPECT_NEAR(m.boundary_measure(), 4.0, 1e-14);
  for (const auto& p : m.vertices) EXPECT_FALSE(p[0] > 0.5 + 1e-12 && p[1] > 0.5 + 1e-12);
}

TEST(LShapeMesh, VolumeAndSurfaceInThreeDimensions) {
  const Mesh m = build_lshape_mesh(3, 4);
  EXPECT_NEAR(m.volume(), 7.0 / 8.0, 1e-13);
  EXPECT_NEAR(m.boundary_measure(), 6.0, 1e-13);
  const auto counts = facet_counts(m);
  std::size_t boundary = 0;
  for (const auto& [f, n] : counts) boundary += n == 1;
  EXPECT_EQ(boundary, m.boundary_facets.size());
}

TEST(MeshText, WritesVerticesThenCells) {
  const Mesh m = box({1}, {2});
  std::ostringstream out;
  write_mesh_text(m, out);
  std::istringstream in(out.str());
  std::string tag;
  int vertices = 0, cells = 0;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    ls >> tag;
    if (tag == "v") {
      EXPECT_EQ(cells, 0);
      ++vertices;
    } else if (tag == "c") {
      ++cells;
    }
  }
  EXPECT_EQ(vertices, 3);
  EXPECT_EQ(cells, 2);
}

TEST(FormatShortest, RoundTripsRandomDoubles) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mant(-1, 1);
  std::uniform_int_distribution<int> expo(-300, 300);
  for (int k = 0; k < 2000; ++k) {
    const double v = std::ldexp(mant(rng), expo(rng) / 4);
    const std::string s = format_shortest(v);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    EXPECT_EQ(back, v) << s;
  }
  EXPECT_EQ(format_shortest(0.5), "0.5");
}
