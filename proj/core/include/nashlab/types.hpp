#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nashlab {

using Index = std::int64_t;

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using Triplet = Eigen::Triplet<double, int>;

/// Nodal values of a P1 field, one entry per mesh vertex.
using FieldVector = Eigen::VectorXd;

/// Values on the boundary vertex set, ordered as Mesh::boundary_vertices.
using BoundaryVector = Eigen::VectorXd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nashlab
