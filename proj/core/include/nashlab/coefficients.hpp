#pragma once

#include "nashlab/mesh.hpp"
#include "nashlab/types.hpp"

#include <string>
#include <vector>

namespace nashlab {

/// Piecewise-constant diffusion matrix A with its certified ellipticity
/// constant: alpha = min over cells of the smallest eigenvalue of (A + A^T)/2.
struct CoefficientField {
  int dim = 0;
  std::vector<Matrix> per_cell_matrix;
  double alpha = 0.0;
  double sup_norm = 0.0;  // max over cells of max |a_ij|
};

/// Smallest eigenvalue of the symmetric part over all cells. Throws if the
/// result is not positive or an entry is not finite.
double certify_ellipticity(const std::vector<Matrix>& per_cell_matrix);

CoefficientField make_coefficient_field(int dim, std::vector<Matrix> per_cell_matrix);
CoefficientField uniform_coefficient(const Mesh& mesh, const Matrix& a);
CoefficientField isotropic_coefficient(const Mesh& mesh, double value);

enum class BoundaryKind { Zero, Multiplication, Kernel, Dense };

std::string to_string(BoundaryKind kind);

/// One concrete representation of an operator on L2(boundary), living on the
/// boundary vertex set.
///   Multiplication: (Bw)_x = beta_x w_x
///   Kernel:         (Bw)_x = sum_y k(x,y) w_y sigma_y   (k against sigma x sigma)
///   Dense:          (Bw)_x = sum_y D_xy w_y
struct BoundaryRepresentation {
  BoundaryKind kind = BoundaryKind::Zero;
  Vector beta;    // Multiplication
  Matrix kernel;  // Kernel
  Matrix dense;   // Dense

  static BoundaryRepresentation zero() { return {}; }
  static BoundaryRepresentation multiplication(Vector beta);
  static BoundaryRepresentation integral_kernel(Matrix k);
  static BoundaryRepresentation dense_matrix(Matrix d);

  /// Matrix acting on boundary vertex values, given the lumped boundary measures.
  [[nodiscard]] Matrix discrete_operator(const Vector& boundary_measure) const;

  /// Entrywise absolute value of the symbol, kernel or matrix.
  [[nodiscard]] BoundaryRepresentation absolute() const;

  [[nodiscard]] BoundaryRepresentation scaled(double s) const;
};

/// The operator B, its positive dominating operator B-bar and the norm bounds
/// entering the admissibility condition. Norms are measured in the lumped
/// L2(boundary) / L-infinity(boundary) geometry of the mesh.
struct BoundaryOperatorSpec {
  BoundaryRepresentation op;
  BoundaryRepresentation bar;
  double norm2 = 0.0;
  double norm_inf = 0.0;
  double norm2_bar = 0.0;
  double norm_inf_bar = 0.0;
  Vector boundary_measure;

  [[nodiscard]] Index size() const { return boundary_measure.size(); }
  [[nodiscard]] Matrix matrix() const { return op.discrete_operator(boundary_measure); }
  [[nodiscard]] Matrix bar_matrix() const { return bar.discrete_operator(boundary_measure); }
  /// Measure-weighted adjoint Mb^{-1} B^T Mb.
  [[nodiscard]] Matrix adjoint_matrix() const;
};

BoundaryOperatorSpec build_boundary_operator(BoundaryRepresentation op, const Mesh& mesh);
BoundaryOperatorSpec build_boundary_operator(BoundaryRepresentation op, Vector boundary_measure);

/// ||B-bar||_inf +/- B-bar, as used by the L-infinity contractivity argument.
BoundaryOperatorSpec shifted_bar_operator(const BoundaryOperatorSpec& spec, int sign);

/// -B-bar. Its semigroup dominates the one of B whenever |B w| <= B-bar |w|.
BoundaryOperatorSpec negated_bar_operator(const BoundaryOperatorSpec& spec);

/// L2(boundary) operator norm of a boundary matrix in the lumped measure.
double weighted_operator_norm2(const Matrix& op, const Vector& boundary_measure);
/// Max absolute row sum.
double operator_norm_inf(const Matrix& op);

struct Admissibility {
  bool admissible = false;   // 1 + (|Bbar|_inf + |Bbar|_2) tau <= alpha
  double margin = 0.0;       // alpha - lhs
  bool accretive = false;    // 1 + |B|_2 tau <= alpha
  double accretive_margin = 0.0;
};

Admissibility check_admissibility(const BoundaryOperatorSpec& spec, double alpha,
                                  double trace_norm_sq);

/// Closed-form kernels evaluated at boundary vertex coordinates:
/// "constant", "gaussian(width)", "cosine", "antisymmetric_cosine".
/// The antisymmetric cosine kernel is c (phi(x) psi(y) - psi(x) phi(y)) with
/// phi, psi the boundary-mean-free parts of cos(pi x_1 / L_1), cos(pi x_2 / L_2)
/// (x_1 only in d = 1), so that B + B* = 0 and B 1 = 0 discretely.
Matrix kernel_from_selector(const Mesh& mesh, const std::string& selector, double scale);

}  // namespace nashlab
