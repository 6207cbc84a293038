#pragma once

#include "nashlab/coefficients.hpp"
#include "nashlab/mesh.hpp"
#include "nashlab/types.hpp"

#include <cstdint>
#include <iosfwd>

namespace nashlab {

/// Every discrete operator needed to realise the forms a(B), a~(B) and their
/// adjoints with P1 elements. Sizes: n = vertices, nb = boundary vertices.
///
/// Convention: v^T FormA u = a(B)(u, v), i.e. row index = test function.
struct AssembledSystem {
  int dim = 0;
  double alpha = 0.0;

  SparseMatrix K;             // n x n, coefficient A
  SparseMatrix K_id;          // n x n, identity coefficient
  Vector M;                   // lumped mass diagonal
  SparseMatrix M_consistent;  // n x n
  Vector Mb;                  // lumped boundary mass diagonal, nb
  SparseMatrix Gamma;         // nb x n trace selection
  Matrix Bw;                  // nb x nb weak boundary operator
  SparseMatrix FormA;         // K + Gamma^T Bw Gamma
  SparseMatrix FormAtilde;    // FormA + alpha M
  SparseMatrix FormA_adj;     // same with A^T and B*
  SparseMatrix FormAtilde_adj;
  SparseMatrix H1;            // K_id + M
  double trace_norm_sq = 0.0;

  [[nodiscard]] Index size() const { return M.size(); }
  [[nodiscard]] double l2_norm(const FieldVector& u) const;
  [[nodiscard]] double l1_norm(const FieldVector& u) const;
  [[nodiscard]] double h1_norm(const FieldVector& u) const;
};

/// K_ij = sum_cells |T| (A_T grad phi_j) . grad phi_i. Throws on a degenerate cell.
SparseMatrix assemble_stiffness(const Mesh& mesh, const CoefficientField& field);
SparseMatrix assemble_stiffness(const Mesh& mesh, const std::vector<Matrix>& per_cell_matrix);

SparseMatrix assemble_consistent_mass(const Mesh& mesh);

SparseMatrix trace_map(const Mesh& mesh);

/// Bw with (Gamma v)^T Bw (Gamma u) the lumped-quadrature boundary integral
/// of (B gamma u) gamma v.
Matrix assemble_boundary_term(const Mesh& mesh, const BoundaryOperatorSpec& spec);

/// Assembles everything, including the discrete trace norm.
AssembledSystem assemble_system(const Mesh& mesh, const CoefficientField& field,
                                const BoundaryOperatorSpec& spec, double alpha);

/// Largest generalised eigenvalue of (Gamma^T Mb Gamma, H1) by power iteration
/// on H1^{-1} Gamma^T Mb Gamma; relative residual tolerance 1e-10.
double compute_trace_norm(const SparseMatrix& H1, const SparseMatrix& Gamma, const Vector& Mb);
double compute_trace_norm(const AssembledSystem& sys);

/// Discrete ||gamma||^2_{H1 -> L2} of a mesh (identity H1 Gram matrix).
double mesh_trace_norm(const Mesh& mesh);

enum class CheckStatus { Pass, Fail, HypothesisUnmet, DiscretizationLimited };

std::string to_string(CheckStatus status);

struct AccretivityReport {
  CheckStatus status = CheckStatus::Fail;
  double lambda_min = 0.0;   // smallest eigenvalue of sym(FormAtilde - H1)
  double threshold = 0.0;    // -1e-10 * ||FormAtilde||_1
};

/// ||u||^2_H1 <= Re a~(B)(u,u), tested as positive semidefiniteness of
/// sym(FormAtilde - H1). Reported as HypothesisUnmet when 1 + |B|_2 tau > alpha.
AccretivityReport check_accretivity(const AssembledSystem& sys, const Admissibility& adm);

struct ContinuityReport {
  CheckStatus status = CheckStatus::Fail;
  double max_ratio = 0.0;
  int samples = 0;
  std::uint64_t seed = 0;
};

/// |u^T FormAtilde v| <= (d^2 |A|_inf + |B|_2 tau) |u|_H1 |v|_H1 + alpha |u|_L2 |v|_L2
/// on the constant pair plus (samples - 1) random pairs.
ContinuityReport check_continuity(const AssembledSystem& sys, const CoefficientField& field,
                                  const BoundaryOperatorSpec& spec, int samples = 200,
                                  std::uint64_t seed = 1);

/// Minimum over samples of
///   Re<Bw Gu, Gu> + |B|_2 tau ((1/alpha) u^T sym(K) u + |u|^2_L2),
/// which must be nonnegative.
double boundary_cost_slack(const AssembledSystem& sys, const BoundaryOperatorSpec& spec,
                           double alpha, int samples, std::uint64_t seed);

/// Coordinate text export: "row col value" per stored entry, 0-based.
void write_coordinate(const SparseMatrix& m, std::ostream& out);
void write_coordinate(const Matrix& m, std::ostream& out);

}  // namespace nashlab
