#include "nashlab/assembly.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <ostream>
#include <random>

namespace nashlab {

namespace {

// Columns are the barycentric gradients of the d+1 vertices.
Matrix barycentric_gradients(const Mesh& mesh, const Cell& cell, Index cell_id) {
  const int d = mesh.dim;
  Matrix jac(d, d);
  const Point& o = mesh.vertices[cell[0]];
  for (int k = 0; k < d; ++k) {
    const Point& p = mesh.vertices[cell[k + 1]];
    for (int c = 0; c < d; ++c) jac(c, k) = p[c] - o[c];
  }
  const double det = jac.determinant();
  if (!(std::abs(det) > 0.0) || !std::isfinite(det)) {
    throw Error("assembly: degenerate cell " + std::to_string(cell_id));
  }
  const Matrix inv = jac.inverse();
  Matrix grads(d, d + 1);
  grads.rightCols(d) = inv.transpose();
  grads.col(0) = -grads.rightCols(d).rowwise().sum();
  return grads;
}

SparseMatrix diagonal_sparse(const Vector& diag) {
  SparseMatrix m(diag.size(), diag.size());
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(diag.size()));
  for (Index i = 0; i < diag.size(); ++i) t.emplace_back(i, i, diag[i]);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

// Gamma^T B Gamma for a dense boundary block.
SparseMatrix lift_boundary(const Mesh& mesh, const Matrix& b) {
  const Index n = mesh.num_vertices();
  std::vector<Triplet> t;
  for (Index j = 0; j < b.cols(); ++j) {
    for (Index i = 0; i < b.rows(); ++i) {
      if (b(i, j) != 0.0) {
        t.emplace_back(mesh.boundary_vertices[i], mesh.boundary_vertices[j], b(i, j));
      }
    }
  }
  SparseMatrix m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

double norm1(const SparseMatrix& m) {
  double best = 0.0;
  for (int j = 0; j < m.outerSize(); ++j) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(m, j); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

Vector random_field(std::mt19937_64& rng, Index n) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector u(n);
  for (Index i = 0; i < n; ++i) u[i] = dist(rng);
  return u;
}

}  // namespace

double AssembledSystem::l2_norm(const FieldVector& u) const {
  return std::sqrt(u.cwiseAbs2().dot(M));
}

double AssembledSystem::l1_norm(const FieldVector& u) const { return u.cwiseAbs().dot(M); }

double AssembledSystem::h1_norm(const FieldVector& u) const { return std::sqrt(u.dot(H1 * u)); }

SparseMatrix assemble_stiffness(const Mesh& mesh, const CoefficientField& field) {
  return assemble_stiffness(mesh, field.per_cell_matrix);
}

SparseMatrix assemble_stiffness(const Mesh& mesh, const std::vector<Matrix>& per_cell_matrix) {
  if (static_cast<Index>(per_cell_matrix.size()) != mesh.num_cells()) {
    throw Error("assemble_stiffness: coefficient field does not match mesh cells");
  }
  const int d = mesh.dim;
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(mesh.num_cells() * (d + 1) * (d + 1)));
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const Cell& cell = mesh.cells[c];
    const Matrix g = barycentric_gradients(mesh, cell, c);
    const double vol = mesh.cell_volumes[c];
    if (!(vol > 0.0)) throw Error("assembly: degenerate cell " + std::to_string(c));
    // local(i, j) = (A grad phi_j) . grad phi_i
    const Matrix local = vol * (g.transpose() * per_cell_matrix[c] * g);
    for (int i = 0; i <= d; ++i) {
      for (int j = 0; j <= d; ++j) t.emplace_back(cell[i], cell[j], local(i, j));
    }
  }
  SparseMatrix k(mesh.num_vertices(), mesh.num_vertices());
  k.setFromTriplets(t.begin(), t.end());
  return k;
}

SparseMatrix assemble_consistent_mass(const Mesh& mesh) {
  const int d = mesh.dim;
  std::vector<Triplet> t;
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const double base = mesh.cell_volumes[c] / ((d + 1.0) * (d + 2.0));
    for (int i = 0; i <= d; ++i) {
      for (int j = 0; j <= d; ++j) {
        t.emplace_back(mesh.cells[c][i], mesh.cells[c][j], i == j ? 2.0 * base : base);
      }
    }
  }
  SparseMatrix m(mesh.num_vertices(), mesh.num_vertices());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

SparseMatrix trace_map(const Mesh& mesh) {
  SparseMatrix g(mesh.num_boundary_vertices(), mesh.num_vertices());
  std::vector<Triplet> t;
  for (Index i = 0; i < mesh.num_boundary_vertices(); ++i) {
    t.emplace_back(i, mesh.boundary_vertices[i], 1.0);
  }
  g.setFromTriplets(t.begin(), t.end());
  return g;
}

Matrix assemble_boundary_term(const Mesh& mesh, const BoundaryOperatorSpec& spec) {
  if (spec.size() != mesh.num_boundary_vertices()) {
    throw Error("assemble_boundary_term: operator size " + std::to_string(spec.size()) +
                " does not match " + std::to_string(mesh.num_boundary_vertices()) +
                " boundary vertices");
  }
  return spec.boundary_measure.asDiagonal() * spec.matrix();
}

AssembledSystem assemble_system(const Mesh& mesh, const CoefficientField& field,
                                const BoundaryOperatorSpec& spec, double alpha) {
  AssembledSystem sys;
  sys.dim = mesh.dim;
  sys.alpha = alpha;
  sys.K = assemble_stiffness(mesh, field);
  sys.K_id = assemble_stiffness(
      mesh, std::vector<Matrix>(static_cast<std::size_t>(mesh.num_cells()),
                                Matrix::Identity(mesh.dim, mesh.dim)));
  sys.M = mesh.vertex_volumes();
  sys.M_consistent = assemble_consistent_mass(mesh);
  sys.Mb = mesh.boundary_vertex_measures();
  sys.Gamma = trace_map(mesh);
  sys.Bw = assemble_boundary_term(mesh, spec);

  const SparseMatrix mass = diagonal_sparse(sys.M);
  sys.FormA = sys.K + lift_boundary(mesh, sys.Bw);
  sys.FormAtilde = sys.FormA + alpha * mass;

  std::vector<Matrix> transposed;
  transposed.reserve(field.per_cell_matrix.size());
  for (const auto& a : field.per_cell_matrix) transposed.push_back(a.transpose());
  const Matrix bw_adj = spec.boundary_measure.asDiagonal() * spec.adjoint_matrix();
  sys.FormA_adj = assemble_stiffness(mesh, transposed) + lift_boundary(mesh, bw_adj);
  sys.FormAtilde_adj = sys.FormA_adj + alpha * mass;

  sys.H1 = sys.K_id + mass;
  sys.trace_norm_sq = compute_trace_norm(sys);
  return sys;
}

double compute_trace_norm(const SparseMatrix& H1, const SparseMatrix& Gamma, const Vector& Mb) {
  Eigen::SimplicialLDLT<SparseMatrix> solver(H1);
  if (solver.info() != Eigen::Success) throw Error("compute_trace_norm: H1 is not positive definite");
  const SparseMatrix G = SparseMatrix(Gamma.transpose()) * diagonal_sparse(Mb) * Gamma;

  // H1^{-1} G is entrywise nonnegative with a primitive boundary block, so the
  // all-ones start has a component along the (simple) top eigenvector.
  Vector x = Vector::Ones(H1.rows());
  x /= std::sqrt(x.dot(H1 * x));
  constexpr int kMaxIterations = 10000;
  constexpr double kTolerance = 1e-10;
  for (int it = 0; it < kMaxIterations; ++it) {
    const Vector gx = G * x;
    const double lambda = x.dot(gx);  // x is H1-normalised
    const Vector z = solver.solve(gx);
    const Vector r = z - lambda * x;
    const double res = std::sqrt(std::max(0.0, r.dot(H1 * r)));
    if (!(lambda > 0.0)) throw Error("compute_trace_norm: trace operator vanished");
    if (res <= kTolerance * lambda) return lambda;
    x = z / std::sqrt(z.dot(H1 * z));
  }
  throw Error("compute_trace_norm: power iteration did not converge in 10000 iterations");
}

double compute_trace_norm(const AssembledSystem& sys) {
  return compute_trace_norm(sys.H1, sys.Gamma, sys.Mb);
}

double mesh_trace_norm(const Mesh& mesh) {
  const SparseMatrix k_id = assemble_stiffness(
      mesh, std::vector<Matrix>(static_cast<std::size_t>(mesh.num_cells()),
                                Matrix::Identity(mesh.dim, mesh.dim)));
  const SparseMatrix h1 = k_id + diagonal_sparse(mesh.vertex_volumes());
  return compute_trace_norm(h1, trace_map(mesh), mesh.boundary_vertex_measures());
}

std::string to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::HypothesisUnmet: return "hypothesis_unmet";
    case CheckStatus::DiscretizationLimited: return "discretization_limited";
  }
  return "unknown";
}

AccretivityReport check_accretivity(const AssembledSystem& sys, const Admissibility& adm) {
  AccretivityReport r;
  const Matrix diff = Matrix(sys.FormAtilde) - Matrix(sys.H1);
  const Matrix sym = 0.5 * (diff + diff.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  r.lambda_min = eig.eigenvalues().minCoeff();
  r.threshold = -1e-10 * norm1(sys.FormAtilde);
  if (!adm.accretive) {
    r.status = CheckStatus::HypothesisUnmet;
  } else {
    r.status = r.lambda_min >= r.threshold ? CheckStatus::Pass : CheckStatus::Fail;
  }
  return r;
}

ContinuityReport check_continuity(const AssembledSystem& sys, const CoefficientField& field,
                                  const BoundaryOperatorSpec& spec, int samples,
                                  std::uint64_t seed) {
  ContinuityReport r;
  r.samples = samples;
  r.seed = seed;
  const double d = sys.dim;
  const double c1 = d * d * field.sup_norm + spec.norm2 * sys.trace_norm_sq;
  std::mt19937_64 rng(seed);
  const Index n = sys.size();
  for (int s = 0; s < samples; ++s) {
    Vector u, v;
    if (s == 0) {
      u = v = Vector::Ones(n);
    } else {
      u = random_field(rng, n);
      v = random_field(rng, n);
    }
    const double lhs = std::abs(u.dot(sys.FormAtilde * v));
    const double rhs = c1 * sys.h1_norm(u) * sys.h1_norm(v) + sys.alpha * sys.l2_norm(u) * sys.l2_norm(v);
    if (rhs > 0.0) r.max_ratio = std::max(r.max_ratio, lhs / rhs);
  }
  r.status = r.max_ratio <= 1.0 + 1e-12 ? CheckStatus::Pass : CheckStatus::Fail;
  return r;
}

double boundary_cost_slack(const AssembledSystem& sys, const BoundaryOperatorSpec& spec,
                           double alpha, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = std::numeric_limits<double>::infinity();
  const Index n = sys.size();
  for (int s = 0; s < samples; ++s) {
    const Vector u = random_field(rng, n);
    const Vector gu = sys.Gamma * u;
    const double boundary = gu.dot(sys.Bw * gu);
    const double energy = u.dot(sys.K * u) / alpha + u.cwiseAbs2().dot(sys.M);
    worst = std::min(worst, boundary + spec.norm2 * sys.trace_norm_sq * energy);
  }
  return worst;
}

void write_coordinate(const SparseMatrix& m, std::ostream& out) {
  for (int j = 0; j < m.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(m, j); it; ++it) {
      out << it.row() << ' ' << it.col() << ' ' << format_shortest(it.value()) << '\n';
    }
  }
}

void write_coordinate(const Matrix& m, std::ostream& out) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (m(i, j) != 0.0) out << i << ' ' << j << ' ' << format_shortest(m(i, j)) << '\n';
    }
  }
}

}  // namespace nashlab
