#include "nashlab/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace nashlab {

namespace {

bool all_finite(const Matrix& m) { return m.allFinite(); }

double parse_width(const std::string& selector, const std::string& name) {
  const auto open = selector.find('(');
  const auto close = selector.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close <= open + 1) {
    throw Error("kernel selector '" + selector + "': expected " + name + "(width)");
  }
  const double w = std::stod(selector.substr(open + 1, close - open - 1));
  if (!(w > 0.0)) throw Error("kernel selector '" + selector + "': width must be positive");
  return w;
}

}  // namespace

double certify_ellipticity(const std::vector<Matrix>& per_cell_matrix) {
  if (per_cell_matrix.empty()) throw Error("certify_ellipticity: no cell matrices");
  double alpha = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < per_cell_matrix.size(); ++c) {
    const Matrix& a = per_cell_matrix[c];
    if (!all_finite(a)) {
      throw Error("certify_ellipticity: non-finite coefficient in cell " + std::to_string(c));
    }
    const Matrix sym = 0.5 * (a + a.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
    alpha = std::min(alpha, eig.eigenvalues().minCoeff());
  }
  if (!(alpha > 0.0)) {
    throw Error("certify_ellipticity: coefficient is not uniformly elliptic (alpha = " +
                std::to_string(alpha) + ")");
  }
  return alpha;
}

CoefficientField make_coefficient_field(int dim, std::vector<Matrix> per_cell_matrix) {
  for (const auto& a : per_cell_matrix) {
    if (a.rows() != dim || a.cols() != dim) {
      throw Error("coefficient matrix has wrong size for dimension " + std::to_string(dim));
    }
  }
  CoefficientField field;
  field.dim = dim;
  field.alpha = certify_ellipticity(per_cell_matrix);
  for (const auto& a : per_cell_matrix) {
    field.sup_norm = std::max(field.sup_norm, a.cwiseAbs().maxCoeff());
  }
  field.per_cell_matrix = std::move(per_cell_matrix);
  return field;
}

CoefficientField uniform_coefficient(const Mesh& mesh, const Matrix& a) {
  return make_coefficient_field(
      mesh.dim, std::vector<Matrix>(static_cast<std::size_t>(mesh.num_cells()), a));
}

CoefficientField isotropic_coefficient(const Mesh& mesh, double value) {
  return uniform_coefficient(mesh, value * Matrix::Identity(mesh.dim, mesh.dim));
}

std::string to_string(BoundaryKind kind) {
  switch (kind) {
    case BoundaryKind::Zero: return "zero";
    case BoundaryKind::Multiplication: return "multiplication";
    case BoundaryKind::Kernel: return "kernel";
    case BoundaryKind::Dense: return "dense";
  }
  return "unknown";
}

BoundaryRepresentation BoundaryRepresentation::multiplication(Vector beta) {
  BoundaryRepresentation r;
  r.kind = BoundaryKind::Multiplication;
  r.beta = std::move(beta);
  return r;
}

BoundaryRepresentation BoundaryRepresentation::integral_kernel(Matrix k) {
  BoundaryRepresentation r;
  r.kind = BoundaryKind::Kernel;
  r.kernel = std::move(k);
  return r;
}

BoundaryRepresentation BoundaryRepresentation::dense_matrix(Matrix d) {
  BoundaryRepresentation r;
  r.kind = BoundaryKind::Dense;
  r.dense = std::move(d);
  return r;
}

Matrix BoundaryRepresentation::discrete_operator(const Vector& boundary_measure) const {
  const Index n = boundary_measure.size();
  switch (kind) {
    case BoundaryKind::Zero:
      return Matrix::Zero(n, n);
    case BoundaryKind::Multiplication:
      return beta.asDiagonal();
    case BoundaryKind::Kernel:
      return kernel * boundary_measure.asDiagonal();
    case BoundaryKind::Dense:
      return dense;
  }
  return Matrix::Zero(n, n);
}

BoundaryRepresentation BoundaryRepresentation::absolute() const {
  BoundaryRepresentation r = *this;
  if (kind == BoundaryKind::Multiplication) r.beta = beta.cwiseAbs();
  if (kind == BoundaryKind::Kernel) r.kernel = kernel.cwiseAbs();
  if (kind == BoundaryKind::Dense) r.dense = dense.cwiseAbs();
  return r;
}

BoundaryRepresentation BoundaryRepresentation::scaled(double s) const {
  BoundaryRepresentation r = *this;
  if (kind == BoundaryKind::Multiplication) r.beta *= s;
  if (kind == BoundaryKind::Kernel) r.kernel *= s;
  if (kind == BoundaryKind::Dense) r.dense *= s;
  return r;
}

Matrix BoundaryOperatorSpec::adjoint_matrix() const {
  return boundary_measure.cwiseInverse().asDiagonal() * matrix().transpose() *
         boundary_measure.asDiagonal();
}

double weighted_operator_norm2(const Matrix& op, const Vector& boundary_measure) {
  if (op.size() == 0) return 0.0;
  const Vector w = boundary_measure.cwiseSqrt();
  const Matrix g = w.asDiagonal() * op * w.cwiseInverse().asDiagonal();
  const Matrix normal = g.transpose() * g;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(normal, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
}

double operator_norm_inf(const Matrix& op) {
  if (op.size() == 0) return 0.0;
  return op.cwiseAbs().rowwise().sum().maxCoeff();
}

BoundaryOperatorSpec build_boundary_operator(BoundaryRepresentation op, const Mesh& mesh) {
  return build_boundary_operator(std::move(op), mesh.boundary_vertex_measures());
}

BoundaryOperatorSpec build_boundary_operator(BoundaryRepresentation op, Vector boundary_measure) {
  const Index n = boundary_measure.size();
  switch (op.kind) {
    case BoundaryKind::Zero:
      break;
    case BoundaryKind::Multiplication:
      if (op.beta.size() != n) throw Error("boundary operator: beta must have one value per boundary vertex");
      if (!op.beta.allFinite()) throw Error("boundary operator: non-finite beta");
      break;
    case BoundaryKind::Kernel:
      if (op.kernel.rows() != n || op.kernel.cols() != n) throw Error("boundary operator: kernel size mismatch");
      if (!op.kernel.allFinite()) throw Error("boundary operator: non-finite kernel");
      break;
    case BoundaryKind::Dense:
      if (op.dense.rows() != n || op.dense.cols() != n) throw Error("boundary operator: matrix size mismatch");
      if (!op.dense.allFinite()) throw Error("boundary operator: non-finite matrix");
      break;
  }

  BoundaryOperatorSpec spec;
  spec.boundary_measure = std::move(boundary_measure);
  spec.bar = op.absolute();
  spec.op = std::move(op);

  if (spec.op.kind == BoundaryKind::Zero) return spec;
  if (spec.op.kind == BoundaryKind::Multiplication) {
    spec.norm2 = spec.norm_inf = spec.op.beta.cwiseAbs().maxCoeff();
    spec.norm2_bar = spec.norm_inf_bar = spec.norm2;
    return spec;
  }
  const Matrix b = spec.matrix();
  const Matrix bbar = spec.bar_matrix();
  spec.norm_inf = operator_norm_inf(b);
  spec.norm2 = weighted_operator_norm2(b, spec.boundary_measure);
  spec.norm_inf_bar = operator_norm_inf(bbar);
  spec.norm2_bar = weighted_operator_norm2(bbar, spec.boundary_measure);
  return spec;
}

BoundaryOperatorSpec shifted_bar_operator(const BoundaryOperatorSpec& spec, int sign) {
  const double s = sign >= 0 ? 1.0 : -1.0;
  const Index n = spec.size();
  switch (spec.bar.kind) {
    case BoundaryKind::Zero:
      return build_boundary_operator(BoundaryRepresentation::zero(), spec.boundary_measure);
    case BoundaryKind::Multiplication:
      return build_boundary_operator(
          BoundaryRepresentation::multiplication(
              (Vector::Constant(n, spec.norm_inf_bar) + s * spec.bar.beta).eval()),
          spec.boundary_measure);
    default: {
      Matrix m = s * spec.bar_matrix();
      m.diagonal().array() += spec.norm_inf_bar;
      return build_boundary_operator(BoundaryRepresentation::dense_matrix(std::move(m)),
                                     spec.boundary_measure);
    }
  }
}

BoundaryOperatorSpec negated_bar_operator(const BoundaryOperatorSpec& spec) {
  return build_boundary_operator(spec.bar.scaled(-1.0), spec.boundary_measure);
}

Admissibility check_admissibility(const BoundaryOperatorSpec& spec, double alpha,
                                  double trace_norm_sq) {
  Admissibility a;
  const double lhs = 1.0 + (spec.norm_inf_bar + spec.norm2_bar) * trace_norm_sq;
  a.margin = alpha - lhs;
  a.admissible = lhs <= alpha;
  const double weak = 1.0 + spec.norm2 * trace_norm_sq;
  a.accretive_margin = alpha - weak;
  a.accretive = weak <= alpha;
  return a;
}

Matrix kernel_from_selector(const Mesh& mesh, const std::string& selector, double scale) {
  const Index n = mesh.num_boundary_vertices();
  const int d = mesh.dim;
  std::vector<Point> x(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) x[i] = mesh.vertices[mesh.boundary_vertices[i]];

  std::array<double, 3> extent{0.0, 0.0, 0.0};
  for (const auto& p : mesh.vertices) {
    for (int k = 0; k < d; ++k) extent[k] = std::max(extent[k], p[k]);
  }

  auto dist2 = [d](const Point& a, const Point& b) {
    double s = 0.0;
    for (int k = 0; k < d; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return s;
  };

  Matrix k(n, n);
  if (selector == "constant") {
    k.setConstant(scale);
  } else if (selector.rfind("gaussian", 0) == 0) {
    const double w = parse_width(selector, "gaussian");
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) k(i, j) = scale * std::exp(-dist2(x[i], x[j]) / (w * w));
    }
  } else if (selector == "cosine") {
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        k(i, j) = scale * std::cos(std::numbers::pi * std::sqrt(dist2(x[i], x[j])));
      }
    }
  } else if (selector == "antisymmetric_cosine") {
    if (d < 2) throw Error("antisymmetric_cosine kernel needs d >= 2");
    const Vector m = mesh.boundary_vertex_measures();
    Vector phi(n), psi(n);
    for (Index i = 0; i < n; ++i) {
      phi[i] = std::cos(std::numbers::pi * x[i][0] / extent[0]);
      psi[i] = std::cos(std::numbers::pi * x[i][1] / extent[1]);
    }
    phi.array() -= m.dot(phi) / m.sum();
    psi.array() -= m.dot(psi) / m.sum();
    k = scale * (phi * psi.transpose() - psi * phi.transpose());
  } else {
    throw Error("unknown kernel selector '" + selector + "'");
  }
  return k;
}

}  // namespace nashlab
