#include "nashlab/verify.hpp"

#include "nashlab/expm.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <thread>
#include <tuple>

namespace nashlab {

namespace {

Vector uniform_field(std::mt19937_64& rng, Index n, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Vector u(n);
  for (Index i = 0; i < n; ++i) u[i] = dist(rng);
  return u;
}

double sparse_norm1(const SparseMatrix& m) {
  Vector col = Vector::Zero(m.cols());
  for (int j = 0; j < m.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(m, j); it; ++it) col[j] += std::abs(it.value());
  }
  return col.size() ? col.maxCoeff() : 0.0;
}

double sparse_norm_inf(const SparseMatrix& m) {
  Vector row = Vector::Zero(m.rows());
  for (int j = 0; j < m.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(m, j); it; ++it) row[it.row()] += std::abs(it.value());
  }
  return row.size() ? row.maxCoeff() : 0.0;
}

SparseMatrix diagonal(const Vector& d) {
  SparseMatrix m(d.size(), d.size());
  std::vector<Triplet> t;
  for (Index i = 0; i < d.size(); ++i) t.emplace_back(i, i, d[i]);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

// Runs body(k) for k in [0, count) on the NASHLAB_THREADS workers.
template <typename Body>
void parallel_for(std::size_t count, Body&& body) {
  const int threads = std::min<int>(thread_count_from_env(), static_cast<int>(count));
  if (threads <= 1) {
    for (std::size_t k = 0; k < count; ++k) body(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < count; k = next++) body(k);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

std::vector<FieldVector> cosine_modes(const Mesh& mesh, int count) {
  const int d = mesh.dim;
  std::array<double, 3> lo{0, 0, 0}, hi{0, 0, 0};
  for (int k = 0; k < d; ++k) {
    lo[k] = std::numeric_limits<double>::infinity();
    hi[k] = -lo[k];
  }
  for (const auto& p : mesh.vertices) {
    for (int k = 0; k < d; ++k) {
      lo[k] = std::min(lo[k], p[k]);
      hi[k] = std::max(hi[k], p[k]);
    }
  }
  constexpr int kMax = 6;
  std::vector<std::array<int, 3>> indices;
  for (int a = 0; a <= kMax; ++a) {
    for (int b = 0; b <= (d > 1 ? kMax : 0); ++b) {
      for (int c = 0; c <= (d > 2 ? kMax : 0); ++c) {
        if (a + b + c > 0) indices.push_back({a, b, c});
      }
    }
  }
  std::sort(indices.begin(), indices.end(), [](const auto& x, const auto& y) {
    const int nx = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    const int ny = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
    return std::tie(nx, x) < std::tie(ny, y);
  });
  if (count > static_cast<int>(indices.size())) throw Error("cosine_modes: too many modes requested");

  std::vector<FieldVector> modes;
  for (int m = 0; m < count; ++m) {
    FieldVector u(mesh.num_vertices());
    for (Index i = 0; i < mesh.num_vertices(); ++i) {
      double v = 1.0;
      for (int k = 0; k < d; ++k) {
        const double s = (mesh.vertices[i][k] - lo[k]) / (hi[k] - lo[k]);
        v *= std::cos(indices[m][k] * std::numbers::pi * s);
      }
      u[i] = v;
    }
    modes.push_back(std::move(u));
  }
  return modes;
}

// ---------------------------------------------------------------- Nash

double nash_ratio(const AssembledSystem& sys, const FieldVector& u) {
  const double d = sys.dim;
  const double l2 = sys.l2_norm(u);
  const double l1 = sys.l1_norm(u);
  const double h1 = sys.h1_norm(u);
  if (!(l1 > 0.0) || !(h1 > 0.0)) return 0.0;
  return std::pow(l2, 2.0 + 4.0 / d) / (std::pow(l1, 4.0 / d) * h1 * h1);
}

NashReport check_nash(const Mesh& mesh, const AssembledSystem& sys, int samples,
                      std::uint64_t seed, bool allow_low_dim) {
  if (mesh.dim <= 2 && !allow_low_dim) {
    throw Error("check_nash: the inequality is only claimed for d > 2; pass the override to run in d = " +
                std::to_string(mesh.dim));
  }
  constexpr int kModes = 10;
  if (samples < 1 + kModes) throw Error("check_nash: need at least 11 samples");

  NashReport r;
  r.dim = mesh.dim;
  r.seed = seed;
  r.out_of_hypothesis = mesh.dim <= 2;

  std::vector<FieldVector> list;
  list.push_back(FieldVector::Ones(sys.size()));
  for (auto& m : cosine_modes(mesh, kModes)) list.push_back(std::move(m));
  std::mt19937_64 rng(seed);
  while (static_cast<int>(list.size()) < samples) list.push_back(uniform_field(rng, sys.size(), -1, 1));

  bool finite = true;
  for (const auto& u : list) {
    if (u.cwiseAbs().maxCoeff() == 0.0) continue;
    const double q = nash_ratio(sys, u);
    finite = finite && std::isfinite(q) && q > 0.0;
    r.ratios.push_back(q);
    r.max_ratio = std::max(r.max_ratio, q);
  }
  r.samples = static_cast<int>(r.ratios.size());
  r.implied_constant = r.max_ratio;

  // Gradient-only form on the constant: |1|_2^{2+4/d} against C |1|_1^{4/d} |grad 1|^2.
  const FieldVector one = FieldVector::Ones(sys.size());
  const double grad_sq = one.dot(sys.K_id * one);
  const double l2_sq = one.dot(sys.M.cwiseProduct(one));
  r.gradient_only_violation = grad_sq <= 1e-12 * l2_sq;

  r.status = finite && r.max_ratio > 0.0 ? CheckStatus::Pass : CheckStatus::Fail;
  return r;
}

// ---------------------------------------------------- L-infinity criterion

SparseMatrix form_with_boundary(const AssembledSystem& sys, const BoundaryOperatorSpec& op) {
  const Matrix bw = op.boundary_measure.asDiagonal() * op.matrix();
  const SparseMatrix bws = bw.sparseView();
  const SparseMatrix lifted = SparseMatrix(sys.Gamma.transpose()) * bws * sys.Gamma;
  return sys.K + lifted + sys.alpha * diagonal(sys.M);
}

double truncation_form_value(const SparseMatrix& form, const FieldVector& u) {
  const FieldVector w = u.cwiseMax(-1.0).cwiseMin(1.0);
  const FieldVector z = u - w;
  return z.dot(form * w);
}

ContractivityReport check_ouhabaz_contractivity_criterion(const Mesh& mesh,
                                                          const AssembledSystem& sys,
                                                          const BoundaryOperatorSpec& spec,
                                                          const Admissibility& adm, int samples,
                                                          std::uint64_t seed) {
  ContractivityReport r;
  r.samples = samples;
  r.seed = seed;
  if (!adm.admissible) {
    r.status = CheckStatus::HypothesisUnmet;
    return r;
  }
  const SparseMatrix plus = form_with_boundary(sys, shifted_bar_operator(spec, +1));
  const SparseMatrix minus = form_with_boundary(sys, shifted_bar_operator(spec, -1));
  const double scale_plus = std::max(sparse_norm1(plus), sparse_norm_inf(plus));
  const double scale_minus = std::max(sparse_norm1(minus), sparse_norm_inf(minus));

  const std::vector<FieldVector> modes = cosine_modes(mesh, 10);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_real_distribution<double> amp(1.5, 3.0);

  r.min_plus = std::numeric_limits<double>::infinity();
  r.min_minus = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    FieldVector u;
    if (s == 0) {
      u = FieldVector::Constant(sys.size(), 2.0);
    } else {
      u = FieldVector::Constant(sys.size(), 0.5 * coef(rng));
      for (const auto& m : modes) u += coef(rng) * m;
      u *= amp(rng) / u.cwiseAbs().maxCoeff();
    }
    const FieldVector w = u.cwiseMax(-1.0).cwiseMin(1.0);
    const FieldVector z = u - w;
    const double norm = w.norm() * z.norm();
    const double vp = norm > 0.0 ? z.dot(plus * w) / (scale_plus * norm) : 0.0;
    const double vm = norm > 0.0 ? z.dot(minus * w) / (scale_minus * norm) : 0.0;
    r.min_plus = std::min(r.min_plus, vp);
    r.min_minus = std::min(r.min_minus, vm);
  }
  r.status = std::min(r.min_plus, r.min_minus) >= -r.tolerance ? CheckStatus::Pass : CheckStatus::Fail;
  return r;
}

// ------------------------------------------------------------ positivity

bool has_nonpositive_offdiagonal(const Matrix& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (i != j && m(i, j) > 0.0) return false;
    }
  }
  return true;
}

PositivityReport check_positivity(const SemigroupEvaluator& evaluator,
                                  std::span<const double> times) {
  PositivityReport r;
  r.times.assign(times.begin(), times.end());
  r.m_matrix = has_nonpositive_offdiagonal(evaluator.generator());
  evaluator.prefetch(times, thread_count_from_env());
  r.min_entry = std::numeric_limits<double>::infinity();
  for (double t : times) {
    const double m = evaluator.min_entry(t);
    r.min_entries.push_back(m);
    r.min_entry = std::min(r.min_entry, m);
  }
  if (r.min_entry >= -1e-9) {
    r.status = CheckStatus::Pass;
  } else {
    r.status = r.m_matrix ? CheckStatus::Fail : CheckStatus::DiscretizationLimited;
  }
  return r;
}

// ------------------------------------------------------------ domination

DominationReport check_domination(const SemigroupEvaluator& dominated,
                                  const SemigroupEvaluator& dominating,
                                  const AssembledSystem& dominated_sys,
                                  const AssembledSystem& dominating_sys,
                                  std::span<const double> times, int samples, std::uint64_t seed,
                                  int form_samples) {
  if (dominated.size() != dominating.size()) throw Error("check_domination: size mismatch");
  DominationReport r;
  r.times.assign(times.begin(), times.end());
  r.samples = samples;
  r.form_samples = form_samples;
  r.seed = seed;

  const Index n = dominated.size();
  std::mt19937_64 rng(seed);
  Matrix u(n, samples);
  for (int s = 0; s < samples; ++s) u.col(s) = uniform_field(rng, n, -1, 1);
  const Matrix abs_u = u.cwiseAbs();
  const Vector scale = abs_u.colwise().maxCoeff().transpose();

  const int threads = thread_count_from_env();
  dominated.prefetch(times, threads);
  dominating.prefetch(times, threads);
  r.violation_per_time.assign(times.size(), 0.0);
  parallel_for(times.size(), [&](std::size_t k) {
    const Matrix su = (*dominated.auxiliary(times[k]) * u).cwiseAbs();
    const Matrix tu = *dominating.auxiliary(times[k]) * abs_u;
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
      const double excess = (su.col(s) - tu.col(s)).maxCoeff();
      worst = std::max(worst, std::max(0.0, excess) / scale[s]);
    }
    r.violation_per_time[k] = worst;
  });
  for (double v : r.violation_per_time) r.max_violation = std::max(r.max_violation, v);

  // Form level: Re a(u, v) >= b(|u|, |v|) whenever u_i v_i >= 0.
  const SparseMatrix& fa = dominated_sys.FormAtilde;
  const SparseMatrix& fb = dominating_sys.FormAtilde;
  const double fscale = std::max({sparse_norm1(fa), sparse_norm_inf(fa), sparse_norm1(fb),
                                  sparse_norm_inf(fb)});
  r.form_min = std::numeric_limits<double>::infinity();
  for (int s = 0; s < form_samples; ++s) {
    Vector a, b;
    if (s == 0) {
      a = b = Vector::Ones(n);
    } else {
      a = uniform_field(rng, n, -1, 1);
      b = a.cwiseSign().cwiseProduct(uniform_field(rng, n, 0, 1));
      if (s % 2 == 1) b = a;
    }
    const double lhs = b.dot(fa * a);
    const double rhs = b.cwiseAbs().dot(fb * a.cwiseAbs());
    r.form_min = std::min(r.form_min, (lhs - rhs) / (fscale * a.norm() * b.norm()));
  }

  r.status = r.max_violation <= r.tolerance && r.form_min >= -1e-12 ? CheckStatus::Pass
                                                                    : CheckStatus::Fail;
  return r;
}

// ------------------------------------------------------ ultracontractivity

std::vector<double> local_log_slopes(std::span<const double> times, std::span<const double> values) {
  const std::size_t n = times.size();
  std::vector<double> slopes(n, 0.0);
  if (n < 2) return slopes;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t a = k == 0 ? 0 : k - 1;
    const std::size_t b = k + 1 == n ? n - 1 : k + 1;
    slopes[k] = (std::log(values[b]) - std::log(values[a])) / (std::log(times[b]) - std::log(times[a]));
  }
  return slopes;
}

DecayFit fit_decay(std::span<const double> times, std::span<const double> values,
                   std::span<const double> plateau_curve, const std::vector<bool>& resolved,
                   double threshold) {
  const std::vector<double> slopes = local_log_slopes(times, plateau_curve);
  DecayFit fit;
  fit.window.assign(times.size(), false);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!resolved[k] || slopes[k] > -threshold) continue;
    fit.window[k] = true;
    const double x = std::log(times[k]);
    const double y = std::log(values[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++fit.points;
  }
  if (fit.points < 4) {
    throw Error("fit_decay: only " + std::to_string(fit.points) +
                " usable grid points (need 4); extend the grid or refine the mesh");
  }
  const double n = fit.points;
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

UltracontractivityReport fit_ultracontractivity(const SemigroupEvaluator& evaluator,
                                                const TimeGrid& grid, int dim) {
  UltracontractivityReport r;
  r.times = grid.times;
  r.resolved = grid.resolved;
  evaluator.prefetch(grid.times, thread_count_from_env());
  for (double t : grid.times) {
    r.g.push_back(evaluator.norm_2_to_inf(t, false));
    r.norms.push_back(evaluator.norm_2_to_inf(t, true));
  }
  r.local_slopes = local_log_slopes(r.times, r.norms);
  const DecayFit fit = fit_decay(r.times, r.g, r.norms, r.resolved);
  r.window = fit.window;
  r.fitted_slope = fit.slope;
  r.fitted_C = std::exp(fit.intercept);
  r.mu = -4.0 * fit.slope;
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    if (!r.window[k]) continue;
    r.max_bound_ratio =
        std::max(r.max_bound_ratio, r.g[k] / (r.fitted_C * std::pow(r.times[k], r.fitted_slope)));
  }
  r.slope_low = -dim / 4.0 - 0.15;
  r.slope_high = -dim / 4.0 + 0.15;
  const bool slope_ok = r.fitted_slope >= r.slope_low && r.fitted_slope <= r.slope_high;
  r.status = slope_ok && r.max_bound_ratio <= 1.05 ? CheckStatus::Pass : CheckStatus::Fail;
  return r;
}

// ---------------------------------------------------- eventual positivity

Matrix physical_semigroup(const AssembledSystem& sys, double t) {
  const Matrix p = sys.M.cwiseInverse().asDiagonal() * Matrix(sys.FormA);
  return expm(-t * p);
}

EventualPositivityReport check_eventual_positivity(const AssembledSystem& sys,
                                                   const BoundaryOperatorSpec& spec,
                                                   std::span<const double> times, int samples,
                                                   std::uint64_t seed) {
  EventualPositivityReport r;
  r.samples = samples;
  r.seed = seed;
  const Matrix sym = sys.Bw + sys.Bw.transpose();
  if (sym.size() > 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * sym, Eigen::EigenvaluesOnly);
    r.sym_min_eigenvalue = eig.eigenvalues().minCoeff();
    r.ones_defect = (spec.matrix() * Vector::Ones(spec.size())).cwiseAbs().maxCoeff();
  }
  r.hypothesis_ok = r.sym_min_eigenvalue >= -1e-10 && r.ones_defect <= 1e-10;
  if (!r.hypothesis_ok) {
    r.status = CheckStatus::HypothesisUnmet;
    return r;
  }

  r.times.assign(times.begin(), times.end());
  std::sort(r.times.begin(), r.times.end());
  const Index n = sys.size();

  // Half random nonnegative fields, half single-vertex bumps.
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Index> pick(0, n - 1);
  Matrix u(n, samples);
  for (int s = 0; s < samples; ++s) {
    if (s % 2 == 0) {
      u.col(s) = uniform_field(rng, n, 0, 1);
    } else {
      u.col(s).setZero();
      u(s == 1 ? 0 : pick(rng), s) = 1.0;
    }
  }
  const Vector integral = u.transpose() * sys.M;

  const Matrix p = sys.M.cwiseInverse().asDiagonal() * Matrix(sys.FormA);
  r.min_ratio.assign(r.times.size(), 0.0);
  parallel_for(r.times.size(), [&](std::size_t k) {
    const Matrix su = expm(-r.times[k] * p) * u;
    double worst = std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s) worst = std::min(worst, su.col(s).minCoeff() / integral[s]);
    r.min_ratio[k] = worst;
  });

  r.final_ratio = r.min_ratio.back();
  r.delta = 0.5 * r.final_ratio;
  if (r.delta > 0.0) {
    std::size_t first = r.times.size() - 1;
    while (first > 0 && r.min_ratio[first - 1] >= r.delta) --first;
    r.t0 = r.times[first];
    r.found = true;
  }
  r.status = r.found ? CheckStatus::Pass : CheckStatus::Fail;
  return r;
}

// ------------------------------------------------------ energy decay, L1->L2

EnergyDecayReport check_energy_decay(const SemigroupEvaluator& adjoint,
                                     const AssembledSystem& sys, std::span<const double> times,
                                     int samples, std::uint64_t seed) {
  EnergyDecayReport r;
  r.samples = samples;
  r.seed = seed;
  const Matrix& p = adjoint.generator();
  const double rho = p.cwiseAbs().colwise().sum().maxCoeff();
  const double h = 1e-4 / std::max(rho, 1.0);
  const Matrix forward = expm(-h * p);
  const Matrix backward = expm(h * p);

  std::mt19937_64 rng(seed);
  Matrix u(sys.size(), samples);
  for (int s = 0; s < samples; ++s) u.col(s) = uniform_field(rng, sys.size(), -1, 1);

  r.max_excess = -std::numeric_limits<double>::infinity();
  for (double t : times) {
    if (!(t > h)) throw Error("check_energy_decay: time below the difference step");
    const Matrix v = *adjoint.auxiliary(t) * u;
    const Matrix vp = forward * v;
    const Matrix vm = backward * v;
    for (int s = 0; s < samples; ++s) {
      const double ep = vp.col(s).cwiseAbs2().dot(sys.M);
      const double em = vm.col(s).cwiseAbs2().dot(sys.M);
      const double rate = (ep - em) / (2.0 * h);
      const double h1 = v.col(s).dot(sys.H1 * v.col(s));
      const double scale = 2.0 * h1 + std::abs(rate);
      r.max_excess = std::max(r.max_excess, (rate + 2.0 * h1) / scale);
    }
  }
  r.status = r.max_excess <= 1e-6 ? CheckStatus::Pass : CheckStatus::Fail;
  return r;
}

SmoothingBoundReport check_smoothing_bound(const SemigroupEvaluator& adjoint,
                                           const AssembledSystem& sys, double nash_constant,
                                           std::span<const double> times, int samples,
                                           std::uint64_t seed) {
  SmoothingBoundReport r;
  r.samples = samples;
  r.seed = seed;
  const double d = sys.dim;
  r.constant = std::pow(d * nash_constant / 4.0, d / 4.0);

  const Index n = sys.size();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Index> pick(0, n - 1);
  Matrix u(n, samples);
  for (int s = 0; s < samples; ++s) {
    switch (s % 3) {
      case 0: u.col(s) = uniform_field(rng, n, -1, 1); break;
      case 1: u.col(s) = uniform_field(rng, n, 0, 1); break;
      default:
        u.col(s).setZero();
        u(pick(rng), s) = 1.0;
    }
  }

  for (double t : times) {
    const double bound = r.constant * std::pow(t, -d / 4.0);
    const Matrix v = *adjoint.auxiliary(t) * u;
    for (int s = 0; s < samples; ++s) {
      const double ratio = sys.l2_norm(v.col(s)) / (bound * sys.l1_norm(u.col(s)));
      r.max_ratio = std::max(r.max_ratio, ratio);
    }
    r.worst_case_ratio = std::max(r.worst_case_ratio, adjoint.norm_1_to_2(t) / bound);
  }
  r.status = r.max_ratio <= 1.0 ? CheckStatus::Pass : CheckStatus::Fail;
  return r;
}

// ------------------------------------------------------ semigroup identities

SemigroupPropertyReport check_semigroup_properties(const SemigroupEvaluator& primal,
                                                   const SemigroupEvaluator& adjoint,
                                                   std::span<const double> times, bool accretive,
                                                   std::uint64_t seed) {
  SemigroupPropertyReport r;
  const Index n = primal.size();
  const Vector& m = primal.mass();
  r.identity_defect =
      (expm(0.0 * primal.generator()) - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();

  const int threads = thread_count_from_env();
  primal.prefetch(times, threads);
  adjoint.prefetch(times, threads);

  for (std::size_t k = 0; k + 1 < times.size() && k < 8; k += 2) {
    const double t = times[k];
    const double s = times[k + 1];
    const Matrix whole = *primal.auxiliary(t + s);
    const Matrix product = *primal.auxiliary(t) * *primal.auxiliary(s);
    r.law_defect = std::max(r.law_defect, (whole - product).norm() / whole.norm());
  }

  for (double t : times) r.max_l2_norm = std::max(r.max_l2_norm, primal.norm_2_to_2(t));
  for (double lambda : {0.1, 1.0, 10.0}) {
    r.max_resolvent_norm =
        std::max(r.max_resolvent_norm, matrix_norm_2_to_2(primal.resolvent(lambda), m));
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, times.size() - 1);
  for (int s = 0; s < 50; ++s) {
    const double t = times[pick(rng)];
    const Vector u = uniform_field(rng, n, -1, 1);
    const Vector v = uniform_field(rng, n, -1, 1);
    const double lhs = (*primal.auxiliary(t) * u).cwiseProduct(m).dot(v);
    const double rhs = u.cwiseProduct(m).dot(*adjoint.auxiliary(t) * v);
    const double scale = std::sqrt(u.cwiseAbs2().dot(m) * v.cwiseAbs2().dot(m));
    r.adjoint_pairing_defect = std::max(r.adjoint_pairing_defect, std::abs(lhs - rhs) / scale);
  }

  bool ok = r.identity_defect <= 1e-13 && r.law_defect <= 1e-10 && r.adjoint_pairing_defect <= 1e-10;
  if (accretive) ok = ok && r.max_l2_norm <= 1.0 + 1e-10 && r.max_resolvent_norm <= 1.0 + 1e-10;
  r.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
  return r;
}

}  // namespace nashlab
