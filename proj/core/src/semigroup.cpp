#include "nashlab/semigroup.hpp"

#include "nashlab/expm.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace nashlab {

int TimeGrid::unresolved_count() const {
  return static_cast<int>(std::count(resolved.begin(), resolved.end(), false));
}

std::vector<double> TimeGrid::resolved_times() const {
  std::vector<double> out;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (resolved[k]) out.push_back(times[k]);
  }
  return out;
}

TimeGrid raw_time_grid(double t_max, double ratio, int count, double mesh_size) {
  if (!(t_max > 0.0)) throw Error("time grid: t_max must be positive");
  if (!(ratio > 0.0 && ratio < 1.0)) throw Error("time grid: ratio must lie in (0, 1)");
  if (count < 1) throw Error("time grid: count must be >= 1");
  TimeGrid grid;
  grid.resolution_floor = mesh_size * mesh_size;
  grid.requested_ratio = grid.ratio = ratio;
  for (int k = 0; k < count; ++k) {
    const double t = t_max * std::pow(ratio, k);
    grid.times.push_back(t);
    grid.resolved.push_back(t >= grid.resolution_floor * (1.0 - 1e-12));
  }
  return grid;
}

TimeGrid geometric_time_grid(double t_max, double ratio, int count, double mesh_size) {
  TimeGrid grid = raw_time_grid(t_max, ratio, count, mesh_size);
  const double floor = grid.resolution_floor;
  if (grid.times.back() >= floor) return grid;
  if (t_max < floor || count < 2) {
    throw Error("time grid: t_max = " + std::to_string(t_max) + " is below h^2 = " +
                std::to_string(floor) + "; refine the mesh or raise t_max");
  }
  const double r = std::pow(floor / t_max, 1.0 / (count - 1));
  grid = raw_time_grid(t_max, r, count, mesh_size);
  grid.times.back() = floor;
  grid.resolved.back() = true;
  grid.requested_ratio = ratio;
  grid.adjusted = true;
  return grid;
}

double matrix_norm_2_to_inf(const Matrix& s, const Vector& m) {
  const Vector inv = m.cwiseInverse();
  return std::sqrt((s.cwiseAbs2() * inv).maxCoeff());
}

double matrix_norm_1_to_2(const Matrix& s, const Vector& m) {
  const Vector col = (s.cwiseAbs2().transpose() * m).cwiseSqrt();
  return col.cwiseQuotient(m).maxCoeff();
}

double matrix_norm_inf_to_inf(const Matrix& s) { return s.cwiseAbs().rowwise().sum().maxCoeff(); }

double matrix_norm_1_to_1(const Matrix& s, const Vector& m) {
  const Vector col = s.cwiseAbs().transpose() * m;
  return col.cwiseQuotient(m).maxCoeff();
}

double matrix_norm_2_to_2(const Matrix& s, const Vector& m) {
  const Vector w = m.cwiseSqrt();
  const Matrix g = w.asDiagonal() * s * w.cwiseInverse().asDiagonal();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(g.transpose() * g, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
}

Matrix m_adjoint(const Matrix& s, const Vector& m) {
  return m.cwiseInverse().asDiagonal() * s.transpose() * m.asDiagonal();
}

SemigroupEvaluator::SemigroupEvaluator(const AssembledSystem& sys, Orientation orientation,
                                       EvaluatorOptions options)
    : mass_(sys.M), alpha_(sys.alpha), orientation_(orientation), cache_(std::make_unique<Cache>()) {
  if (sys.size() > options.dense_cap) {
    throw Error("semigroup: " + std::to_string(sys.size()) + " unknowns exceed the dense cap of " +
                std::to_string(options.dense_cap) +
                "; coarsen the mesh or use implicit_euler_apply");
  }
  if (!(mass_.minCoeff() > 0.0)) throw Error("semigroup: lumped mass must be positive");
  const SparseMatrix& form = orientation == Orientation::Primal ? sys.FormAtilde : sys.FormAtilde_adj;
  generator_ = mass_.cwiseInverse().asDiagonal() * Matrix(form);
}

std::shared_ptr<const Matrix> SemigroupEvaluator::auxiliary(double t) const {
  if (!(t >= 0.0)) throw Error("semigroup: negative time " + std::to_string(t));
  {
    std::lock_guard lock(cache_->mutex);
    auto it = cache_->entries.find(t);
    if (it != cache_->entries.end()) return it->second;
  }
  auto s = std::make_shared<const Matrix>(t == 0.0 ? Matrix::Identity(size(), size())
                                                   : expm(-t * generator_));
  std::lock_guard lock(cache_->mutex);
  auto [it, inserted] = cache_->entries.emplace(t, std::move(s));
  return it->second;
}

Matrix SemigroupEvaluator::semigroup(double t, bool shifted) const {
  const auto s = auxiliary(t);
  return shifted ? Matrix(std::exp(t * alpha_) * *s) : *s;
}

FieldVector SemigroupEvaluator::apply(double t, const FieldVector& u, bool shifted) const {
  if (u.size() != size()) throw Error("semigroup: vector size mismatch");
  const auto s = auxiliary(t);
  FieldVector out = *s * u;
  if (shifted) out *= std::exp(t * alpha_);
  return out;
}

double SemigroupEvaluator::norm_2_to_inf(double t, bool shifted) const {
  const double scale = shifted ? std::exp(t * alpha_) : 1.0;
  return scale * matrix_norm_2_to_inf(*auxiliary(t), mass_);
}

double SemigroupEvaluator::norm_1_to_2(double t, bool shifted) const {
  const auto s = auxiliary(t);
  const double direct = matrix_norm_1_to_2(*s, mass_);
  const double dual = matrix_norm_2_to_inf(m_adjoint(*s, mass_), mass_);
  if (std::abs(direct - dual) > 1e-10 * std::max(direct, dual)) {
    throw Error("semigroup: L1->L2 norm disagrees with the L2->Linf norm of the adjoint");
  }
  const double scale = shifted ? std::exp(t * alpha_) : 1.0;
  return scale * direct;
}

double SemigroupEvaluator::norm_inf_to_inf(double t, bool shifted) const {
  const double scale = shifted ? std::exp(t * alpha_) : 1.0;
  return scale * matrix_norm_inf_to_inf(*auxiliary(t));
}

double SemigroupEvaluator::norm_1_to_1(double t, bool shifted) const {
  const double scale = shifted ? std::exp(t * alpha_) : 1.0;
  return scale * matrix_norm_1_to_1(*auxiliary(t), mass_);
}

double SemigroupEvaluator::norm_2_to_2(double t, bool shifted) const {
  const double scale = shifted ? std::exp(t * alpha_) : 1.0;
  return scale * matrix_norm_2_to_2(*auxiliary(t), mass_);
}

double SemigroupEvaluator::min_entry(double t, bool shifted) const {
  const double scale = shifted ? std::exp(t * alpha_) : 1.0;
  return scale * auxiliary(t)->minCoeff();
}

Matrix SemigroupEvaluator::resolvent(double lambda) const {
  if (!(lambda > 0.0)) throw Error("semigroup: resolvent needs lambda > 0");
  Matrix shifted = generator_;
  shifted.diagonal().array() += lambda;
  return lambda * shifted.partialPivLu().inverse();
}

void SemigroupEvaluator::prefetch(std::span<const double> times, int threads) const {
  threads = std::max(1, threads);
  if (threads == 1 || times.size() < 2) {
    for (double t : times) (void)auxiliary(t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < times.size(); k = next++) (void)auxiliary(times[k]);
    });
  }
  for (auto& th : pool) th.join();
}

FieldVector implicit_euler_apply(const AssembledSystem& sys, double t, const FieldVector& u,
                                 int steps, Orientation orientation) {
  if (!(t >= 0.0)) throw Error("implicit_euler_apply: negative time");
  if (steps < 1) throw Error("implicit_euler_apply: need at least one step");
  const double dt = t / steps;
  const SparseMatrix& form = orientation == Orientation::Primal ? sys.FormAtilde : sys.FormAtilde_adj;
  SparseMatrix lhs = dt * form;
  for (Index i = 0; i < sys.size(); ++i) lhs.coeffRef(i, i) += sys.M[i];
  lhs.makeCompressed();
  Eigen::SparseLU<SparseMatrix> lu;
  lu.compute(lhs);
  if (lu.info() != Eigen::Success) throw Error("implicit_euler_apply: factorisation failed");
  FieldVector v = u;
  for (int k = 0; k < steps; ++k) {
    const FieldVector rhs = sys.M.cwiseProduct(v);
    v = lu.solve(rhs);
  }
  return v;
}

int thread_count_from_env() {
  const char* env = std::getenv("NASHLAB_THREADS");
  if (env == nullptr) return 1;
  const int n = std::atoi(env);
  return n > 0 ? n : 1;
}

}  // namespace nashlab
