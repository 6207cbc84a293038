#pragma once

#include "nashlab/assembly.hpp"
#include "nashlab/types.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

namespace nashlab {

/// Geometric grid t_k = t_max * r^k, k = 0..count-1, in decreasing order.
/// When t_max * ratio^{count-1} would fall below h^2, the ratio is raised so
/// that the last point equals h^2 and `adjusted` is set.
struct TimeGrid {
  std::vector<double> times;
  std::vector<bool> resolved;
  double resolution_floor = 0.0;  // h^2
  double requested_ratio = 0.0;
  double ratio = 0.0;
  bool adjusted = false;

  [[nodiscard]] int unresolved_count() const;
  [[nodiscard]] std::vector<double> resolved_times() const;
};

/// Throws when t_max itself is below h^2.
TimeGrid geometric_time_grid(double t_max, double ratio, int count, double mesh_size);

/// Same grid without the resolution floor.
TimeGrid raw_time_grid(double t_max, double ratio, int count, double mesh_size);

inline constexpr double kDefaultTimeMax = 1.0;
inline constexpr double kDefaultTimeRatio = 0.70710678118654752440;  // 2^{-1/2}
inline constexpr int kDefaultTimeCount = 24;

enum class Orientation { Primal, Adjoint };

struct EvaluatorOptions {
  Index dense_cap = 6000;
};

// Norms of a dense operator S in the lumped geometry: |u|_2^2 = sum m_i u_i^2,
// |u|_1 = sum m_i |u_i|, |u|_inf = max |u_i|.
double matrix_norm_2_to_inf(const Matrix& s, const Vector& m);
double matrix_norm_1_to_2(const Matrix& s, const Vector& m);
double matrix_norm_inf_to_inf(const Matrix& s);
double matrix_norm_1_to_1(const Matrix& s, const Vector& m);
double matrix_norm_2_to_2(const Matrix& s, const Vector& m);
/// Adjoint in the M-weighted inner product: M^{-1} S^T M.
Matrix m_adjoint(const Matrix& s, const Vector& m);

/// Dense e^{-tP} for the discrete generator P = M^{-1} FormAtilde (or the
/// adjoint form), with a per-time cache. The physical semigroup is
/// e^{t alpha} e^{-tP}.
class SemigroupEvaluator {
 public:
  explicit SemigroupEvaluator(const AssembledSystem& sys,
                              Orientation orientation = Orientation::Primal,
                              EvaluatorOptions options = {});

  [[nodiscard]] const Matrix& generator() const { return generator_; }
  [[nodiscard]] const Vector& mass() const { return mass_; }
  [[nodiscard]] double alpha() const { return alpha_; }
  [[nodiscard]] Orientation orientation() const { return orientation_; }
  [[nodiscard]] Index size() const { return mass_.size(); }

  /// e^{-t L~}, cached.
  [[nodiscard]] std::shared_ptr<const Matrix> auxiliary(double t) const;
  /// e^{-t L~}, or e^{-t L} = e^{t alpha} e^{-t L~} when shifted.
  [[nodiscard]] Matrix semigroup(double t, bool shifted) const;

  [[nodiscard]] FieldVector apply(double t, const FieldVector& u, bool shifted) const;

  [[nodiscard]] double norm_2_to_inf(double t, bool shifted = false) const;
  /// Also checks it against the 2 -> inf norm of the M-adjoint matrix and
  /// throws when they differ by more than 1e-10 relative.
  [[nodiscard]] double norm_1_to_2(double t, bool shifted = false) const;
  [[nodiscard]] double norm_inf_to_inf(double t, bool shifted = false) const;
  [[nodiscard]] double norm_1_to_1(double t, bool shifted = false) const;
  [[nodiscard]] double norm_2_to_2(double t, bool shifted = false) const;
  [[nodiscard]] double min_entry(double t, bool shifted = false) const;

  /// lambda (lambda + P)^{-1}.
  [[nodiscard]] Matrix resolvent(double lambda) const;

  /// Fills the cache for the given times, spreading work over `threads`.
  void prefetch(std::span<const double> times, int threads = 1) const;

 private:
  struct Cache {
    std::mutex mutex;
    std::map<double, std::shared_ptr<const Matrix>> entries;
  };

  Matrix generator_;
  Vector mass_;
  double alpha_ = 0.0;
  Orientation orientation_ = Orientation::Primal;
  std::unique_ptr<Cache> cache_;
};

/// Implicit Euler propagation for systems above the dense cap.
FieldVector implicit_euler_apply(const AssembledSystem& sys, double t, const FieldVector& u,
                                 int steps, Orientation orientation = Orientation::Primal);

/// Worker count from NASHLAB_THREADS (default 1).
int thread_count_from_env();

}  // namespace nashlab
