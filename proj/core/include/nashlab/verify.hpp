#pragma once

#include "nashlab/assembly.hpp"
#include "nashlab/coefficients.hpp"
#include "nashlab/mesh.hpp"
#include "nashlab/semigroup.hpp"
#include "nashlab/types.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace nashlab {

/// Nodal interpolants of cos(k1 pi x/L1) cos(k2 pi y/L2) cos(k3 pi z/L3) over
/// the bounding box, nonzero multi-indices ordered by |k|^2 then
/// lexicographically.
std::vector<FieldVector> cosine_modes(const Mesh& mesh, int count);

// ---------------------------------------------------------------- Nash

struct NashReport {
  CheckStatus status = CheckStatus::Fail;
  int dim = 0;
  int samples = 0;
  std::uint64_t seed = 0;
  double max_ratio = 0.0;
  double implied_constant = 0.0;
  bool gradient_only_violation = false;
  bool out_of_hypothesis = false;  // dim <= 2 run under override
  std::vector<double> ratios;      // per evaluated sample, in sample order
};

/// H1 form of Nash: |u|_2^{2+4/d} <= C |u|_1^{4/d} |u|_H1^2, sampled on the
/// constant, the first 10 cosine modes and random nodal vectors. The
/// gradient-only form is evaluated on the constant.
NashReport check_nash(const Mesh& mesh, const AssembledSystem& sys, int samples,
                      std::uint64_t seed, bool allow_low_dim = false);

double nash_ratio(const AssembledSystem& sys, const FieldVector& u);

// ---------------------------------------------------- L-infinity criterion

struct ContractivityReport {
  CheckStatus status = CheckStatus::Fail;
  int samples = 0;
  std::uint64_t seed = 0;
  double min_plus = 0.0;   // min normalised value with |Bbar|_inf + Bbar
  double min_minus = 0.0;  // min normalised value with |Bbar|_inf - Bbar
  double tolerance = 1e-9;
};

/// Form matrix K + Gamma^T Mb op Gamma + alpha M for another boundary operator.
SparseMatrix form_with_boundary(const AssembledSystem& sys, const BoundaryOperatorSpec& op);

/// Re a~(w, z) with w = (1 ^ |u|) sign u and z = (|u| - 1)^+ sign u, for the
/// forms with |Bbar|_inf +/- Bbar, normalised by max(|F|_1, |F|_inf)|w||z|.
ContractivityReport check_ouhabaz_contractivity_criterion(const Mesh& mesh,
                                                          const AssembledSystem& sys,
                                                          const BoundaryOperatorSpec& spec,
                                                          const Admissibility& adm, int samples,
                                                          std::uint64_t seed);

/// Value of Re a~(w, z) for a single threshold split of u.
double truncation_form_value(const SparseMatrix& form, const FieldVector& u);

// ------------------------------------------------------------ positivity

struct PositivityReport {
  CheckStatus status = CheckStatus::Fail;
  std::vector<double> times;
  std::vector<double> min_entries;
  double min_entry = 0.0;
  bool m_matrix = false;  // off-diagonals of the generator are nonpositive
};

/// Smallest entry of e^{-tP} per time; below -1e-9 fails, or is reported as
/// discretization-limited when the generator is not an M-matrix.
PositivityReport check_positivity(const SemigroupEvaluator& evaluator,
                                  std::span<const double> times);

bool has_nonpositive_offdiagonal(const Matrix& m);

// ------------------------------------------------------------ domination

struct DominationReport {
  CheckStatus status = CheckStatus::Fail;
  std::vector<double> times;
  std::vector<double> violation_per_time;
  double max_violation = 0.0;  // max over t, u of max_i (|S u| - T|u|)^+ / |u|_inf
  double form_min = 0.0;       // min of Re a(u,v) - b(|u|,|v|), normalised
  int samples = 0;
  int form_samples = 0;
  std::uint64_t seed = 0;
  double tolerance = 1e-8;
};

/// |S(t) u| <= T(t)|u| on random signed samples, and the form-level criterion
/// Re a(u, v) >= b(|u|, |v|) on pairs with u_i v_i >= 0.
DominationReport check_domination(const SemigroupEvaluator& dominated,
                                  const SemigroupEvaluator& dominating,
                                  const AssembledSystem& dominated_sys,
                                  const AssembledSystem& dominating_sys,
                                  std::span<const double> times, int samples, std::uint64_t seed,
                                  int form_samples = 100);

// ------------------------------------------------------ ultracontractivity

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<bool> window;
  int points = 0;
};

/// Least-squares fit of log values against log t on the resolved points where
/// the detector curve is still decaying: local slope <= -threshold. This drops
/// both the constant-mode plateau and late exponential growth.
DecayFit fit_decay(std::span<const double> times, std::span<const double> values,
                   std::span<const double> plateau_curve, const std::vector<bool>& resolved,
                   double threshold = 0.05);

struct UltracontractivityReport {
  CheckStatus status = CheckStatus::Fail;
  std::vector<double> times;
  std::vector<bool> resolved;
  std::vector<double> norms;      // |e^{-tL}|_{2->inf}
  std::vector<double> g;          // norms * e^{-t alpha}
  std::vector<double> local_slopes;
  std::vector<bool> window;
  double fitted_slope = 0.0;
  double fitted_C = 0.0;
  double mu = 0.0;
  double max_bound_ratio = 0.0;   // max over window of g / (C t^slope)
  double slope_low = -0.90;
  double slope_high = -0.60;
};

/// Slope acceptance window is -d/4 +/- 0.15.
UltracontractivityReport fit_ultracontractivity(const SemigroupEvaluator& evaluator,
                                                const TimeGrid& grid, int dim);

/// Local slope of log values against log t by centred differences.
std::vector<double> local_log_slopes(std::span<const double> times, std::span<const double> values);

// ---------------------------------------------------- eventual positivity

struct EventualPositivityReport {
  CheckStatus status = CheckStatus::Fail;
  bool hypothesis_ok = false;
  double sym_min_eigenvalue = 0.0;  // of sym(Bw + Bw^T)
  double ones_defect = 0.0;         // |B 1|_inf
  double delta = 0.0;
  double t0 = 0.0;
  bool found = false;
  std::vector<double> times;        // ascending
  std::vector<double> min_ratio;    // min over samples of min_i (S u)_i / int u
  double final_ratio = 0.0;
  int samples = 0;
  std::uint64_t seed = 0;
};

/// e^{-tL} u >= delta int u for t >= t0 on nonnegative samples (random and
/// single-vertex bumps). delta is half the smallest ratio at the last time.
EventualPositivityReport check_eventual_positivity(const AssembledSystem& sys,
                                                   const BoundaryOperatorSpec& spec,
                                                   std::span<const double> times, int samples,
                                                   std::uint64_t seed);

/// Physical semigroup e^{-t M^{-1} FormA}.
Matrix physical_semigroup(const AssembledSystem& sys, double t);

// ------------------------------------------------------ energy decay, L1->L2

struct EnergyDecayReport {
  CheckStatus status = CheckStatus::Fail;
  double max_excess = 0.0;  // max of (finite difference + 2|v|_H1^2) / scale
  int samples = 0;
  std::uint64_t seed = 0;
};

/// d/dt |S*(t)u|_2^2 <= -2 |S*(t)u|_H1^2 by centred differences.
EnergyDecayReport check_energy_decay(const SemigroupEvaluator& adjoint,
                                     const AssembledSystem& sys, std::span<const double> times,
                                     int samples, std::uint64_t seed);

struct SmoothingBoundReport {
  CheckStatus status = CheckStatus::Fail;
  double constant = 0.0;      // (d C / 4)^{d/4}
  double max_ratio = 0.0;     // sampled |S* u|_2 / (constant t^{-d/4} |u|_1)
  double worst_case_ratio = 0.0;  // same with the exact L1 -> L2 norm
  int samples = 0;
  std::uint64_t seed = 0;
};

/// |S*(t) u|_2 <= (d C/4)^{d/4} t^{-d/4} |u|_1 on the given times.
SmoothingBoundReport check_smoothing_bound(const SemigroupEvaluator& adjoint,
                                           const AssembledSystem& sys, double nash_constant,
                                           std::span<const double> times, int samples,
                                           std::uint64_t seed);

// ------------------------------------------------------ semigroup identities

struct SemigroupPropertyReport {
  CheckStatus status = CheckStatus::Fail;
  double identity_defect = 0.0;
  double law_defect = 0.0;       // relative, max over sampled (t, s)
  double max_l2_norm = 0.0;      // max_t |S~(t)|_{2->2}
  double max_resolvent_norm = 0.0;
  double adjoint_pairing_defect = 0.0;
};

/// S~(0) = I, S~(t+s) = S~(t)S~(s), L2 contraction, resolvent contraction
/// for lambda in {0.1, 1, 10}, and <S u, v>_M = <u, S* v>_M.
SemigroupPropertyReport check_semigroup_properties(const SemigroupEvaluator& primal,
                                                   const SemigroupEvaluator& adjoint,
                                                   std::span<const double> times, bool accretive,
                                                   std::uint64_t seed);

}  // namespace nashlab
