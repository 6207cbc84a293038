#include "nashlab/verify.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace nashlab;

namespace {

Mesh box(std::vector<double> extents, std::vector<int> divisions) {
  return build_box_mesh(extents, divisions);
}

struct CubeCase {
  Mesh mesh;
  CoefficientField field;
  BoundaryOperatorSpec spec;
  AssembledSystem sys;
  Admissibility adm;
};

CubeCase robin_cube(int n, double a, double beta) {
  CubeCase s;
  s.mesh = box({1, 1, 1}, {n, n, n});
  s.field = isotropic_coefficient(s.mesh, a);
  s.spec = build_boundary_operator(
      beta == 0.0 ? BoundaryRepresentation::zero()
                  : BoundaryRepresentation::multiplication(Vector::Constant(s.mesh.num_boundary_vertices(), beta)),
      s.mesh);
  s.sys = assemble_system(s.mesh, s.field, s.spec, s.field.alpha);
  s.adm = check_admissibility(s.spec, s.field.alpha, s.sys.trace_norm_sq);
  return s;
}

}  // namespace

// ------------------------------------------------------------------ Nash

TEST(Nash, HoldsOnCubeAndFlagsGradientOnlyForm) {
  const CubeCase s = robin_cube(4, 1.0, 0.0);
  const NashReport r = check_nash(s.mesh, s.sys, 200, 1);
  EXPECT_EQ(r.status, CheckStatus::Pass);
  EXPECT_EQ(r.samples, 200);
  EXPECT_TRUE(r.gradient_only_violation);
  EXPECT_FALSE(r.out_of_hypothesis);
  // The constant on a unit-volume domain gives ratio exactly 1.
  EXPECT_NEAR(r.ratios.front(), 1.0, 1e-12);
  EXPECT_GE(r.implied_constant, 1.0 - 1e-12);
}

TEST(Nash, RatioIsScaleInvariant) {
  const CubeCase s = robin_cube(3, 1.0, 0.0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 10; ++trial) {
    Vector v(s.sys.size());
    for (Index i = 0; i < v.size(); ++i) v[i] = u(rng);
    const double c = 0.01 + 10.0 * trial;
    EXPECT_NEAR(nash_ratio(s.sys, c * v), nash_ratio(s.sys, v), 1e-12 * nash_ratio(s.sys, v));
  }
}

TEST(Nash, LowDimensionNeedsOverride) {
  const Mesh m = box({1, 1}, {4, 4});
  const AssembledSystem sys = assemble_system(m, isotropic_coefficient(m, 1.0),
                                              build_boundary_operator(BoundaryRepresentation::zero(), m), 1.0);
  EXPECT_THROW(check_nash(m, sys, 50, 1), Error);
  const NashReport r = check_nash(m, sys, 50, 1, true);
  EXPECT_TRUE(r.out_of_hypothesis);
}

TEST(CosineModes, OrderedAndNonConstant) {
  const Mesh m = box({1, 1, 1}, {4, 4, 4});
  const auto modes = cosine_modes(m, 10);
  ASSERT_EQ(modes.size(), 10u);
  const Vector w = m.vertex_volumes();
  for (const auto& v : modes) EXPECT_GT(v.maxCoeff() - v.minCoeff(), 1.0);
  // First three are the single-axis cos(pi x_k), which are mean free.
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(modes[static_cast<std::size_t>(k)].dot(w), 0.0, 1e-12);
}

// ------------------------------------------------ L-infinity criterion

TEST(Ouhabaz, TruncationValueVanishesInsideUnitBall) {
  const CubeCase s = robin_cube(3, 2.0, -0.05);
  Vector u = 0.9 * Vector::Random(s.sys.size());
  EXPECT_EQ(truncation_form_value(s.sys.FormAtilde, u), 0.0);
}

TEST(Ouhabaz, ConstantAboveThresholdForNeumann) {
  // u = 2: w = 1, z = 1, a~(w, z) = alpha |Omega|.
  const CubeCase s = robin_cube(3, 1.0, 0.0);
  const Vector u = Vector::Constant(s.sys.size(), 2.0);
  EXPECT_NEAR(truncation_form_value(s.sys.FormAtilde, u), s.sys.alpha * 1.0, 1e-12);
}

TEST(Ouhabaz, CriterionHoldsForAdmissibleRobin) {
  const CubeCase s = robin_cube(4, 2.0, -0.05);
  ASSERT_TRUE(s.adm.admissible);
  const ContractivityReport r = check_ouhabaz_contractivity_criterion(s.mesh, s.sys, s.spec, s.adm, 100, 1);
  EXPECT_EQ(r.status, CheckStatus::Pass);
  EXPECT_GE(r.min_plus, -r.tolerance);
  EXPECT_GE(r.min_minus, -r.tolerance);
}

TEST(Ouhabaz, FormWithBoundaryReproducesSystemForm) {
  const CubeCase s = robin_cube(3, 2.0, 0.1);
  EXPECT_LT(Matrix(form_with_boundary(s.sys, s.spec) - s.sys.FormAtilde).cwiseAbs().maxCoeff(), 1e-13);
}

// ------------------------------------------------------------ positivity

TEST(Positivity, NeumannGeneratorIsMMatrixAndSemigroupPositive) {
  const CubeCase s = robin_cube(3, 1.0, 0.0);
  const SemigroupEvaluator ev(s.sys);
  EXPECT_TRUE(has_nonpositive_offdiagonal(ev.generator()));
  const PositivityReport r = check_positivity(ev, std::vector<double>{0.01, 0.1, 1.0});
  EXPECT_EQ(r.status, CheckStatus::Pass);
  EXPECT_TRUE(r.m_matrix);
  EXPECT_GE(r.min_entry, -1e-14);
}

TEST(Positivity, OffDiagonalDetector) {
  Matrix m(2, 2);
  m << 1, -1, -0.5, 2;
  EXPECT_TRUE(has_nonpositive_offdiagonal(m));
  m(0, 1) = 1e-3;
  EXPECT_FALSE(has_nonpositive_offdiagonal(m));
}

// ------------------------------------------------------------ domination

TEST(Domination, NegatedBarDominates) {
  const CubeCase s = robin_cube(3, 3.0, -0.1);
  const BoundaryOperatorSpec nb = negated_bar_operator(s.spec);
  const AssembledSystem dom = assemble_system(s.mesh, s.field, nb, s.field.alpha);
  const SemigroupEvaluator a(s.sys), b(dom);
  const DominationReport r = check_domination(a, b, s.sys, dom, std::vector<double>{0.03, 0.3}, 20, 1);
  EXPECT_EQ(r.status, CheckStatus::Pass);
  EXPECT_LE(r.max_violation, 1e-12);
}

TEST(Domination, PositiveRobinDominatedByNeumann) {
  // beta >= 0: |e^{-tL_beta} u| <= e^{-tL_0} |u|, and the form criterion holds.
  const CubeCase s = robin_cube(3, 2.0, 0.1);
  const CubeCase n = robin_cube(3, 2.0, 0.0);
  const SemigroupEvaluator a(s.sys), b(n.sys);
  const DominationReport r = check_domination(a, b, s.sys, n.sys, std::vector<double>{0.03, 0.3}, 20, 2);
  EXPECT_EQ(r.status, CheckStatus::Pass);
  EXPECT_GE(r.form_min, -1e-12);
}

TEST(Domination, NegativeRobinNotDominatedByNeumannOnConstants) {
  const CubeCase s = robin_cube(3, 3.0, -0.1);
  const CubeCase n = robin_cube(3, 3.0, 0.0);
  const SemigroupEvaluator a(s.sys), b(n.sys);
  const Vector one = Vector::Ones(s.sys.size());
  EXPECT_GT((a.apply(0.5, one, false) - b.apply(0.5, one, false)).maxCoeff(), 1e-4);
  const DominationReport r = check_domination(a, b, s.sys, n.sys, std::vector<double>{0.5}, 10, 3);
  EXPECT_LT(r.form_min, 0.0);
  EXPECT_EQ(r.status, CheckStatus::Fail);
}

// ------------------------------------------------------ ultracontractivity

TEST(DecayFit, RecoversPowerLawExactly) {
  std::vector<double> t, v;
  for (int k = 0; k < 12; ++k) {
    t.push_back(std::pow(0.7, k));
    v.push_back(0.3 * std::pow(t.back(), -0.75));
  }
  const DecayFit f = fit_decay(t, v, v, std::vector<bool>(t.size(), true));
  EXPECT_NEAR(f.slope, -0.75, 1e-12);
  EXPECT_NEAR(std::exp(f.intercept), 0.3, 1e-12);
  EXPECT_EQ(f.points, 12);
}

TEST(DecayFit, ExcludesPlateauAndUnresolvedPoints) {
  std::vector<double> t, v;
  for (int k = 0; k < 30; ++k) {
    t.push_back(50.0 * std::pow(0.7, k));
    v.push_back(std::pow(t.back(), -0.75) + 1.0);
  }
  std::vector<bool> resolved(t.size(), true);
  resolved.back() = false;
  const DecayFit f = fit_decay(t, v, v, resolved);
  EXPECT_FALSE(f.window.front());  // plateau
  EXPECT_FALSE(f.window.back());   // unresolved
  const auto slopes = local_log_slopes(t, v);
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (f.window[k]) EXPECT_LE(slopes[k], -0.05);
  }
  EXPECT_LT(f.slope, -0.5);
}

TEST(DecayFit, TooFewPointsThrows) {
  const std::vector<double> t{1.0, 0.5, 0.25}, v{1.0, 1.0, 1.0};
  EXPECT_THROW(fit_decay(t, v, v, std::vector<bool>(3, true)), Error);
}

TEST(LocalSlopes, ExactForPowerLaws) {
  std::vector<double> t, v;
  for (int k = 0; k < 8; ++k) {
    t.push_back(std::pow(0.5, k));
    v.push_back(std::pow(t.back(), -1.5));
  }
  for (double s : local_log_slopes(t, v)) EXPECT_NEAR(s, -1.5, 1e-12);
}

TEST(Ultracontractivity, DualityAndSlopeOnSmallCube) {
  const CubeCase s = robin_cube(4, 1.0, 0.0);
  const SemigroupEvaluator ev(s.sys), adj(s.sys, Orientation::Adjoint);
  const TimeGrid grid = geometric_time_grid(1.0, kDefaultTimeRatio, 24, s.mesh.grid_spacing);
  const UltracontractivityReport r = fit_ultracontractivity(ev, grid, 3);
  EXPECT_LT(r.fitted_slope, -0.3);
  EXPECT_NEAR(r.mu, -4.0 * r.fitted_slope, 1e-15);
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    EXPECT_NEAR(r.g[k], r.norms[k] * std::exp(-r.times[k] * s.sys.alpha), 1e-12 * r.norms[k]);
    EXPECT_NEAR(ev.norm_2_to_inf(r.times[k], true), adj.norm_1_to_2(r.times[k], true), 1e-10 * r.norms[k]);
  }
}

// ---------------------------------------------------- eventual positivity

TEST(EventualPositivity, NeumannLimitIsInverseVolume) {
  const Mesh m = box({2, 1, 1}, {4, 2, 2});
  const CoefficientField f = isotropic_coefficient(m, 1.0);
  const BoundaryOperatorSpec spec = build_boundary_operator(BoundaryRepresentation::zero(), m);
  const AssembledSystem sys = assemble_system(m, f, spec, 1.0);
  const TimeGrid g = geometric_time_grid(50.0, kDefaultTimeRatio, 24, m.grid_spacing);
  const EventualPositivityReport r = check_eventual_positivity(sys, spec, g.times, 10, 1);
  EXPECT_EQ(r.status, CheckStatus::Pass);
  EXPECT_TRUE(r.hypothesis_ok);
  EXPECT_TRUE(r.found);
  EXPECT_GT(r.delta, 0.0);
  EXPECT_NEAR(r.final_ratio, 0.5, 1e-6);
}

TEST(EventualPositivity, HypothesisRejectsMultiplication) {
  const CubeCase s = robin_cube(2, 2.0, 0.1);
  const EventualPositivityReport r = check_eventual_positivity(s.sys, s.spec, std::vector<double>{1.0, 2.0}, 4, 1);
  EXPECT_FALSE(r.hypothesis_ok);  // B 1 != 0
  EXPECT_EQ(r.status, CheckStatus::HypothesisUnmet);
}

TEST(EventualPositivity, PhysicalSemigroupShift) {
  const CubeCase s = robin_cube(2, 2.0, 0.1);
  const SemigroupEvaluator ev(s.sys);
  EXPECT_TRUE(physical_semigroup(s.sys, 0.4).isApprox(ev.semigroup(0.4, true), 1e-12));
}

// ------------------------------------------------ decay, smoothing, laws

TEST(EnergyDecay, AdjointEnergyInequality) {
  const CubeCase s = robin_cube(3, 2.0, -0.05);
  const SemigroupEvaluator adj(s.sys, Orientation::Adjoint);
  const EnergyDecayReport r = check_energy_decay(adj, s.sys, std::vector<double>{0.05, 0.1, 0.3}, 10, 1);
  EXPECT_EQ(r.status, CheckStatus::Pass);
  EXPECT_LE(r.max_excess, 1e-6);
}

TEST(Smoothing, BoundHoldsOnNeumannCube) {
  const CubeCase s = robin_cube(4, 1.0, 0.0);
  const SemigroupEvaluator adj(s.sys, Orientation::Adjoint);
  const NashReport n = check_nash(s.mesh, s.sys, 200, 1);
  const SmoothingBoundReport r =
      check_smoothing_bound(adj, s.sys, n.implied_constant, std::vector<double>{0.07, 0.1, 0.2, 0.4}, 30, 1);
  EXPECT_EQ(r.status, CheckStatus::Pass);
  EXPECT_NEAR(r.constant, std::pow(3.0 * n.implied_constant / 4.0, 0.75), 1e-14);
  EXPECT_LE(r.max_ratio, r.worst_case_ratio + 1e-12);
  EXPECT_LE(r.worst_case_ratio, 1.0);
}

TEST(SemigroupProperties, AllIdentitiesHold) {
  const CubeCase s = robin_cube(3, 2.0, -0.05);
  const SemigroupEvaluator p(s.sys), a(s.sys, Orientation::Adjoint);
  const TimeGrid g = geometric_time_grid(1.0, kDefaultTimeRatio, 12, s.mesh.grid_spacing);
  const SemigroupPropertyReport r = check_semigroup_properties(p, a, g.times, s.adm.accretive, 1);
  EXPECT_EQ(r.status, CheckStatus::Pass);
  EXPECT_LE(r.identity_defect, 1e-15);
  EXPECT_LE(r.law_defect, 1e-10);
  EXPECT_LE(r.max_l2_norm, 1.0 + 1e-10);
  EXPECT_LE(r.max_resolvent_norm, 1.0 + 1e-10);
  EXPECT_LE(r.adjoint_pairing_defect, 1e-12);
}
