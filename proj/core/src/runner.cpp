#include "nashlab/runner.hpp"

#include "nashlab/semigroup.hpp"
#include "nashlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <ostream>
#include <set>

namespace nashlab {

namespace {

std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (std::size_t k = 0; k < items.size(); ++k) out += (k ? sep : "") + items[k];
  return out;
}

// Lazily built objects shared between checks.
struct Context {
  const Scenario& scenario;
  std::uint64_t seed;
  Mesh mesh;
  CoefficientField field;
  BoundaryOperatorSpec spec;
  AssembledSystem sys;
  Admissibility adm;
  TimeGrid grid;
  std::vector<std::string>& warnings;
  std::ostream* log;

  std::unique_ptr<SemigroupEvaluator> primal_ptr;
  std::unique_ptr<SemigroupEvaluator> adjoint_ptr;

  void warn(const std::string& msg) {
    warnings.push_back(msg);
    if (log) *log << "warning: " << msg << '\n';
  }

  EvaluatorOptions evaluator_options() const { return {scenario.dense_cap}; }

  const SemigroupEvaluator& primal() {
    if (!primal_ptr) primal_ptr = std::make_unique<SemigroupEvaluator>(sys, Orientation::Primal, evaluator_options());
    return *primal_ptr;
  }
  const SemigroupEvaluator& adjoint() {
    if (!adjoint_ptr) adjoint_ptr = std::make_unique<SemigroupEvaluator>(sys, Orientation::Adjoint, evaluator_options());
    return *adjoint_ptr;
  }

  AssembledSystem system_for(const BoundaryOperatorSpec& other) const {
    return assemble_system(mesh, field, other, sys.alpha);
  }
};

std::vector<TimeSeriesRow> series_of(const SemigroupEvaluator& ev, std::span<const double> times) {
  std::vector<TimeSeriesRow> rows;
  for (double t : times) {
    rows.push_back({t, ev.norm_2_to_inf(t, true), ev.norm_1_to_2(t, true), ev.norm_inf_to_inf(t, true),
                    ev.min_entry(t, true)});
  }
  return rows;
}

CheckOutcome named(const std::string& name) {
  CheckOutcome o;
  o.name = name;
  return o;
}

CheckOutcome gated(const std::string& name, const std::string& why) {
  CheckOutcome o = named(name);
  o.status = CheckStatus::HypothesisUnmet;
  o.note = why;
  return o;
}

std::string admissibility_note(const Context& c) {
  return "1 + (|Bbar|_inf + |Bbar|_2) tau = " + format_number(c.sys.alpha - c.adm.margin) +
         " exceeds alpha = " + format_number(c.sys.alpha);
}

CheckOutcome run_accretivity(Context& c) {
  CheckOutcome o = named("accretivity");
  const AccretivityReport r = check_accretivity(c.sys, c.adm);
  o.metrics = {{"lambda_min", r.lambda_min}, {"threshold", r.threshold}};
  if (r.status == CheckStatus::HypothesisUnmet) {
    o.status = r.status;
    o.note = "1 + |B|_2 tau exceeds alpha";
    return o;
  }
  const SemigroupPropertyReport p =
      check_semigroup_properties(c.primal(), c.adjoint(), c.grid.times, true, c.seed);
  o.metrics.insert(o.metrics.end(), {{"identity_defect", p.identity_defect},
                                     {"law_defect", p.law_defect},
                                     {"max_l2_norm", p.max_l2_norm},
                                     {"max_resolvent_norm", p.max_resolvent_norm},
                                     {"adjoint_pairing_defect", p.adjoint_pairing_defect}});
  o.status = r.status == CheckStatus::Pass && p.status == CheckStatus::Pass ? CheckStatus::Pass
                                                                           : CheckStatus::Fail;
  return o;
}

CheckOutcome run_continuity(Context& c) {
  CheckOutcome o = named("continuity");
  const ContinuityReport r = check_continuity(c.sys, c.field, c.spec, 200, c.seed);
  const double slack = boundary_cost_slack(c.sys, c.spec, c.field.alpha, 100, c.seed);
  o.metrics = {{"max_ratio", r.max_ratio}, {"samples", r.samples}, {"boundary_cost_slack", slack}};
  const double scale = c.sys.trace_norm_sq * std::max(1.0, c.spec.norm2);
  const bool slack_ok = slack >= -1e-10 * scale;
  o.status = r.status == CheckStatus::Pass && slack_ok ? CheckStatus::Pass : CheckStatus::Fail;
  return o;
}

CheckOutcome run_nash(Context& c) {
  if (c.mesh.dim <= 2 && !c.scenario.allow_low_dim_nash) {
    return gated("nash", "Nash inequality is only claimed for d > 2");
  }
  CheckOutcome o = named("nash");
  const NashReport r = check_nash(c.mesh, c.sys, c.scenario.nash_samples, c.seed, c.scenario.allow_low_dim_nash);
  o.metrics = {{"implied_constant", r.implied_constant},
               {"samples", r.samples},
               {"gradient_only_violation", r.gradient_only_violation ? 1.0 : 0.0},
               {"out_of_hypothesis", r.out_of_hypothesis ? 1.0 : 0.0}};
  bool ok = r.status == CheckStatus::Pass;
  if (c.adm.accretive) {
    const SemigroupEvaluator& adj = c.adjoint();
    std::vector<double> n12, g;
    adj.prefetch(c.grid.times, thread_count_from_env());
    for (double t : c.grid.times) {
      n12.push_back(adj.norm_1_to_2(t, true));
      g.push_back(adj.norm_1_to_2(t, false));
    }
    std::vector<double> window;
    try {
      const DecayFit fit = fit_decay(c.grid.times, g, n12, c.grid.resolved);
      for (std::size_t k = 0; k < c.grid.times.size(); ++k) {
        if (fit.window[k]) window.push_back(c.grid.times[k]);
      }
    } catch (const Error&) {
      window = c.grid.resolved_times();
    }
    std::vector<double> energy_times;
    const std::size_t stride = std::max<std::size_t>(1, window.size() / 5);
    for (std::size_t k = 0; k < window.size() && energy_times.size() < 5; k += stride) {
      energy_times.push_back(window[k]);
    }
    const EnergyDecayReport e = check_energy_decay(adj, c.sys, energy_times, 20, c.seed);
    const SmoothingBoundReport s =
        check_smoothing_bound(adj, c.sys, r.implied_constant, window, c.scenario.samples, c.seed);
    o.metrics.insert(o.metrics.end(), {{"energy_max_excess", e.max_excess},
                                       {"smoothing_constant", s.constant},
                                       {"smoothing_max_ratio", s.max_ratio},
                                       {"smoothing_worst_case_ratio", s.worst_case_ratio}});
    ok = ok && e.status == CheckStatus::Pass && s.status == CheckStatus::Pass;
  } else {
    o.note = "decay steps skipped: 1 + |B|_2 tau exceeds alpha";
  }
  o.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
  if (r.gradient_only_violation) {
    o.note += std::string(o.note.empty() ? "" : "; ") + "gradient-only form violated by constants (recorded)";
  }
  return o;
}

CheckOutcome run_contractivity(Context& c) {
  if (!c.adm.admissible) return gated("contractivity", admissibility_note(c));
  CheckOutcome o = named("contractivity");
  const ContractivityReport r =
      check_ouhabaz_contractivity_criterion(c.mesh, c.sys, c.spec, c.adm, 100, c.seed);
  const SemigroupEvaluator& ev = c.primal();
  const SemigroupEvaluator& adj = c.adjoint();
  ev.prefetch(c.grid.times, thread_count_from_env());
  adj.prefetch(c.grid.times, thread_count_from_env());
  double linf_excess = -HUGE_VAL, l1_excess = -HUGE_VAL;
  for (double t : c.grid.times) {
    const double bound = std::exp(t * c.sys.alpha);
    linf_excess = std::max(linf_excess, ev.norm_inf_to_inf(t, true) / bound - 1.0);
    l1_excess = std::max(l1_excess, adj.norm_1_to_1(t, true) / bound - 1.0);
  }
  o.metrics = {{"criterion_min_plus", r.min_plus},
               {"criterion_min_minus", r.min_minus},
               {"linf_excess", linf_excess},
               {"adjoint_l1_excess", l1_excess}};
  o.series = series_of(ev, c.grid.times);
  const bool ok = r.status == CheckStatus::Pass && linf_excess <= 1e-8 && l1_excess <= 1e-8;
  o.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
  return o;
}

CheckOutcome run_positivity(Context& c) {
  if (!c.adm.admissible) return gated("positivity", admissibility_note(c));
  CheckOutcome o = named("positivity");
  const AssembledSystem bar_sys = c.system_for(shifted_bar_operator(c.spec, -1));
  const SemigroupEvaluator ev(bar_sys, Orientation::Primal, c.evaluator_options());
  const PositivityReport r = check_positivity(ev, c.grid.times);
  o.metrics = {{"min_entry", r.min_entry}, {"m_matrix", r.m_matrix ? 1.0 : 0.0}};
  o.series = series_of(ev, c.grid.times);
  o.status = r.status;
  if (r.status == CheckStatus::DiscretizationLimited) {
    o.note = "generator is not an M-matrix; P1 positivity is not expected";
  }
  return o;
}

CheckOutcome run_domination(Context& c) {
  if (!c.adm.admissible) return gated("domination", admissibility_note(c));
  CheckOutcome o = named("domination");
  const bool negated = c.scenario.boundary.dominating == "negated";
  const BoundaryOperatorSpec dom = negated ? negated_bar_operator(c.spec) : shifted_bar_operator(c.spec, -1);
  const AssembledSystem dom_sys = c.system_for(dom);
  const SemigroupEvaluator dom_ev(dom_sys, Orientation::Primal, c.evaluator_options());
  const DominationReport r =
      check_domination(c.primal(), dom_ev, c.sys, dom_sys, c.grid.times, c.scenario.samples, c.seed);
  o.metrics = {{"max_violation", r.max_violation}, {"form_min", r.form_min}, {"samples", r.samples}};
  if (!negated) {
    const AssembledSystem neg_sys = c.system_for(negated_bar_operator(c.spec));
    const SemigroupEvaluator neg_ev(neg_sys, Orientation::Primal, c.evaluator_options());
    const DominationReport n =
        check_domination(c.primal(), neg_ev, c.sys, neg_sys, c.grid.times, c.scenario.samples, c.seed);
    o.metrics.insert(o.metrics.end(), {{"negated_bar_max_violation", n.max_violation},
                                       {"negated_bar_form_min", n.form_min}});
  }
  o.series = series_of(c.primal(), c.grid.times);
  o.status = r.status;
  return o;
}

CheckOutcome run_ultracontractivity(Context& c) {
  if (!c.adm.admissible) return gated("ultracontractivity", admissibility_note(c));
  CheckOutcome o = named("ultracontractivity");
  const SemigroupEvaluator& ev = c.primal();
  const SemigroupEvaluator& adj = c.adjoint();
  const UltracontractivityReport r = fit_ultracontractivity(ev, c.grid, c.mesh.dim);

  adj.prefetch(c.grid.times, thread_count_from_env());
  double duality = 0.0;
  std::vector<double> adj_g, adj_n;
  for (double t : c.grid.times) {
    const double a = ev.norm_2_to_inf(t);
    const double b = adj.norm_1_to_2(t);
    duality = std::max(duality, std::abs(a - b) / a);
    adj_g.push_back(b);
    adj_n.push_back(adj.norm_1_to_2(t, true));
  }
  const DecayFit adj_fit = fit_decay(c.grid.times, adj_g, adj_n, c.grid.resolved);

  o.metrics = {{"fitted_slope", r.fitted_slope},
               {"fitted_C", r.fitted_C},
               {"mu", r.mu},
               {"max_bound_ratio", r.max_bound_ratio},
               {"window_points", static_cast<double>(std::count(r.window.begin(), r.window.end(), true))},
               {"duality_defect", duality},
               {"adjoint_fit_slope_difference", std::abs(adj_fit.slope - r.fitted_slope)}};
  o.series = series_of(ev, c.grid.times);
  const bool ok = r.status == CheckStatus::Pass && duality <= 1e-10 &&
                  std::abs(adj_fit.slope - r.fitted_slope) <= 1e-9;
  o.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
  return o;
}

CheckOutcome run_eventual_positivity(Context& c) {
  if (!c.adm.admissible) return gated("eventual_positivity", admissibility_note(c));
  CheckOutcome o = named("eventual_positivity");
  const TimeGrid long_grid = geometric_time_grid(c.scenario.time_grid.long_t_max, c.scenario.time_grid.ratio,
                                                 c.scenario.time_grid.count, c.mesh.grid_spacing);
  const EventualPositivityReport r =
      check_eventual_positivity(c.sys, c.spec, long_grid.times, c.scenario.samples, c.seed);
  o.metrics = {{"sym_min_eigenvalue", r.sym_min_eigenvalue}, {"ones_defect", r.ones_defect}};
  if (!r.hypothesis_ok) {
    o.status = CheckStatus::HypothesisUnmet;
    o.note = "needs B + B* >= 0 and B 1 = 0";
    return o;
  }
  o.metrics.insert(o.metrics.end(), {{"delta", r.delta},
                                     {"t0", r.t0},
                                     {"final_ratio", r.final_ratio},
                                     {"limit_ratio_error", std::abs(r.final_ratio - 1.0 / c.mesh.volume())}});
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    const Matrix s = physical_semigroup(c.sys, r.times[k]);
    o.series.push_back({r.times[k], matrix_norm_2_to_inf(s, c.sys.M), matrix_norm_1_to_2(s, c.sys.M),
                        matrix_norm_inf_to_inf(s), s.minCoeff()});
  }
  o.status = r.status;
  return o;
}

void write_matrices(const Context& c, const std::filesystem::path& dir) {
  auto dump = [&](const std::string& name, const auto& m) {
    std::ofstream out(dir / (name + ".coo"), std::ios::binary);
    write_coordinate(m, out);
  };
  dump("K", c.sys.K);
  dump("K_id", c.sys.K_id);
  dump("M", Matrix(c.sys.M.asDiagonal()));
  dump("M_consistent", c.sys.M_consistent);
  dump("Mb", Matrix(c.sys.Mb.asDiagonal()));
  dump("Gamma", c.sys.Gamma);
  dump("Bw", c.sys.Bw);
  dump("FormA", c.sys.FormA);
  dump("FormAtilde", c.sys.FormAtilde);
  dump("FormA_adj", c.sys.FormA_adj);
  dump("FormAtilde_adj", c.sys.FormAtilde_adj);
  dump("H1", c.sys.H1);
  std::ofstream mesh_out(dir / "mesh.txt", std::ios::binary);
  write_mesh_text(c.mesh, mesh_out);
}

}  // namespace

bool is_failure(CheckStatus status) { return status == CheckStatus::Fail; }

RunResult run_scenario(const Scenario& scenario, const RunOptions& options) {
  RunResult result;
  const std::uint64_t seed = options.seed.value_or(scenario.seed);

  Mesh mesh = build_mesh(scenario.domain);
  CoefficientField field = build_coefficient(mesh, scenario.coefficient);
  BoundaryOperatorSpec spec = build_boundary(mesh, scenario.boundary, scenario.base_dir);
  AssembledSystem sys = assemble_system(mesh, field, spec, field.alpha);
  const Admissibility adm = check_admissibility(spec, field.alpha, sys.trace_norm_sq);
  const TimeGrid grid = geometric_time_grid(scenario.time_grid.t_max, scenario.time_grid.ratio,
                                            scenario.time_grid.count, mesh.grid_spacing);

  Context c{scenario, seed, std::move(mesh), std::move(field), std::move(spec), std::move(sys),
            adm, grid, result.warnings, options.log, nullptr, nullptr};

  if (scenario.coefficient.declared_alpha &&
      std::abs(*scenario.coefficient.declared_alpha - c.field.alpha) > 1e-12 * std::abs(c.field.alpha)) {
    c.warn("declared alpha " + format_number(*scenario.coefficient.declared_alpha) +
           " differs from the certified value " + format_number(c.field.alpha) + "; using the certified value");
  }
  if (grid.adjusted) {
    c.warn("time grid would reach below h^2 = " + format_number(grid.resolution_floor) + "; ratio raised from " +
           format_number(grid.requested_ratio) + " to " + format_number(grid.ratio));
  }

  for (const auto& name : scenario.checks) {
    if (options.log) *options.log << "running " << name << '\n';
    CheckOutcome o;
    if (name == "accretivity") o = run_accretivity(c);
    else if (name == "continuity") o = run_continuity(c);
    else if (name == "nash") o = run_nash(c);
    else if (name == "contractivity") o = run_contractivity(c);
    else if (name == "positivity") o = run_positivity(c);
    else if (name == "domination") o = run_domination(c);
    else if (name == "ultracontractivity") o = run_ultracontractivity(c);
    else if (name == "eventual_positivity") o = run_eventual_positivity(c);
    else throw Error("unknown check '" + name + "'");
    result.checks.push_back(std::move(o));
  }

  bool failed = false;
  for (const auto& o : result.checks) failed = failed || is_failure(o.status);
  result.exit_code = failed ? 1 : 0;

  // Manifest: deterministic scalar fields only.
  ReportDocument& m = result.manifest;
  m.set("schema", std::string(kManifestSchema));
  m.set("scenario", scenario.name);
  m.set("checks", join(scenario.checks, ","));
  m.set("seed", std::to_string(seed));
  m.set("vertices", static_cast<int>(c.mesh.num_vertices()));
  m.set("alpha", c.field.alpha);
  m.set("trace_norm_sq", c.sys.trace_norm_sq);
  m.set("admissible", adm.admissible);
  m.set("admissibility_margin", adm.margin);
  m.set("accretivity_margin", adm.accretive_margin);
  for (const auto& o : result.checks) {
    m.set(o.name + ".status", to_string(o.status));
    for (const auto& [k, v] : o.metrics) m.set(o.name + "." + k, v);
  }
  m.set("overall", std::string(failed ? "fail" : "pass"));

  ReportDocument& s = result.summary;
  s.set("scenario", scenario.name);
  s.set("dim", c.mesh.dim);
  s.set("shape", scenario.domain.shape);
  s.set("vertices", static_cast<int>(c.mesh.num_vertices()));
  s.set("cells", static_cast<int>(c.mesh.num_cells()));
  s.set("boundary_vertices", static_cast<int>(c.mesh.num_boundary_vertices()));
  s.set("grid_spacing", c.mesh.grid_spacing);
  s.set("volume", c.mesh.volume());
  s.set("boundary_measure", c.mesh.boundary_measure());
  s.set("alpha", c.field.alpha);
  s.set("coefficient_sup_norm", c.field.sup_norm);
  s.set("boundary_kind", to_string(c.spec.op.kind));
  s.set("norm2", c.spec.norm2);
  s.set("norm_inf", c.spec.norm_inf);
  s.set("norm2_bar", c.spec.norm2_bar);
  s.set("norm_inf_bar", c.spec.norm_inf_bar);
  s.set("trace_norm_sq", c.sys.trace_norm_sq);
  s.set("admissible", adm.admissible);
  s.set("admissibility_margin", adm.margin);
  s.set("accretive", adm.accretive);
  s.set("accretivity_margin", adm.accretive_margin);
  s.set("seed", std::to_string(seed));
  s.set("time_grid", std::span<const double>(grid.times));
  s.set("time_grid_ratio", grid.ratio);
  s.set("time_grid_adjusted", grid.adjusted);
  for (std::size_t k = 0; k < result.warnings.size(); ++k) {
    s.set("warning." + std::to_string(k), result.warnings[k]);
  }
  for (const auto& o : result.checks) {
    s.set(o.name + ".status", to_string(o.status));
    if (!o.note.empty()) s.set(o.name + ".note", o.note);
    for (const auto& [k, v] : o.metrics) s.set(o.name + "." + k, v);
  }
  s.set("overall", std::string(failed ? "fail" : "pass"));

  if (options.write_files) {
    std::string dir = options.output_dir.value_or(scenario.output_dir);
    if (dir.empty()) dir = "nashlab-out/" + scenario.name;
    std::filesystem::create_directories(dir);
    result.output_dir = dir;
    const std::filesystem::path root(dir);
    result.summary.save((root / "summary.txt").string());
    result.manifest.save((root / "manifest.txt").string());
    for (const auto& o : result.checks) {
      if (!o.series.empty()) save_time_series_csv((root / (o.name + ".csv")).string(), o.series);
    }
    if (scenario.export_matrices) write_matrices(c, root);
  }
  return result;
}

std::vector<CompareRow> compare_manifests(const ReportDocument& a, const ReportDocument& b) {
  if (!a.contains("schema") || !b.contains("schema") || a.get("schema") != b.get("schema")) {
    throw Error("schema mismatch: manifests carry different schema tags");
  }
  if (a.get("schema") != kManifestSchema) throw Error("schema mismatch: unsupported schema " + a.get("schema"));
  if (a.get("checks") != b.get("checks")) {
    throw Error("schema mismatch: check sets differ (" + a.get("checks") + " vs " + b.get("checks") + ")");
  }
  std::set<std::string> keys_a, keys_b;
  for (const auto& [k, v] : a.entries()) keys_a.insert(k);
  for (const auto& [k, v] : b.entries()) keys_b.insert(k);
  if (keys_a != keys_b) throw Error("schema mismatch: manifests have different fields");

  std::vector<CompareRow> rows;
  for (const auto& [key, va] : a.entries()) {
    if (key == "schema" || key == "scenario") continue;
    const std::string& vb = b.get(key);
    if (va == vb) continue;
    CompareRow row{key, va, vb, 0.0};
    bool numeric = true;
    double x = 0.0, y = 0.0;
    try {
      x = a.get_number(key);
      y = b.get_number(key);
    } catch (const Error&) {
      numeric = false;
    }
    if (numeric) {
      const double scale = std::max({std::abs(x), std::abs(y), 1e-300});
      row.relative_difference = std::abs(x - y) / scale;
      if (row.relative_difference <= 1e-6) continue;
    } else {
      row.relative_difference = HUGE_VAL;
    }
    rows.push_back(row);
  }
  return rows;
}

void write_compare_table(std::ostream& out, const std::vector<CompareRow>& rows) {
  if (rows.empty()) return;
  std::size_t w = 5;
  for (const auto& r : rows) w = std::max(w, r.key.size());
  out << std::left << std::setw(static_cast<int>(w)) << "field" << "  " << std::setw(24) << "a" << "  "
      << std::setw(24) << "b" << "  relative_difference\n";
  for (const auto& r : rows) {
    out << std::left << std::setw(static_cast<int>(w)) << r.key << "  " << std::setw(24) << r.a << "  "
        << std::setw(24) << r.b << "  "
        << (std::isinf(r.relative_difference) ? std::string("differs") : format_number(r.relative_difference))
        << '\n';
  }
}

}  // namespace nashlab
