#pragma once

#include "nashlab/assembly.hpp"
#include "nashlab/report_io.hpp"
#include "nashlab/scenario.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nashlab {

struct RunOptions {
  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> seed;
  std::ostream* log = nullptr;  // warnings and progress
  bool write_files = true;
};

struct CheckOutcome {
  std::string name;
  CheckStatus status = CheckStatus::Fail;
  std::string note;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<TimeSeriesRow> series;
};

struct RunResult {
  std::string output_dir;
  std::vector<CheckOutcome> checks;
  std::vector<std::string> warnings;
  ReportDocument summary;
  ReportDocument manifest;
  int exit_code = 0;
};

/// Hypothesis-gated and discretization-limited checks do not fail a run.
bool is_failure(CheckStatus status);

/// mesh -> coefficients -> assembly -> admissibility gate -> checks, then the
/// summary, per-check CSV files and the manifest. Exit code 0 iff no check failed.
RunResult run_scenario(const Scenario& scenario, const RunOptions& options = {});

struct CompareRow {
  std::string key;
  std::string a;
  std::string b;
  double relative_difference = 0.0;
};

/// Rows whose values differ (numbers: relative difference above 1e-6).
/// Throws on a schema mismatch (different schema tag, check set or keys).
std::vector<CompareRow> compare_manifests(const ReportDocument& a, const ReportDocument& b);

void write_compare_table(std::ostream& out, const std::vector<CompareRow>& rows);

inline constexpr const char* kManifestSchema = "nashlab-manifest/1";

}  // namespace nashlab
