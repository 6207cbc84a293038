#pragma once

#include "nashlab/coefficients.hpp"
#include "nashlab/mesh.hpp"
#include "nashlab/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nashlab {

struct DomainSpec {
  std::string shape = "box";  // box | lshape
  int dim = 3;
  std::vector<double> extents;  // box only; default unit lengths
  std::vector<int> divisions;   // box: one per axis (or one broadcast); lshape: one
};

struct CoefficientSpec {
  std::string kind = "isotropic";  // isotropic | diagonal | matrix
  double value = 1.0;              // isotropic
  std::vector<double> values;      // diagonal, length d
  std::vector<double> entries;     // matrix, row-major d x d
  // Optional second region: cells whose centroid coordinate along
  // split_axis exceeds split_at use entries_upper instead.
  std::vector<double> entries_upper;
  int split_axis = 0;
  double split_at = 0.5;
  std::optional<double> declared_alpha;
};

struct BoundarySpec {
  std::string kind = "zero";    // zero | multiplication | kernel | dense
  std::vector<double> beta;     // multiplication: one value (broadcast) or one per boundary vertex
  std::string kernel;           // kernel selector
  double scale = 1.0;           // kernel scale
  std::vector<double> dense;    // dense, row-major nb x nb
  std::string dense_file;       // dense, whitespace-separated file (relative to the scenario)
  std::string dominating = "shifted";  // shifted: |Bbar|_inf - Bbar; negated: -Bbar
};

struct TimeGridSpec {
  double t_max = 1.0;
  double ratio = 0.70710678118654752440;
  int count = 24;
  double long_t_max = 50.0;  // eventual positivity
};

inline const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names{
      "accretivity", "continuity", "nash", "contractivity",
      "positivity",  "domination", "ultracontractivity", "eventual_positivity"};
  return names;
}

struct Scenario {
  std::string name = "scenario";
  std::string base_dir = ".";  // directory of the scenario file
  DomainSpec domain;
  CoefficientSpec coefficient;
  BoundarySpec boundary;
  std::vector<std::string> checks;
  TimeGridSpec time_grid;
  int samples = 50;
  int nash_samples = 200;
  std::uint64_t seed = 1;
  std::string output_dir;
  bool allow_low_dim_nash = false;
  bool export_matrices = false;
  Index dense_cap = 6000;
};

/// Flat "key = value" file with [section] headers; '#' starts a comment.
/// Errors carry "origin:line:".
Scenario parse_scenario(std::istream& in, const std::string& origin);
Scenario load_scenario(const std::string& path);

/// Objects described by a scenario.
Mesh build_mesh(const DomainSpec& spec);
CoefficientField build_coefficient(const Mesh& mesh, const CoefficientSpec& spec);
BoundaryOperatorSpec build_boundary(const Mesh& mesh, const BoundarySpec& spec,
                                    const std::string& base_dir);

}  // namespace nashlab
