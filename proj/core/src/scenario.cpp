#include "nashlab/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>

namespace nashlab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

class LineError {
 public:
  LineError(const std::string& origin, int line) : prefix_(origin + ":" + std::to_string(line) + ": ") {}
  [[noreturn]] void fail(const std::string& msg) const { throw Error(prefix_ + msg); }

  double number(const std::string& s) const {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) fail("not a number: '" + s + "'");
    return v;
  }
  long long integer(const std::string& s) const {
    long long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) fail("not an integer: '" + s + "'");
    return v;
  }
  std::vector<double> numbers(const std::string& s) const {
    std::vector<double> out;
    for (const auto& item : split_list(s)) out.push_back(number(item));
    if (out.empty()) fail("empty list");
    return out;
  }
  std::vector<int> integers(const std::string& s) const {
    std::vector<int> out;
    for (const auto& item : split_list(s)) out.push_back(static_cast<int>(integer(item)));
    if (out.empty()) fail("empty list");
    return out;
  }
  bool boolean(const std::string& s) const {
    if (s == "true" || s == "yes" || s == "1") return true;
    if (s == "false" || s == "no" || s == "0") return false;
    fail("not a boolean: '" + s + "'");
  }

 private:
  std::string prefix_;
};

Matrix read_matrix_file(const std::string& path, Index n) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open matrix file " + path);
  std::vector<double> values;
  double v;
  while (in >> v) values.push_back(v);
  if (!in.eof()) throw Error("matrix file " + path + ": non-numeric content");
  if (static_cast<Index>(values.size()) != n * n) {
    throw Error("matrix file " + path + ": expected " + std::to_string(n * n) + " entries, found " +
                std::to_string(values.size()));
  }
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) m(i, j) = values[static_cast<std::size_t>(i * n + j)];
  }
  return m;
}

Matrix square_from(const std::vector<double>& v, int d, const std::string& what) {
  if (static_cast<int>(v.size()) != d * d) {
    throw Error(what + ": expected " + std::to_string(d * d) + " entries, got " +
                std::to_string(v.size()));
  }
  Matrix m(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) m(i, j) = v[static_cast<std::size_t>(i * d + j)];
  }
  return m;
}

}  // namespace

Scenario parse_scenario(std::istream& in, const std::string& origin) {
  Scenario sc;
  std::string section;
  std::string line;
  int number = 0;
  bool checks_seen = false;

  using Handler = std::function<void(const LineError&, const std::string&)>;
  const std::map<std::string, std::map<std::string, Handler>> handlers{
      {"",
       {{"name", [&](const LineError&, const std::string& v) { sc.name = v; }}}},
      {"domain",
       {{"shape",
         [&](const LineError& e, const std::string& v) {
           if (v != "box" && v != "lshape") e.fail("shape must be box or lshape");
           sc.domain.shape = v;
         }},
        {"dim", [&](const LineError& e, const std::string& v) { sc.domain.dim = static_cast<int>(e.integer(v)); }},
        {"extents", [&](const LineError& e, const std::string& v) { sc.domain.extents = e.numbers(v); }},
        {"divisions", [&](const LineError& e, const std::string& v) { sc.domain.divisions = e.integers(v); }}}},
      {"coefficient",
       {{"kind",
         [&](const LineError& e, const std::string& v) {
           if (v != "isotropic" && v != "diagonal" && v != "matrix") {
             e.fail("coefficient kind must be isotropic, diagonal or matrix");
           }
           sc.coefficient.kind = v;
         }},
        {"value", [&](const LineError& e, const std::string& v) { sc.coefficient.value = e.number(v); }},
        {"values", [&](const LineError& e, const std::string& v) { sc.coefficient.values = e.numbers(v); }},
        {"entries", [&](const LineError& e, const std::string& v) { sc.coefficient.entries = e.numbers(v); }},
        {"entries_upper",
         [&](const LineError& e, const std::string& v) { sc.coefficient.entries_upper = e.numbers(v); }},
        {"split_axis",
         [&](const LineError& e, const std::string& v) { sc.coefficient.split_axis = static_cast<int>(e.integer(v)); }},
        {"split_at", [&](const LineError& e, const std::string& v) { sc.coefficient.split_at = e.number(v); }},
        {"alpha", [&](const LineError& e, const std::string& v) { sc.coefficient.declared_alpha = e.number(v); }}}},
      {"boundary",
       {{"kind",
         [&](const LineError& e, const std::string& v) {
           if (v != "zero" && v != "multiplication" && v != "kernel" && v != "dense") {
             e.fail("boundary kind must be zero, multiplication, kernel or dense");
           }
           sc.boundary.kind = v;
         }},
        {"beta", [&](const LineError& e, const std::string& v) { sc.boundary.beta = e.numbers(v); }},
        {"kernel", [&](const LineError&, const std::string& v) { sc.boundary.kernel = v; }},
        {"scale", [&](const LineError& e, const std::string& v) { sc.boundary.scale = e.number(v); }},
        {"matrix", [&](const LineError& e, const std::string& v) { sc.boundary.dense = e.numbers(v); }},
        {"matrix_file", [&](const LineError&, const std::string& v) { sc.boundary.dense_file = v; }},
        {"dominating",
         [&](const LineError& e, const std::string& v) {
           if (v != "shifted" && v != "negated") e.fail("dominating must be shifted or negated");
           sc.boundary.dominating = v;
         }}}},
      {"checks",
       {{"enabled",
         [&](const LineError& e, const std::string& v) {
           checks_seen = true;
           sc.checks = split_list(v);
           for (const auto& c : sc.checks) {
             const auto& k = known_checks();
             if (std::find(k.begin(), k.end(), c) == k.end()) e.fail("unknown check '" + c + "'");
           }
         }}}},
      {"time_grid",
       {{"t_max", [&](const LineError& e, const std::string& v) { sc.time_grid.t_max = e.number(v); }},
        {"ratio", [&](const LineError& e, const std::string& v) { sc.time_grid.ratio = e.number(v); }},
        {"count", [&](const LineError& e, const std::string& v) { sc.time_grid.count = static_cast<int>(e.integer(v)); }},
        {"long_t_max", [&](const LineError& e, const std::string& v) { sc.time_grid.long_t_max = e.number(v); }}}},
      {"run",
       {{"samples", [&](const LineError& e, const std::string& v) { sc.samples = static_cast<int>(e.integer(v)); }},
        {"nash_samples",
         [&](const LineError& e, const std::string& v) { sc.nash_samples = static_cast<int>(e.integer(v)); }},
        {"seed",
         [&](const LineError& e, const std::string& v) {
           const long long s = e.integer(v);
           if (s < 0) e.fail("seed must be nonnegative");
           sc.seed = static_cast<std::uint64_t>(s);
         }},
        {"output_dir", [&](const LineError&, const std::string& v) { sc.output_dir = v; }},
        {"allow_low_dim_nash",
         [&](const LineError& e, const std::string& v) { sc.allow_low_dim_nash = e.boolean(v); }},
        {"export_matrices", [&](const LineError& e, const std::string& v) { sc.export_matrices = e.boolean(v); }},
        {"dense_cap", [&](const LineError& e, const std::string& v) { sc.dense_cap = e.integer(v); }}}},
  };

  while (std::getline(in, line)) {
    ++number;
    const LineError err(origin, number);
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') err.fail("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!handlers.count(section) || section.empty()) err.fail("unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) err.fail("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) err.fail("missing value for '" + key + "'");
    const auto& table = handlers.at(section);
    auto it = table.find(key);
    if (it == table.end()) {
      err.fail("unknown key '" + key + "'" + (section.empty() ? "" : " in [" + section + "]"));
    }
    it->second(err, value);
  }

  const LineError end(origin, number);
  if (!checks_seen || sc.checks.empty()) end.fail("no checks enabled ([checks] enabled = ...)");
  if (sc.samples < 1) end.fail("samples must be positive");
  if (sc.boundary.kind == "multiplication" && sc.boundary.beta.empty()) end.fail("multiplication boundary needs beta");
  if (sc.boundary.kind == "kernel" && sc.boundary.kernel.empty()) end.fail("kernel boundary needs a kernel selector");
  if (sc.boundary.kind == "dense" && sc.boundary.dense.empty() && sc.boundary.dense_file.empty()) {
    end.fail("dense boundary needs matrix or matrix_file");
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scenario file " + path);
  Scenario sc = parse_scenario(in, path);
  const auto parent = std::filesystem::path(path).parent_path();
  sc.base_dir = parent.empty() ? "." : parent.string();
  if (!sc.boundary.dense_file.empty()) {
    const auto file = std::filesystem::path(sc.base_dir) / sc.boundary.dense_file;
    if (!std::filesystem::exists(file)) throw Error(path + ": matrix_file not found: " + file.string());
  }
  return sc;
}

Mesh build_mesh(const DomainSpec& spec) {
  if (spec.shape == "lshape") {
    if (spec.divisions.size() != 1) throw Error("lshape: give a single divisions value");
    return build_lshape_mesh(spec.dim, spec.divisions[0]);
  }
  if (spec.dim < 1 || spec.dim > 3) throw Error("box: dim must be 1, 2 or 3");
  const auto d = static_cast<std::size_t>(spec.dim);
  std::vector<double> extents = spec.extents.empty() ? std::vector<double>(d, 1.0) : spec.extents;
  std::vector<int> divisions = spec.divisions;
  if (divisions.size() == 1) divisions.assign(d, divisions[0]);
  if (extents.size() != d || divisions.size() != d) {
    throw Error("box: extents and divisions need " + std::to_string(d) + " values");
  }
  return build_box_mesh(extents, divisions);
}

CoefficientField build_coefficient(const Mesh& mesh, const CoefficientSpec& spec) {
  const int d = mesh.dim;
  if (spec.kind == "isotropic") return isotropic_coefficient(mesh, spec.value);
  if (spec.kind == "diagonal") {
    if (static_cast<int>(spec.values.size()) != d) {
      throw Error("diagonal coefficient: expected " + std::to_string(d) + " values");
    }
    Matrix a = Matrix::Zero(d, d);
    for (int k = 0; k < d; ++k) a(k, k) = spec.values[static_cast<std::size_t>(k)];
    return uniform_coefficient(mesh, a);
  }
  const Matrix lower = square_from(spec.entries, d, "matrix coefficient");
  if (spec.entries_upper.empty()) return uniform_coefficient(mesh, lower);
  const Matrix upper = square_from(spec.entries_upper, d, "matrix coefficient (upper region)");
  if (spec.split_axis < 0 || spec.split_axis >= d) throw Error("split_axis out of range");
  std::vector<Matrix> cells;
  cells.reserve(mesh.cells.size());
  for (const auto& c : mesh.cells) {
    double centroid = 0.0;
    for (int k = 0; k <= d; ++k) centroid += mesh.vertices[c[k]][spec.split_axis];
    centroid /= d + 1;
    cells.push_back(centroid > spec.split_at ? upper : lower);
  }
  return make_coefficient_field(d, std::move(cells));
}

BoundaryOperatorSpec build_boundary(const Mesh& mesh, const BoundarySpec& spec,
                                    const std::string& base_dir) {
  const Index nb = mesh.num_boundary_vertices();
  if (spec.kind == "zero") return build_boundary_operator(BoundaryRepresentation::zero(), mesh);
  if (spec.kind == "multiplication") {
    Vector beta(nb);
    if (spec.beta.size() == 1) {
      beta.setConstant(spec.beta[0]);
    } else if (static_cast<Index>(spec.beta.size()) == nb) {
      for (Index i = 0; i < nb; ++i) beta[i] = spec.beta[static_cast<std::size_t>(i)];
    } else {
      throw Error("multiplication boundary: beta needs 1 or " + std::to_string(nb) + " values");
    }
    return build_boundary_operator(BoundaryRepresentation::multiplication(std::move(beta)), mesh);
  }
  if (spec.kind == "kernel") {
    return build_boundary_operator(
        BoundaryRepresentation::integral_kernel(kernel_from_selector(mesh, spec.kernel, spec.scale)), mesh);
  }
  Matrix dense;
  if (!spec.dense_file.empty()) {
    dense = read_matrix_file((std::filesystem::path(base_dir) / spec.dense_file).string(), nb);
  } else {
    if (static_cast<Index>(spec.dense.size()) != nb * nb) {
      throw Error("dense boundary: expected " + std::to_string(nb * nb) + " entries");
    }
    dense.resize(nb, nb);
    for (Index i = 0; i < nb; ++i) {
      for (Index j = 0; j < nb; ++j) dense(i, j) = spec.dense[static_cast<std::size_t>(i * nb + j)];
    }
  }
  return build_boundary_operator(BoundaryRepresentation::dense_matrix(std::move(dense)), mesh);
}

}  // namespace nashlab
