#include "nashlab/runner.hpp"
#include "nashlab/scenario.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace nashlab;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string output;
};

Result run_cli(const std::string& args) {
  const std::string cmd = std::string(NASHLAB_CLI_PATH) + " " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe)) r.output += buf.data();
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  fs::path dir;

  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir = fs::temp_directory_path() / (std::string("nashlab_cli_") + info->name());
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = dir / name;
    std::ofstream(p) << text;
    return p;
  }

  static std::string small_cube(int divisions, const std::string& checks) {
    return "name = small\n[domain]\ndim = 3\ndivisions = " + std::to_string(divisions) +
           "\n[coefficient]\nvalue = 2\n[boundary]\nkind = multiplication\nbeta = -0.05\n[checks]\nenabled = " +
           checks + "\n";
  }
};

}  // namespace

TEST_F(CliTest, NeumannAccretivityExample) {
  const Result r = run_cli("run " + std::string(NASHLAB_EXAMPLES_DIR) +
                           "/cube_accretivity_only.scn --output-dir " + (dir / "out").string());
  EXPECT_EQ(r.code, 0) << r.output;
  const ReportDocument m = ReportDocument::load((dir / "out" / "manifest.txt").string());
  EXPECT_EQ(m.get("accretivity.status"), "pass");
  EXPECT_TRUE(fs::exists(dir / "out" / "summary.txt"));
}

TEST_F(CliTest, InadmissibleScenarioIsGatedNotFailed) {
  const Result r = run_cli("run " + std::string(NASHLAB_EXAMPLES_DIR) +
                           "/cube_inadmissible.scn --output-dir " + (dir / "out").string());
  EXPECT_EQ(r.code, 0) << r.output;
  const ReportDocument m = ReportDocument::load((dir / "out" / "manifest.txt").string());
  EXPECT_EQ(m.get("ultracontractivity.status"), "hypothesis_unmet");
  EXPECT_EQ(m.get("contractivity.status"), "hypothesis_unmet");
  EXPECT_NE(r.output.find("exceeds alpha"), std::string::npos);
}

TEST_F(CliTest, MalformedScenarioReportsLine) {
  const fs::path p = write("bad.scn", "[domain]\ndim = 3\ndivisions = six\n[checks]\nenabled = accretivity\n");
  const Result r = run_cli("run " + p.string());
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.output.find("bad.scn:3:"), std::string::npos) << r.output;
}

TEST_F(CliTest, MissingFileAndUnknownSubcommand) {
  EXPECT_NE(run_cli("run " + (dir / "missing.scn").string()).code, 0);
  EXPECT_NE(run_cli("frobnicate").code, 0);
}

TEST_F(CliTest, DeterministicOutputs) {
  const fs::path p = write("s.scn", small_cube(3, "positivity, contractivity, domination"));
  ASSERT_EQ(run_cli("run " + p.string() + " --output-dir " + (dir / "a").string()).code, 1);
  ASSERT_EQ(run_cli("run " + p.string() + " --output-dir " + (dir / "b").string()).code, 1);
  for (const char* f : {"manifest.txt", "summary.txt", "positivity.csv", "contractivity.csv", "domination.csv"}) {
    ASSERT_TRUE(fs::exists(dir / "a" / f)) << f;
    EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
  }
  const std::string csv = slurp(dir / "a" / "positivity.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,norm_2_to_inf,norm_1_to_2,norm_inf_to_inf,min_entry");
}

TEST_F(CliTest, SeedOverrideChangesSampledFields) {
  const fs::path p = write("s.scn", small_cube(3, "contractivity"));
  ASSERT_EQ(run_cli("run " + p.string() + " --output-dir " + (dir / "a").string()).code, 0);
  ASSERT_EQ(run_cli("run " + p.string() + " --seed 7 --output-dir " + (dir / "b").string()).code, 0);
  const ReportDocument b = ReportDocument::load((dir / "b" / "manifest.txt").string());
  EXPECT_EQ(b.get("seed"), "7");
}

TEST_F(CliTest, CompareIdenticalIsEmpty) {
  const fs::path p = write("s.scn", small_cube(3, "contractivity"));
  ASSERT_EQ(run_cli("run " + p.string() + " --output-dir " + (dir / "a").string()).code, 0);
  const std::string m = (dir / "a" / "manifest.txt").string();
  const Result r = run_cli("compare " + m + " " + m);
  EXPECT_EQ(r.code, 0) << r.output;
}

TEST_F(CliTest, CompareResolutionsEmitsSlopeRow) {
  const fs::path p4 = write("s4.scn", small_cube(4, "ultracontractivity"));
  const fs::path p5 = write("s5.scn", small_cube(5, "ultracontractivity"));
  run_cli("run " + p4.string() + " --output-dir " + (dir / "a").string());
  run_cli("run " + p5.string() + " --output-dir " + (dir / "b").string());
  const Result r = run_cli("compare " + (dir / "a" / "manifest.txt").string() + " " +
                           (dir / "b" / "manifest.txt").string());
  EXPECT_EQ(r.code, 1) << r.output;
  EXPECT_NE(r.output.find("ultracontractivity.fitted_slope"), std::string::npos) << r.output;
}

TEST_F(CliTest, CompareMismatchedChecksIsSchemaError) {
  const fs::path p = write("s.scn", small_cube(3, "contractivity"));
  const fs::path q = write("q.scn", small_cube(3, "positivity"));
  run_cli("run " + p.string() + " --output-dir " + (dir / "a").string());
  run_cli("run " + q.string() + " --output-dir " + (dir / "b").string());
  const Result r = run_cli("compare " + (dir / "a" / "manifest.txt").string() + " " +
                           (dir / "b" / "manifest.txt").string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("schema mismatch"), std::string::npos) << r.output;
}

// ------------------------------------------------------- library level

TEST(ScenarioParse, FullFile) {
  std::istringstream in(
      "name = demo  # trailing comment\n"
      "[domain]\nshape = box\ndim = 2\nextents = 2, 1\ndivisions = 4, 2\n"
      "[coefficient]\nkind = diagonal\nvalues = 1, 3\n"
      "[boundary]\nkind = kernel\nkernel = gaussian(0.5)\nscale = 0.1\ndominating = negated\n"
      "[checks]\nenabled = accretivity, nash\n"
      "[time_grid]\nt_max = 2\nratio = 0.5\ncount = 10\nlong_t_max = 20\n"
      "[run]\nsamples = 7\nseed = 42\nallow_low_dim_nash = true\ndense_cap = 100\n");
  const Scenario s = parse_scenario(in, "mem");
  EXPECT_EQ(s.name, "demo");
  EXPECT_EQ(s.domain.dim, 2);
  EXPECT_EQ(s.domain.divisions, (std::vector<int>{4, 2}));
  EXPECT_EQ(s.coefficient.values, (std::vector<double>{1, 3}));
  EXPECT_EQ(s.boundary.kernel, "gaussian(0.5)");
  EXPECT_EQ(s.boundary.dominating, "negated");
  EXPECT_EQ(s.checks, (std::vector<std::string>{"accretivity", "nash"}));
  EXPECT_DOUBLE_EQ(s.time_grid.ratio, 0.5);
  EXPECT_EQ(s.time_grid.count, 10);
  EXPECT_EQ(s.samples, 7);
  EXPECT_EQ(s.seed, 42u);
  EXPECT_TRUE(s.allow_low_dim_nash);
  EXPECT_EQ(s.dense_cap, 100);
  const Mesh m = build_mesh(s.domain);
  EXPECT_NEAR(m.volume(), 2.0, 1e-14);
  EXPECT_NEAR(build_coefficient(m, s.coefficient).alpha, 1.0, 1e-15);
}

TEST(ScenarioParse, ErrorsCarryLineNumbers) {
  const std::pair<const char*, const char*> cases[] = {
      {"[domain]\ndim = 3\nbogus = 1\n[checks]\nenabled = nash\n", "mem:3:"},
      {"[nowhere]\n", "mem:1:"},
      {"[checks]\nenabled = nash, telepathy\n", "mem:2:"},
      {"[domain]\ndim 3\n", "mem:2:"},
      {"[domain]\ndim = 3\n", "no checks enabled"},
      {"[boundary]\nkind = multiplication\n[checks]\nenabled = nash\n", "needs beta"},
  };
  for (const auto& [text, needle] : cases) {
    std::istringstream in(text);
    try {
      parse_scenario(in, "mem");
      ADD_FAILURE() << "no error for: " << text;
    } catch (const Error& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  }
}

TEST(ScenarioBuild, BoundaryBroadcastAndPerVertex) {
  const std::vector<double> e{1, 1};
  const std::vector<int> d{2, 2};
  const Mesh m = build_box_mesh(e, d);
  BoundarySpec b;
  b.kind = "multiplication";
  b.beta = {0.3};
  EXPECT_DOUBLE_EQ(build_boundary(m, b, ".").matrix().diagonal().minCoeff(), 0.3);
  b.beta = {0.1, 0.2};
  EXPECT_THROW(build_boundary(m, b, "."), Error);
}

TEST(Manifest, RoundTripAndCompare) {
  ReportDocument a;
  a.set("schema", std::string(kManifestSchema));
  a.set("checks", std::string("nash"));
  a.set("nash.implied_constant", 1.0);
  a.set("nash.status", std::string("pass"));
  std::ostringstream out;
  a.write(out);
  std::istringstream in(out.str());
  const ReportDocument back = ReportDocument::parse(in, "mem");
  EXPECT_TRUE(compare_manifests(a, back).empty());

  ReportDocument b = back;
  b.set("nash.implied_constant", 1.0 + 1e-7);
  EXPECT_TRUE(compare_manifests(a, b).empty());
  b.set("nash.implied_constant", 1.1);
  const auto rows = compare_manifests(a, b);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].key, "nash.implied_constant");
  EXPECT_NEAR(rows[0].relative_difference, 0.1 / 1.1, 1e-12);

  ReportDocument c = back;
  c.set("checks", std::string("nash,positivity"));
  EXPECT_THROW(compare_manifests(a, c), Error);
}

TEST(Manifest, NumbersRoundTripExactly) {
  ReportDocument d;
  const double values[] = {0.1, 1.0 / 3.0, 6.161213211760698, -2.5e-300, 1e300};
  int k = 0;
  for (double v : values) d.set("v" + std::to_string(k++), v);
  k = 0;
  for (double v : values) EXPECT_EQ(d.get_number("v" + std::to_string(k++)), v);
  EXPECT_THROW((void)d.get("missing"), Error);
}
