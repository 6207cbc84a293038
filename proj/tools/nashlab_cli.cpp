#include "nashlab/runner.hpp"
#include "nashlab/scenario.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"nashlab: finite-element checks for heat semigroups with nonlocal Robin boundary operators"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string output_dir;
  std::uint64_t seed = 0;
  auto* run = app.add_subcommand("run", "Run the checks listed in a scenario file");
  run->add_option("scenario", scenario_path, "Scenario file")->required();
  auto* out_opt = run->add_option("--output-dir", output_dir, "Directory for summary, CSV and manifest");
  auto* seed_opt = run->add_option("--seed", seed, "Override the scenario seed");

  std::string manifest_a, manifest_b;
  auto* compare = app.add_subcommand("compare", "Compare two run manifests");
  compare->add_option("manifest_a", manifest_a, "First manifest")->required();
  compare->add_option("manifest_b", manifest_b, "Second manifest")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      const nashlab::Scenario scenario = nashlab::load_scenario(scenario_path);
      nashlab::RunOptions options;
      if (*out_opt) options.output_dir = output_dir;
      if (*seed_opt) options.seed = seed;
      options.log = &std::cerr;
      const nashlab::RunResult result = nashlab::run_scenario(scenario, options);
      for (const auto& check : result.checks) {
        std::cout << check.name << ": " << nashlab::to_string(check.status);
        if (!check.note.empty()) std::cout << " (" << check.note << ")";
        std::cout << '\n';
      }
      std::cout << "reports written to " << result.output_dir << '\n';
      return result.exit_code;
    }
    const auto a = nashlab::ReportDocument::load(manifest_a);
    const auto b = nashlab::ReportDocument::load(manifest_b);
    const auto rows = nashlab::compare_manifests(a, b);
    nashlab::write_compare_table(std::cout, rows);
    return rows.empty() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
