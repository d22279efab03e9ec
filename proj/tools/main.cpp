#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "socialfilter/errors.hpp"
#include "socialfilter/experiment.hpp"
#include "socialfilter/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"SocialFilter experiment runner"};
  app.set_version_flag("--version", socialfilter::kVersion);
  app.require_subcommand(1);

  std::string spec_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  unsigned jobs = 1;
  auto* run = app.add_subcommand("run", "Execute an experiment spec (one CSV per run + manifest)");
  run->add_option("--spec", spec_path, "Experiment spec file (JSON)")->required();
  run->add_option("--set", overrides, "Override a spec value, e.g. base.view_size=250");
  run->add_option("--out", out_dir, "Output directory (defaults to the spec's output_dir)");
  run->add_option("--jobs", jobs, "Parallel runs")->check(CLI::PositiveNumber);

  std::string summarize_dir;
  auto* summ = app.add_subcommand("summarize", "Aggregate an output directory into summary.csv");
  summ->add_option("dir", summarize_dir, "Directory holding run CSVs and manifest.json")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      nlohmann::json spec_json = socialfilter::ExperimentSpec::load_file(spec_path).to_json();
      for (const auto& assignment : overrides) {
        socialfilter::apply_override(spec_json, assignment);
      }
      const auto spec = socialfilter::ExperimentSpec::from_json(spec_json);
      const auto records = socialfilter::run_experiment(spec, out_dir, jobs);
      std::cout << records.size() << " run(s) written to "
                << (out_dir.empty() ? spec.output_dir : out_dir) << "\n";
    } else if (summ->parsed()) {
      const auto rows = socialfilter::summarize(summarize_dir);
      std::cout << "summary.csv written with " << rows.size() << " row(s)\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
