// Command-line front end: run, analyze, presets.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "mrfm/config_io.hpp"
#include "mrfm/errors.hpp"
#include "mrfm/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Cantilever / two-spin measurement simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "integrate one or more configs and write run directories");
  std::vector<std::string> configs;
  std::string output_dir;
  unsigned jobs = 1;
  mrfm::RunFlags flags;
  run->add_option("-c,--config", configs, "config file (repeatable)")->required();
  run->add_flag("--dry-run", flags.dry_run, "validate the config and exit without writing");
  run->add_flag("--check-oracle", flags.check_oracle,
                "also run the dense reference propagator and print the L2 gap");
  run->add_option("-j,--jobs", jobs, "configs to run concurrently")
      ->check(CLI::PositiveNumber);
  run->add_option("-o,--output-dir", output_dir, "override output_dir from the config");

  auto* analyze = app.add_subcommand("analyze", "recompute the summary from a run directory or snapshot");
  std::string target;
  analyze->add_option("target", target, "run directory or snapshot_<tau>.csv")->required();

  auto* presets = app.add_subcommand("presets", "print a built-in config");
  std::string preset_name = "paper";
  presets->add_option("name", preset_name, "paper, toy or coherent");

  CLI11_PARSE(app, argc, argv);

  if (*run) {
    if (!output_dir.empty()) flags.output_dir = output_dir;
    std::vector<std::filesystem::path> paths(configs.begin(), configs.end());
    return mrfm::run_files(paths, flags, jobs, std::cout, std::cerr);
  }
  if (*analyze) return mrfm::analyze(target, std::cout, std::cerr);
  try {
    std::cout << mrfm::format_config(mrfm::preset(preset_name));
    return mrfm::kExitOk;
  } catch (const mrfm::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return mrfm::kExitFailure;
  }
}
