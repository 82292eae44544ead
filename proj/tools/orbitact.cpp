// orbitact: periodic orbits of N-body-type problems by action minimisation.
//
//   orbitact solve  <config>  [--output-dir DIR]
//   orbitact ledger <config>  [--samples N] [--seed S] [--output-dir DIR]
//   orbitact export <orbit>   [--samples N] [--output FILE]
//
// ORBITACT_THREADS caps multistart worker threads (0 = auto).

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "orbitact/commands.hpp"
#include "orbitact/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Periodic solutions of N-body-type problems by action minimisation"};
  app.require_subcommand(1);

  std::string config_path;
  std::string orbit_path;
  std::string output_dir;
  std::string output_file;
  std::size_t ledger_samples = 1000;
  std::uint64_t ledger_seed = 0;
  int export_samples = 256;

  auto* solve = app.add_subcommand("solve", "multistart search and orbit catalogue");
  solve->add_option("config", config_path, "run configuration (JSON)")->required();
  solve->add_option("--output-dir", output_dir, "override output.directory");

  auto* ledger = app.add_subcommand("ledger", "run the inequality ledger");
  ledger->add_option("config", config_path, "run configuration (JSON)")->required();
  ledger->add_option("--samples", ledger_samples, "random samples per check");
  ledger->add_option("--seed", ledger_seed, "RNG seed");
  ledger->add_option("--output-dir", output_dir, "override output.directory");

  auto* exporter = app.add_subcommand("export", "sample an orbit file to CSV");
  exporter->add_option("orbit", orbit_path, "orbit file (JSON)")->required();
  exporter->add_option("--samples", export_samples, "number of rows");
  exporter->add_option("--output", output_file, "CSV path (default: orbit path with .csv)");

  CLI11_PARSE(app, argc, argv);

  auto opt = [](const std::string& s) {
    return s.empty() ? std::nullopt : std::optional<std::string>(s);
  };
  try {
    if (*solve) {
      return orbitact::run_solve(config_path, opt(output_dir), orbitact::threads_from_env(),
                                 std::cout);
    }
    if (*ledger) {
      return orbitact::run_ledger(config_path, ledger_samples, ledger_seed, opt(output_dir),
                                  std::cout);
    }
    if (*exporter) {
      return orbitact::export_trajectory(orbit_path, export_samples, opt(output_file), std::cout);
    }
  } catch (const orbitact::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return orbitact::kExitCheckFailed;
  }
  return 0;
}
