#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace orbitact {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitConfigInvalid = 2,
  kExitNoConvergence = 3,
};

/// solve <config>: multistart, one orbit file per deduplicated record and a
/// summary.json. Output directory: override, else the config's
/// output.directory resolved against the config file's directory.
int run_solve(const std::string& config_path, const std::optional<std::string>& output_dir,
              int threads, std::ostream& log);

/// ledger <config>: inequality ledger written to ledger.json.
int run_ledger(const std::string& config_path, std::size_t n_samples, std::uint64_t seed,
               const std::optional<std::string>& output_dir, std::ostream& log);

/// export <orbit>: CSV of n_samples uniform rows over [0, T).
int export_trajectory(const std::string& orbit_path, int n_samples,
                      const std::optional<std::string>& csv_path, std::ostream& log);

/// ORBITACT_THREADS, 0 (auto) when unset or unparsable.
int threads_from_env();

}  // namespace orbitact
