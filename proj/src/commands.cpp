#include "orbitact/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>

#include <json.hpp>

#include "orbitact/config.hpp"
#include "orbitact/error.hpp"
#include "orbitact/orbit_io.hpp"
#include "orbitact/solver.hpp"
#include "orbitact/verify.hpp"

namespace orbitact {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path resolve_output(const std::string& config_path, const RunConfig& cfg,
                        const std::optional<std::string>& override_dir) {
  if (override_dir) return fs::path(*override_dir);
  fs::path dir(cfg.directory);
  if (dir.is_relative()) dir = fs::path(config_path).parent_path() / dir;
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path.string() + "'");
  out << text;
}

std::string orbit_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "orbit_%03zu.json", index);
  return buf;
}

}  // namespace

int threads_from_env() {
  const char* v = std::getenv("ORBITACT_THREADS");
  if (!v) return 0;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (end == v || n < 0) return 0;
  return static_cast<int>(n);
}

int run_solve(const std::string& config_path, const std::optional<std::string>& output_dir,
              int threads, std::ostream& log) {
  RunConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kExitConfigInvalid;
  }
  const PotentialSpec spec = cfg.potential_spec();
  const MultistartResult result =
      multistart(spec, cfg.winding_classes, cfg.starts_per_class, cfg.multistart_options(threads));

  const fs::path dir = resolve_output(config_path, cfg, output_dir);
  fs::create_directories(dir);
  const json resolved = to_json(cfg);

  json orbits = json::array();
  json values = json::array();
  for (std::size_t r = 0; r < result.records.size(); ++r) {
    const OrbitRecord& rec = result.records[r];
    OrbitFile file;
    file.config = resolved;
    file.loop = rec.loop;
    file.action = rec.action_value;
    file.grad_norm = rec.grad_norm;
    file.el_residual = rec.el_residual;
    file.winding_seed_class = rec.winding_seed_class;
    write_orbit((dir / orbit_name(r)).string(), file);
    orbits.push_back({{"file", orbit_name(r)},
                      {"action", rec.action_value},
                      {"winding_seed_class", rec.winding_seed_class},
                      {"dedup_key", rec.dedup_key}});
    values.push_back(rec.action_value);
  }

  json coercivity = nullptr;
  if (!result.records.empty()) {
    const double K = result.records.back().action_value;
    const double A = coercivity_bound(spec, K);
    const CoercivityConstants cc = coercivity_constants(spec);
    std::size_t checked = 0;
    std::size_t violations = 0;
    for (const MultistartRun& run : result.runs) {
      for (const PsEntry& e : run.report.ps_trace) {
        if (e.value > K) continue;
        ++checked;
        if (e.kinetic > A) ++violations;
      }
    }
    coercivity = {{"K", K},   {"A", A},
                  {"C", cc.C}, {"B", cc.B},
                  {"iterates_checked", checked}, {"violations", violations},
                  {"pass", violations == 0}};
  }

  json summary;
  summary["config"] = resolved;
  summary["tool_version"] = kToolVersion;
  summary["counts"] = {{"starts", result.summary.starts},
                       {"converged", result.summary.converged},
                       {"not_converged", result.summary.not_converged},
                       {"residual_rejected", result.summary.residual_rejected},
                       {"duplicates_merged", result.summary.duplicates_merged},
                       {"records", result.records.size()}};
  summary["critical_values"] = values;
  summary["orbits"] = orbits;
  summary["coercivity"] = coercivity;
  write_text(dir / "summary.json", summary.dump(2) + "\n");

  log << "starts " << result.summary.starts << ", converged " << result.summary.converged
      << ", records " << result.records.size() << "\n";
  for (const OrbitRecord& rec : result.records) {
    log << "  w=" << rec.winding_seed_class << "  f=" << std::setprecision(12)
        << rec.action_value << "  |grad|=" << rec.grad_norm << "  el=" << rec.el_residual
        << "\n";
  }
  log << "wrote " << dir.string() << "\n";
  return result.records.empty() ? kExitNoConvergence : kExitOk;
}

int run_ledger(const std::string& config_path, std::size_t n_samples, std::uint64_t seed,
               const std::optional<std::string>& output_dir, std::ostream& log) {
  RunConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kExitConfigInvalid;
  }
  const LedgerReport report =
      run_ledger(cfg.potential_spec(), cfg.dim, cfg.harmonics, n_samples, seed);

  json checks = json::array();
  for (const std::string& w : report.warnings) log << "warning: " << w << "\n";
  for (const LedgerCheck& c : report.checks) {
    log << (c.pass ? "PASS " : "FAIL ") << std::left << std::setw(22) << c.name
        << " samples=" << c.samples << " worst_slack=" << std::setprecision(6) << c.worst_slack
        << "  [" << c.criterion << "]\n";
    checks.push_back({{"name", c.name},
                      {"samples", c.samples},
                      {"worst_slack", c.worst_slack},
                      {"criterion", c.criterion},
                      {"pass", c.pass}});
  }
  json doc = {{"config", to_json(cfg)}, {"seed", seed},     {"n_samples", n_samples},
              {"checks", checks},       {"warnings", report.warnings}, {"pass", report.pass()}};
  const fs::path dir = resolve_output(config_path, cfg, output_dir);
  fs::create_directories(dir);
  write_text(dir / "ledger.json", doc.dump(2) + "\n");
  return report.pass() ? kExitOk : kExitCheckFailed;
}

int export_trajectory(const std::string& orbit_path, int n_samples,
                      const std::optional<std::string>& csv_path, std::ostream& log) {
  OrbitFile orbit;
  try {
    orbit = read_orbit(orbit_path);
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kExitConfigInvalid;
  }
  if (n_samples < 1) {
    log << "error: --samples must be >= 1\n";
    return kExitConfigInvalid;
  }
  const LoopConfiguration& loop = orbit.loop;
  fs::path out_path = csv_path ? fs::path(*csv_path) : fs::path(orbit_path).replace_extension(".csv");

  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    log << "error: cannot write '" << out_path.string() << "'\n";
    return kExitCheckFailed;
  }
  out << "t [time]";
  for (int i = 0; i < loop.n_bodies(); ++i) {
    for (int d = 0; d < loop.dim(); ++d) out << ",x_" << i << "_" << d << " [length]";
  }
  out << "\n";
  std::vector<double> x(loop.dim());
  char buf[40];
  for (int s = 0; s < n_samples; ++s) {
    const double t = loop.period() * s / n_samples;
    std::snprintf(buf, sizeof buf, "%.17g", t);
    out << buf;
    for (int i = 0; i < loop.n_bodies(); ++i) {
      loop.position(i, t, x);
      for (double v : x) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << "," << buf;
      }
    }
    out << "\n";
  }
  log << "wrote " << out_path.string() << " (" << n_samples << " rows)\n";
  return kExitOk;
}

}  // namespace orbitact
