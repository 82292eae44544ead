#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

#include "orbitact/commands.hpp"
#include "orbitact/config.hpp"
#include "orbitact/error.hpp"
#include "orbitact/orbit_io.hpp"

using namespace orbitact;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("orbitact_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void dump(const fs::path& p, const json& doc) { std::ofstream(p) << doc.dump(2); }

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + ORBITACT_CLI + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Reference problem at a smaller size, writing to out_dir.
json small_config(const std::string& out_dir) {
  json doc = json::parse(slurp(ORBITACT_REFERENCE_CONFIG));
  doc["discretization"]["harmonics"] = 4;
  doc["solver"]["winding_classes"] = {1, 3};
  doc["solver"]["starts_per_class"] = 2;
  doc["output"]["directory"] = out_dir;
  return doc;
}

}  // namespace

TEST_CASE("config defaults are materialized and round-trip") {
  const RunConfig cfg = parse_config(json::object());
  CHECK(cfg.n_bodies == 2);
  CHECK(cfg.n_t == 4 * cfg.harmonics + 9);
  const RunConfig again = parse_config(to_json(cfg));
  CHECK(to_json(again) == to_json(cfg));
  const RunConfig ref = load_config(ORBITACT_REFERENCE_CONFIG);
  CHECK(ref.solve.seed == 7);
  CHECK(ref.winding_classes == std::vector<int>{1, 3, 5});
}

TEST_CASE("config invariants are enforced") {
  auto code_of = [](const json& doc) {
    try {
      parse_config(doc);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(code_of({{"potential", {{"theta", 2.5}}}}) == ErrorCode::ConfigInvalid);
  CHECK(code_of({{"potential", {{"alpha", 1.0}}}}) == ErrorCode::ConfigInvalid);
  CHECK(code_of({{"potential", {{"blend", "spline"}}}}) == ErrorCode::ConfigInvalid);
  CHECK(code_of({{"problem", {{"masses", {1.0, 1.0}}, {"n_bodies", 3}}}}) ==
        ErrorCode::ConfigInvalid);
  CHECK(code_of({{"problem", {{"dim", 1}}}}) == ErrorCode::ConfigInvalid);
  CHECK(code_of({{"solver", {{"winding_classes", {2}}}}}) == ErrorCode::ConfigInvalid);
  CHECK(code_of({{"solver", {{"winding_classes", {17}}}}}) == ErrorCode::ConfigInvalid);
  CHECK(code_of({{"solver", {{"grad_tol", 0.0}}}}) == ErrorCode::ConfigInvalid);
  CHECK(code_of({{"solver", {{"tolerance", 1e-9}}}}) == ErrorCode::ConfigInvalid);
  CHECK(code_of({{"extra", 1}}) == ErrorCode::ConfigInvalid);
  CHECK(code_of({{"discretization", {{"harmonics", 8}, {"n_t", 20}}}}) ==
        ErrorCode::ConfigInvalid);
}

TEST_CASE("solve writes orbits that reload byte for byte") {
  const fs::path dir = scratch("solve");
  const fs::path cfg_path = dir / "run.json";
  dump(cfg_path, small_config("orbits"));
  std::ostringstream log;
  REQUIRE(run_solve(cfg_path.string(), std::nullopt, 2, log) == kExitOk);
  // The directory is resolved next to the config file.
  const fs::path out = dir / "orbits";
  REQUIRE(fs::exists(out / "summary.json"));
  const json summary = json::parse(slurp(out / "summary.json"));
  CHECK(summary["counts"]["records"] == 2);
  CHECK(summary["critical_values"].size() == 2);
  CHECK(summary["coercivity"]["pass"] == true);
  CHECK(summary["tool_version"] == kToolVersion);
  for (const auto& entry : summary["orbits"]) {
    const fs::path file = out / entry["file"].get<std::string>();
    const std::string bytes = slurp(file);
    const OrbitFile orbit = read_orbit(file.string());
    CHECK(serialize_orbit(orbit) == bytes);
    CHECK(orbit.action == entry["action"].get<double>());
    CHECK(orbit.loop.n_bodies() == 2);
    CHECK(orbit.loop.harmonics() == 4);
    CHECK(orbit.config["discretization"]["n_t"] == 25);
  }
}

TEST_CASE("malformed orbit files are rejected") {
  CHECK_THROWS_AS(parse_orbit("{}"), Error);
  CHECK_THROWS_AS(parse_orbit("not json"), Error);
  OrbitFile f;
  json doc = json::parse(serialize_orbit(f));
  doc["loop"]["coefficients"].push_back(1.0);
  try {
    parse_orbit(doc.dump());
    FAIL("expected OrbitFileInvalid");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OrbitFileInvalid);
  }
}

TEST_CASE("export samples the orbit as csv") {
  const fs::path dir = scratch("export");
  const fs::path cfg_path = dir / "run.json";
  dump(cfg_path, small_config("out"));
  std::ostringstream log;
  REQUIRE(run_solve(cfg_path.string(), std::nullopt, 1, log) == kExitOk);
  const fs::path orbit = dir / "out" / "orbit_000.json";

  REQUIRE(run_cli("export \"" + orbit.string() + "\" --samples 64") == 0);
  std::ifstream csv(dir / "out" / "orbit_000.csv");
  std::string line;
  std::getline(csv, line);
  CHECK(line == "t [time],x_0_0 [length],x_0_1 [length],x_1_0 [length],x_1_1 [length]");
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    REQUIRE(v.size() == 5);
    // Equal masses: the bodies stay opposite each other.
    CHECK(v[3] == doctest::Approx(-v[1]).epsilon(1e-9));
    CHECK(v[4] == doctest::Approx(-v[2]).epsilon(1e-9));
  }
  CHECK(rows == 64);

  const fs::path two = dir / "two.csv";
  REQUIRE(export_trajectory(orbit.string(), 2, two.string(), log) == kExitOk);
  std::ifstream in(two);
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 3);
  CHECK(export_trajectory(orbit.string(), 0, two.string(), log) == kExitConfigInvalid);
  CHECK(export_trajectory((dir / "missing.json").string(), 4, std::nullopt, log) ==
        kExitConfigInvalid);
}

TEST_CASE("command line exit codes") {
  const fs::path dir = scratch("exit");
  dump(dir / "bad.json", json{{"potential", {{"theta", 2.5}}}});
  CHECK(run_cli("solve \"" + (dir / "bad.json").string() + "\"") == kExitConfigInvalid);
  CHECK(run_cli("ledger \"" + (dir / "bad.json").string() + "\"") == kExitConfigInvalid);

  json linear = small_config("ledger_out");
  linear["potential"]["blend"] = "linear";
  dump(dir / "linear.json", linear);
  CHECK(run_cli("ledger \"" + (dir / "linear.json").string() + "\" --samples 20") ==
        kExitCheckFailed);

  dump(dir / "ok.json", small_config("ledger_out"));
  CHECK(run_cli("ledger \"" + (dir / "ok.json").string() + "\"") == kExitOk);
  const json ledger = json::parse(slurp(dir / "ledger_out" / "ledger.json"));
  CHECK(ledger["pass"] == true);
  CHECK(ledger["n_samples"] == 1000);

  std::ostringstream log;
  CHECK(run_ledger((dir / "ok.json").string(), 0, 0, std::nullopt, log) == kExitOk);
  CHECK(log.str().find("warning") != std::string::npos);

  // Unreachable convergence: one iteration per start.
  json capped = small_config("capped");
  capped["solver"]["max_iters"] = 1;
  dump(dir / "capped.json", capped);
  CHECK(run_cli("solve \"" + (dir / "capped.json").string() + "\"") == kExitNoConvergence);

  CHECK(run_cli("") != 0);
  CHECK(run_cli("frobnicate") != 0);
}
