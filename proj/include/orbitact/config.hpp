#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "orbitact/potential.hpp"
#include "orbitact/solver.hpp"

namespace orbitact {

/// Everything a batch run needs. Defaults are materialized on load so the
/// resolved form (to_json) reproduces the run on its own.
struct RunConfig {
  // problem
  int n_bodies = 2;
  int dim = 2;
  double period = 2.0 * std::numbers::pi;
  std::vector<double> masses{1.0, 1.0};
  // potential
  double a = 1.0;
  double g = 1.0;
  double alpha = 2.0;
  double theta = 1.0;
  double r1 = 2.0;
  double r2 = 4.0;
  double modulation_eps = 0.0;
  BlendKind blend = BlendKind::Hermite;
  // discretization
  int harmonics = 8;
  int n_t = 0;  // resolved to 4M+9 when absent
  // solver
  SolveOptions solve;
  std::vector<int> winding_classes{1, 3, 5};
  int starts_per_class = 4;
  double seed_noise = 0.02;
  // output
  std::string directory = "orbits";
  double dedup_action_rel_tol = 1e-6;
  double dedup_path_tol = 1e-3;
  double residual_tol = 1e-6;

  PotentialSpec potential_spec() const;
  MultistartOptions multistart_options(int threads) const;
};

/// Throws ConfigInvalid on unknown keys, wrong types or violated invariants.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);
nlohmann::json to_json(const RunConfig& config);

}  // namespace orbitact
