#pragma once

#include <string>

#include <json.hpp>

#include "orbitact/loopspace.hpp"

namespace orbitact {

inline constexpr const char* kToolVersion = "orbitact 0.1.0";

/// On-disk orbit:
///   {meta: {config, tool_version},
///    loop: {N, k, T, M, coefficients},   coefficients in LoopConfiguration order
///    diagnostics: {action, grad_norm, el_residual, winding_seed_class}}
/// Doubles are written in shortest round-trip form, so load + save is
/// byte-identical.
struct OrbitFile {
  nlohmann::json config = nlohmann::json::object();
  std::string tool_version = kToolVersion;
  LoopConfiguration loop{1, 1, 1.0, 1};
  double action = 0.0;
  double grad_norm = 0.0;
  double el_residual = 0.0;
  int winding_seed_class = 0;
};

std::string serialize_orbit(const OrbitFile& orbit);
/// Throws OrbitFileInvalid.
OrbitFile parse_orbit(const std::string& text);

void write_orbit(const std::string& path, const OrbitFile& orbit);
OrbitFile read_orbit(const std::string& path);

}  // namespace orbitact
