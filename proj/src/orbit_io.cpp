#include "orbitact/orbit_io.hpp"

#include <fstream>
#include <sstream>

#include "orbitact/error.hpp"

namespace orbitact {

using nlohmann::json;

std::string serialize_orbit(const OrbitFile& orbit) {
  json doc;
  doc["meta"] = {{"config", orbit.config}, {"tool_version", orbit.tool_version}};
  const LoopConfiguration& loop = orbit.loop;
  doc["loop"] = {{"N", loop.n_bodies()},
                 {"k", loop.dim()},
                 {"T", loop.period()},
                 {"M", loop.harmonics()},
                 {"coefficients", std::vector<double>(loop.coefficients().begin(),
                                                      loop.coefficients().end())}};
  doc["diagnostics"] = {{"action", orbit.action},
                        {"grad_norm", orbit.grad_norm},
                        {"el_residual", orbit.el_residual},
                        {"winding_seed_class", orbit.winding_seed_class}};
  return doc.dump(2) + "\n";
}

OrbitFile parse_orbit(const std::string& text) {
  try {
    const json doc = json::parse(text);
    OrbitFile orbit;
    const json& meta = doc.at("meta");
    orbit.config = meta.at("config");
    orbit.tool_version = meta.at("tool_version").get<std::string>();
    const json& l = doc.at("loop");
    orbit.loop = LoopConfiguration(l.at("N").get<int>(), l.at("k").get<int>(),
                                   l.at("T").get<double>(), l.at("M").get<int>(),
                                   l.at("coefficients").get<std::vector<double>>());
    const json& d = doc.at("diagnostics");
    orbit.action = d.at("action").get<double>();
    orbit.grad_norm = d.at("grad_norm").get<double>();
    orbit.el_residual = d.at("el_residual").get<double>();
    orbit.winding_seed_class = d.at("winding_seed_class").get<int>();
    return orbit;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::OrbitFileInvalid, e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::OrbitFileInvalid, e.what());
  }
}

void write_orbit(const std::string& path, const OrbitFile& orbit) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
  out << serialize_orbit(orbit);
}

OrbitFile read_orbit(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::OrbitFileInvalid, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_orbit(buf.str());
}

}  // namespace orbitact
