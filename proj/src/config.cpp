#include "orbitact/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>

#include "orbitact/error.hpp"

namespace orbitact {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::ConfigInvalid, what); }

const json& section(const json& doc, const char* name) {
  static const json empty = json::object();
  if (!doc.contains(name)) return empty;
  const json& s = doc.at(name);
  if (!s.is_object()) invalid(std::string("section '") + name + "' must be an object");
  return s;
}

void reject_unknown(const json& obj, const std::string& where, std::set<std::string> known) {
  for (const auto& item : obj.items()) {
    if (!known.count(item.key())) invalid("unknown key '" + item.key() + "' in " + where);
  }
}

double get_number(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) invalid(std::string("'") + key + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) invalid(std::string("'") + key + "' must be finite");
  return x;
}

long long get_integer(const json& obj, const char* key, long long fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) invalid(std::string("'") + key + "' must be an integer");
  return v.get<long long>();
}

}  // namespace

PotentialSpec RunConfig::potential_spec() const {
  PotentialSpec spec;
  spec.masses = masses;
  spec.a = a;
  spec.g = g;
  spec.alpha = alpha;
  spec.theta = theta;
  spec.r1 = r1;
  spec.r2 = r2;
  spec.modulation_eps = modulation_eps;
  spec.period = period;
  spec.blend = blend;
  return spec;
}

MultistartOptions RunConfig::multistart_options(int threads) const {
  MultistartOptions opts;
  opts.solve = solve;
  opts.harmonics = harmonics;
  opts.dim = dim;
  opts.n_t = n_t;
  opts.seed_noise = seed_noise;
  opts.residual_tol = residual_tol;
  opts.dedup_action_rel_tol = dedup_action_rel_tol;
  opts.dedup_path_tol = dedup_path_tol;
  opts.threads = threads;
  return opts;
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) invalid("config root must be an object");
  reject_unknown(doc, "config", {"problem", "potential", "discretization", "solver", "output"});
  RunConfig c;

  const json& problem = section(doc, "problem");
  reject_unknown(problem, "problem", {"n_bodies", "dim", "period", "masses"});
  if (problem.contains("masses")) {
    const json& m = problem.at("masses");
    if (!m.is_array()) invalid("'masses' must be an array");
    c.masses.clear();
    for (const json& v : m) {
      if (!v.is_number()) invalid("'masses' entries must be numbers");
      c.masses.push_back(v.get<double>());
    }
  }
  c.n_bodies = static_cast<int>(
      get_integer(problem, "n_bodies", static_cast<long long>(c.masses.size())));
  c.dim = static_cast<int>(get_integer(problem, "dim", c.dim));
  c.period = get_number(problem, "period", c.period);

  const json& pot = section(doc, "potential");
  reject_unknown(pot, "potential",
                 {"a", "g", "alpha", "theta", "r1", "r2", "modulation_eps", "blend"});
  c.a = get_number(pot, "a", c.a);
  c.g = get_number(pot, "g", c.g);
  c.alpha = get_number(pot, "alpha", c.alpha);
  c.theta = get_number(pot, "theta", c.theta);
  c.r1 = get_number(pot, "r1", c.r1);
  c.r2 = get_number(pot, "r2", c.r2);
  c.modulation_eps = get_number(pot, "modulation_eps", c.modulation_eps);
  if (pot.contains("blend")) {
    const json& b = pot.at("blend");
    if (b == "hermite") {
      c.blend = BlendKind::Hermite;
    } else if (b == "linear") {
      c.blend = BlendKind::Linear;
    } else {
      invalid("'blend' must be \"hermite\" or \"linear\"");
    }
  }

  const json& disc = section(doc, "discretization");
  reject_unknown(disc, "discretization", {"harmonics", "n_t"});
  c.harmonics = static_cast<int>(get_integer(disc, "harmonics", c.harmonics));
  c.n_t = static_cast<int>(get_integer(disc, "n_t", 0));

  const json& solver = section(doc, "solver");
  reject_unknown(solver, "solver",
                 {"max_iters", "grad_tol", "history_len", "seed", "winding_classes",
                  "starts_per_class", "step_guard", "seed_noise"});
  c.solve.max_iters = static_cast<int>(get_integer(solver, "max_iters", c.solve.max_iters));
  c.solve.grad_tol = get_number(solver, "grad_tol", c.solve.grad_tol);
  c.solve.history_len = static_cast<int>(get_integer(solver, "history_len", c.solve.history_len));
  const long long seed = get_integer(solver, "seed", 0);
  if (seed < 0) invalid("'seed' must be non-negative");
  c.solve.seed = static_cast<std::uint64_t>(seed);
  c.solve.step_guard = get_number(solver, "step_guard", c.solve.step_guard);
  c.starts_per_class =
      static_cast<int>(get_integer(solver, "starts_per_class", c.starts_per_class));
  c.seed_noise = get_number(solver, "seed_noise", c.seed_noise);
  if (solver.contains("winding_classes")) {
    const json& w = solver.at("winding_classes");
    if (!w.is_array()) invalid("'winding_classes' must be an array");
    c.winding_classes.clear();
    for (const json& v : w) {
      if (!v.is_number_integer()) invalid("'winding_classes' entries must be integers");
      c.winding_classes.push_back(v.get<int>());
    }
  }

  const json& out = section(doc, "output");
  reject_unknown(out, "output",
                 {"directory", "dedup_action_rel_tol", "dedup_path_tol", "residual_tol"});
  if (out.contains("directory")) {
    if (!out.at("directory").is_string()) invalid("'directory' must be a string");
    c.directory = out.at("directory").get<std::string>();
  }
  c.dedup_action_rel_tol = get_number(out, "dedup_action_rel_tol", c.dedup_action_rel_tol);
  c.dedup_path_tol = get_number(out, "dedup_path_tol", c.dedup_path_tol);
  c.residual_tol = get_number(out, "residual_tol", c.residual_tol);

  // Invariants.
  if (c.n_bodies < 1) invalid("n_bodies must be positive");
  if (static_cast<int>(c.masses.size()) != c.n_bodies) {
    invalid("masses must list exactly n_bodies entries");
  }
  if (c.dim < 2) invalid("dim >= 2 required");
  if (!(c.period > 0.0)) invalid("period must be positive");
  try {
    c.potential_spec().validate();
  } catch (const Error& e) {
    invalid(std::string("potential: ") + e.what());
  }
  if (c.harmonics < 1) invalid("harmonics must be >= 1");
  if (c.n_t == 0) c.n_t = SpectralGrid::default_points(c.harmonics);
  if (c.n_t < SpectralGrid::minimum_points(c.harmonics)) invalid("n_t >= 4*harmonics+1 required");
  if (c.solve.max_iters < 1) invalid("max_iters >= 1 required");
  if (!(c.solve.grad_tol > 0.0)) invalid("grad_tol > 0 required");
  if (c.solve.history_len < 0) invalid("history_len >= 0 required");
  if (!(c.solve.step_guard > 0.0 && c.solve.step_guard <= 1.0)) {
    invalid("step_guard must lie in (0, 1]");
  }
  if (c.starts_per_class < 1) invalid("starts_per_class >= 1 required");
  if (!(c.seed_noise >= 0.0)) invalid("seed_noise >= 0 required");
  if (c.winding_classes.empty()) invalid("at least one winding class required");
  for (int w : c.winding_classes) {
    if (std::abs(w) % 2 != 1) invalid("winding classes must be odd (antiperiodic loops)");
    if (std::abs(w) > 2 * c.harmonics - 1) invalid("winding class exceeds 2*harmonics-1");
  }
  if (!(c.dedup_action_rel_tol > 0.0) || !(c.dedup_path_tol > 0.0) || !(c.residual_tol > 0.0)) {
    invalid("output tolerances must be positive");
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot read config '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    invalid("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

json to_json(const RunConfig& c) {
  json doc;
  doc["problem"] = {{"n_bodies", c.n_bodies},
                    {"dim", c.dim},
                    {"period", c.period},
                    {"masses", c.masses}};
  doc["potential"] = {{"a", c.a},
                      {"g", c.g},
                      {"alpha", c.alpha},
                      {"theta", c.theta},
                      {"r1", c.r1},
                      {"r2", c.r2},
                      {"modulation_eps", c.modulation_eps},
                      {"blend", c.blend == BlendKind::Hermite ? "hermite" : "linear"}};
  doc["discretization"] = {{"harmonics", c.harmonics}, {"n_t", c.n_t}};
  doc["solver"] = {{"max_iters", c.solve.max_iters},
                   {"grad_tol", c.solve.grad_tol},
                   {"history_len", c.solve.history_len},
                   {"seed", c.solve.seed},
                   {"winding_classes", c.winding_classes},
                   {"starts_per_class", c.starts_per_class},
                   {"step_guard", c.solve.step_guard},
                   {"seed_noise", c.seed_noise}};
  doc["output"] = {{"directory", c.directory},
                   {"dedup_action_rel_tol", c.dedup_action_rel_tol},
                   {"dedup_path_tol", c.dedup_path_tol},
                   {"residual_tol", c.residual_tol}};
  return doc;
}

}  // namespace orbitact
