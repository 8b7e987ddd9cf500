#include "blockade/config.hpp"

#include <array>
#include <cmath>
#include <set>

#include "blockade/dressed.hpp"

namespace blockade {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<Scenario, std::string_view>, 6> kScenarioNames{{
    {Scenario::spectrum, "spectrum"},
    {Scenario::rabi_scan, "rabi_scan"},
    {Scenario::g2tau, "g2tau"},
    {Scenario::g3tau, "g3tau"},
    {Scenario::pnstat, "pnstat"},
    {Scenario::dressed, "dressed"},
}};

const std::set<std::string> kTopKeys{
    "scenario", "g",     "phi_z",   "eta",       "gamma",       "kappa",
    "delta",    "delta_over_g", "delta_a", "delta_cav", "n_max", "grid",
    "tau",      "n_photons",    "output_path", "check_truncation"};
const std::set<std::string> kGridKeys{"start", "stop", "points"};
const std::set<std::string> kTauKeys{"t_max", "dt_out", "method", "rel_tol", "abs_tol",
                                     "combined"};

[[noreturn]] void fail_unknown(const std::string& key) {
  throw ConfigError("unknown key '" + key + "'");
}
[[noreturn]] void fail_missing(const std::string& key) {
  throw ConfigError("missing required field '" + key + "'");
}
[[noreturn]] void fail_range(const std::string& key, const std::string& why) {
  throw ConfigError("out-of-range value for '" + key + "': " + why);
}
[[noreturn]] void fail_type(const std::string& key, const std::string& expected) {
  throw ConfigError("invalid value for '" + key + "': expected " + expected);
}
[[noreturn]] void fail_unused(const std::string& key, Scenario s) {
  throw ConfigError("key '" + key + "' is not used by scenario '" + to_string(s) + "'");
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& prefix) {
  for (const auto& [key, _] : obj.items())
    if (!allowed.contains(key)) fail_unknown(prefix + key);
}

double number_at(const json& obj, const std::string& key, const std::string& path) {
  const json& v = obj.at(key);
  if (!v.is_number()) fail_type(path, "a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail_range(path, "must be finite");
  return x;
}

std::optional<double> optional_number(const json& obj, const std::string& key,
                                      const std::string& path) {
  if (!obj.contains(key)) return std::nullopt;
  return number_at(obj, key, path);
}

int integer_at(const json& obj, const std::string& key, const std::string& path) {
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail_type(path, "an integer");
  return v.get<int>();
}

bool bool_at(const json& obj, const std::string& key, const std::string& path) {
  const json& v = obj.at(key);
  if (!v.is_boolean()) fail_type(path, "true or false");
  return v.get<bool>();
}

bool uses_grid(Scenario s) { return s == Scenario::spectrum || s == Scenario::rabi_scan; }
bool uses_tau(Scenario s) { return s == Scenario::g2tau || s == Scenario::g3tau; }
bool uses_detuning(Scenario s) {
  return s == Scenario::g2tau || s == Scenario::g3tau || s == Scenario::pnstat;
}

Grid parse_grid(const json& obj) {
  if (!obj.is_object()) fail_type("grid", "an object");
  reject_unknown(obj, kGridKeys, "grid.");
  for (const char* k : {"start", "stop", "points"})
    if (!obj.contains(k)) fail_missing(std::string("grid.") + k);
  Grid grid;
  grid.start = number_at(obj, "start", "grid.start");
  grid.stop = number_at(obj, "stop", "grid.stop");
  grid.points = integer_at(obj, "points", "grid.points");
  if (grid.points < 2) fail_range("grid.points", "a sweep needs at least 2 points");
  if (!(grid.stop > grid.start)) fail_range("grid.stop", "must exceed grid.start");
  return grid;
}

TauSettings parse_tau(const json& obj) {
  if (!obj.is_object()) fail_type("tau", "an object");
  reject_unknown(obj, kTauKeys, "tau.");
  for (const char* k : {"t_max", "dt_out"})
    if (!obj.contains(k)) fail_missing(std::string("tau.") + k);
  TauSettings tau;
  PropagationSpec& p = tau.propagation;
  p.t_max = number_at(obj, "t_max", "tau.t_max");
  p.dt_out = number_at(obj, "dt_out", "tau.dt_out");
  if (!(p.dt_out > 0.0)) fail_range("tau.dt_out", "must be > 0");
  if (!(p.t_max >= p.dt_out)) fail_range("tau.t_max", "must be >= tau.dt_out");
  if (obj.contains("method")) {
    const json& m = obj.at("method");
    if (!m.is_string()) fail_type("tau.method", "\"fixed_rk4\" or \"adaptive\"");
    if (m == "fixed_rk4") p.method = Integrator::fixed_rk4;
    else if (m == "adaptive") p.method = Integrator::adaptive;
    else fail_range("tau.method", "expected \"fixed_rk4\" or \"adaptive\"");
  }
  if (auto v = optional_number(obj, "rel_tol", "tau.rel_tol")) {
    if (!(*v > 0.0)) fail_range("tau.rel_tol", "must be > 0");
    p.rel_tol = *v;
  }
  if (auto v = optional_number(obj, "abs_tol", "tau.abs_tol")) {
    if (!(*v > 0.0)) fail_range("tau.abs_tol", "must be > 0");
    p.abs_tol = *v;
  }
  if (obj.contains("combined")) tau.combined = bool_at(obj, "combined", "tau.combined");
  return tau;
}

void parse_detuning(const json& doc, ScenarioConfig& cfg) {
  const bool has_delta = doc.contains("delta");
  const bool has_over_g = doc.contains("delta_over_g");
  const bool has_a = doc.contains("delta_a");
  const bool has_cav = doc.contains("delta_cav");
  const int forms = int(has_delta) + int(has_over_g) + int(has_a || has_cav);
  if (forms > 1)
    throw ConfigError(
        "conflicting detuning keys: use one of 'delta', 'delta_over_g' or "
        "'delta_a'/'delta_cav'");
  if (has_delta) {
    cfg.params = cfg.params.with_detuning(number_at(doc, "delta", "delta"));
  } else if (has_over_g) {
    cfg.params = cfg.params.with_detuning(number_at(doc, "delta_over_g", "delta_over_g") *
                                          cfg.params.g);
  } else if (has_a || has_cav) {
    if (!has_a) fail_missing("delta_a");
    if (!has_cav) fail_missing("delta_cav");
    cfg.params.delta_a = number_at(doc, "delta_a", "delta_a");
    cfg.params.delta_cav = number_at(doc, "delta_cav", "delta_cav");
  } else {
    fail_missing("delta");
  }
}

}  // namespace

std::string to_string(Scenario s) {
  for (const auto& [value, name] : kScenarioNames)
    if (value == s) return std::string(name);
  return "unknown";
}

std::optional<Scenario> scenario_from_string(std::string_view name) {
  for (const auto& [value, n] : kScenarioNames)
    if (n == name) return value;
  return std::nullopt;
}

ScenarioConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return parse_config(doc);
}

ScenarioConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("malformed config: top level must be an object");
  reject_unknown(doc, kTopKeys, "");

  ScenarioConfig cfg;
  if (!doc.contains("scenario")) fail_missing("scenario");
  if (!doc.at("scenario").is_string()) fail_type("scenario", "a scenario name");
  const auto scenario = scenario_from_string(doc.at("scenario").get<std::string>());
  if (!scenario) fail_range("scenario", "unknown scenario '" +
                                            doc.at("scenario").get<std::string>() + "'");
  cfg.scenario = *scenario;
  const Scenario s = cfg.scenario;

  // Keys that only make sense for some scenarios.
  if (!uses_grid(s) && doc.contains("grid")) fail_unused("grid", s);
  if (!uses_tau(s) && doc.contains("tau")) fail_unused("tau", s);
  if (s != Scenario::dressed && doc.contains("n_photons")) fail_unused("n_photons", s);
  if (!uses_detuning(s))
    for (const char* k : {"delta", "delta_over_g", "delta_a", "delta_cav"})
      if (doc.contains(k)) fail_unused(k, s);

  SystemParams& p = cfg.params;
  if (s == Scenario::dressed) {
    p.g = optional_number(doc, "g", "g").value_or(1.0);
  } else {
    if (!doc.contains("g")) fail_missing("g");
    p.g = number_at(doc, "g", "g");
  }
  if (!doc.contains("phi_z")) fail_missing("phi_z");
  p.phi_z = number_at(doc, "phi_z", "phi_z");

  const bool needs_eta = s != Scenario::rabi_scan && s != Scenario::dressed;
  if (needs_eta && !doc.contains("eta")) fail_missing("eta");
  p.eta = optional_number(doc, "eta", "eta").value_or(0.0);
  p.gamma = optional_number(doc, "gamma", "gamma").value_or(1.0);
  p.kappa = optional_number(doc, "kappa", "kappa").value_or(1.0);

  if (p.g < 0.0) fail_range("g", "must be >= 0");
  if (p.eta < 0.0) fail_range("eta", "must be >= 0");
  if (p.gamma < 0.0) fail_range("gamma", "must be >= 0");
  if (p.kappa != 1.0) fail_range("kappa", "kappa is the unit of all rates and must be 1");
  if (s == Scenario::spectrum && !(p.g > 0.0))
    fail_range("g", "the spectrum grid is in units of g, so g must be > 0");
  if (s == Scenario::dressed) {
    try {
      radiation_from_phase(p.phi_z);
    } catch (const Unsupported&) {
      fail_range("phi_z", "dressed levels are available for phi_z = 0 or pi only");
    }
  }

  if (uses_detuning(s)) parse_detuning(doc, cfg);

  if (doc.contains("n_max")) cfg.n_max = integer_at(doc, "n_max", "n_max");
  if (cfg.n_max < 1) fail_range("n_max", "must be >= 1");

  if (uses_grid(s)) {
    if (!doc.contains("grid")) fail_missing("grid");
    cfg.grid = parse_grid(doc.at("grid"));
    if (s == Scenario::rabi_scan && cfg.grid->start < 0.0)
      fail_range("grid.start", "eta must be >= 0");
  }
  if (uses_tau(s)) {
    if (!doc.contains("tau")) fail_missing("tau");
    cfg.tau = parse_tau(doc.at("tau"));
  }
  if (s == Scenario::dressed && doc.contains("n_photons")) {
    cfg.n_photons = integer_at(doc, "n_photons", "n_photons");
    if (cfg.n_photons < 1) fail_range("n_photons", "must be >= 1");
  }

  const bool three_photon = s == Scenario::rabi_scan || s == Scenario::g3tau ||
                            (s == Scenario::g2tau && cfg.tau->combined);
  if (three_photon && cfg.n_max < 3)
    fail_range("n_max", "three-photon observables need n_max >= 3");
  if (s == Scenario::g2tau && cfg.n_max < 2)
    fail_range("n_max", "two-photon observables need n_max >= 2");

  if (doc.contains("output_path")) {
    if (!doc.at("output_path").is_string()) fail_type("output_path", "a string");
    cfg.output_path = doc.at("output_path").get<std::string>();
  }
  if (doc.contains("check_truncation"))
    cfg.check_truncation = bool_at(doc, "check_truncation", "check_truncation");
  return cfg;
}

json to_json(const ScenarioConfig& cfg) {
  const Scenario s = cfg.scenario;
  json j;
  j["scenario"] = to_string(s);
  j["g"] = cfg.params.g;
  j["phi_z"] = cfg.params.phi_z;
  j["eta"] = cfg.params.eta;
  j["gamma"] = cfg.params.gamma;
  j["kappa"] = cfg.params.kappa;
  if (uses_detuning(s)) {
    j["delta_a"] = cfg.params.delta_a;
    j["delta_cav"] = cfg.params.delta_cav;
  }
  j["n_max"] = cfg.n_max;
  if (cfg.grid)
    j["grid"] = {{"start", cfg.grid->start}, {"stop", cfg.grid->stop},
                 {"points", cfg.grid->points}};
  if (cfg.tau) {
    const PropagationSpec& p = cfg.tau->propagation;
    j["tau"] = {{"t_max", p.t_max},
                {"dt_out", p.dt_out},
                {"method", p.method == Integrator::fixed_rk4 ? "fixed_rk4" : "adaptive"},
                {"rel_tol", p.rel_tol},
                {"abs_tol", p.abs_tol},
                {"combined", cfg.tau->combined}};
  }
  if (s == Scenario::dressed) j["n_photons"] = cfg.n_photons;
  j["output_path"] = cfg.output_path;
  j["check_truncation"] = cfg.check_truncation;
  return j;
}

}  // namespace blockade
