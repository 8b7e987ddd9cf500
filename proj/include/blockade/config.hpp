#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "blockade/error.hpp"
#include "blockade/model.hpp"
#include "blockade/solvers.hpp"

namespace blockade {

class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class Scenario { spectrum, rabi_scan, g2tau, g3tau, pnstat, dressed };

std::string to_string(Scenario s);
std::optional<Scenario> scenario_from_string(std::string_view name);

struct Grid {
  double start = 0.0;
  double stop = 0.0;
  int points = 0;

  friend bool operator==(const Grid&, const Grid&) = default;
};

struct TauSettings {
  PropagationSpec propagation;
  bool combined = false;  // write g2 and g3 side by side

  friend bool operator==(const TauSettings& a, const TauSettings& b) {
    return a.combined == b.combined && a.propagation.t_max == b.propagation.t_max &&
           a.propagation.dt_out == b.propagation.dt_out &&
           a.propagation.method == b.propagation.method &&
           a.propagation.rel_tol == b.propagation.rel_tol &&
           a.propagation.abs_tol == b.propagation.abs_tol;
  }
};

// A validated scenario description. Schema (JSON object):
//
//   scenario          spectrum | rabi_scan | g2tau | g3tau | pnstat | dressed
//   g, phi_z, eta     model parameters (units of kappa, radians)
//   gamma, kappa      default 1; kappa must be 1
//   delta             sets delta_a = delta_cav (units of kappa)
//   delta_over_g      same, in units of g
//   delta_a, delta_cav  independent detunings (both required together)
//   n_max             Fock truncation, default 8
//   grid              {start, stop, points}; spectrum: Delta/g, rabi_scan: eta/kappa
//   tau               {t_max, dt_out, method, rel_tol, abs_tol, combined}
//   n_photons         highest manifold for dressed, default 3
//   output_path       data file (the --out flag overrides it)
//   check_truncation  rerun at n_max + 2 and report the change
//
// spectrum and rabi_scan set the detuning themselves and reject detuning keys.
struct ScenarioConfig {
  Scenario scenario = Scenario::spectrum;
  SystemParams params;
  int n_max = 8;
  std::optional<Grid> grid;
  std::optional<TauSettings> tau;
  int n_photons = 3;
  std::string output_path;
  bool check_truncation = false;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

// Throws ConfigError; the message names the offending key.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig parse_config(const nlohmann::json& doc);
inline ScenarioConfig parse_config(const std::string& text) {
  return parse_config(std::string_view(text));
}
inline ScenarioConfig parse_config(const char* text) {
  return parse_config(std::string_view(text));
}

// Fully resolved config; parse_config(to_json(c)) == c.
nlohmann::json to_json(const ScenarioConfig& cfg);

}  // namespace blockade
