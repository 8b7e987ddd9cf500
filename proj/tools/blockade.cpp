#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "blockade/config.hpp"
#include "blockade/runner.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json read_json(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw blockade::ConfigError("cannot read config file " + path.string());
  std::stringstream buffer;
  buffer << is.rdbuf();
  try {
    return json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw blockade::ConfigError("malformed config: " + path.string() + ": " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Driven two-atom cavity QED simulator"};
  app.set_version_flag("--version", std::string(blockade::kToolName) + " " +
                                        blockade::kToolVersion);
  std::string target;
  std::string config_path;
  std::string out_path;
  std::string preset_dir = BLOCKADE_PRESET_DIR;
  bool check_truncation = false;
  int threads = 1;
  app.add_option("scenario", target,
                 "scenario (spectrum, rabi_scan, g2tau, g3tau, pnstat, dressed) or preset name")
      ->required();
  app.add_option("--config", config_path, "JSON scenario file; overlays a preset");
  app.add_option("--out", out_path, "data file to write");
  app.add_flag("--check-truncation", check_truncation, "rerun at n_max + 2 and report the change");
  app.add_option("--threads", threads, "workers for sweep scenarios")->check(CLI::PositiveNumber);
  app.add_option("--preset-dir", preset_dir, "directory holding preset files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? blockade::kExitOk : blockade::kExitUsage;
  }

  blockade::ScenarioConfig cfg;
  try {
    json doc = json::object();
    const fs::path preset = fs::path(preset_dir) / (target + ".json");
    const bool is_scenario = blockade::scenario_from_string(target).has_value();
    if (!is_scenario) {
      if (!fs::exists(preset))
        throw blockade::ConfigError("'" + target + "' is neither a scenario nor a preset in " +
                                    preset_dir);
      doc = read_json(preset);
    } else if (config_path.empty()) {
      throw blockade::ConfigError("scenario '" + target + "' needs --config");
    }
    if (!config_path.empty()) {
      const json overlay = read_json(config_path);
      if (!overlay.is_object()) throw blockade::ConfigError("malformed config: expected an object");
      doc.merge_patch(overlay);
    }
    if (is_scenario) {
      if (doc.contains("scenario") && doc["scenario"] != target)
        throw blockade::ConfigError("config scenario " + doc["scenario"].dump() +
                                    " does not match '" + target + "'");
      doc["scenario"] = target;
    }
    if (!out_path.empty()) doc["output_path"] = out_path;
    if (check_truncation) doc["check_truncation"] = true;
    cfg = blockade::parse_config(doc);
  } catch (const blockade::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return blockade::kExitUsage;
  }
  if (cfg.output_path.empty()) {
    std::cerr << "error: no output path (use --out)\n";
    return blockade::kExitUsage;
  }

  const blockade::RunReport report = blockade::run_scenario(cfg, {threads});
  if (report.exit_code != blockade::kExitOk)
    std::cerr << "error: " << report.message << "\n";
  else
    std::cout << report.data_path << "\n" << report.meta_path << "\n";
  return report.exit_code;
}
