#pragma once

#include <string>

#include <json.hpp>

#include "blockade/config.hpp"

namespace blockade {

inline constexpr const char* kToolName = "blockade";
inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitNumerical = 2,
  kExitIo = 3,
};

struct RunOptions {
  int threads = 1;
};

struct RunReport {
  int exit_code = kExitOk;
  std::string data_path;
  std::string meta_path;  // data_path + ".meta.json"
  std::string message;
};

// Runs one scenario and writes the data file at cfg.output_path plus a
// metadata sidecar holding the resolved config (re-parseable with
// parse_config), solver diagnostics and per-point errors. Output is
// byte-identical for identical configs, independent of thread count.
RunReport run_scenario(const ScenarioConfig& cfg, const RunOptions& options = {});

// Fixed 12-significant-digit rendering used in every data file; NaN -> "nan".
std::string format_number(double v);

std::string metadata_path_for(const std::string& data_path);

}  // namespace blockade
