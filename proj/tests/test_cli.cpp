#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "blockade/config.hpp"
#include "blockade/runner.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Sandbox {
  fs::path dir;
  Sandbox() {
    dir = fs::temp_directory_path() /
          ("blockade_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);
  }
  ~Sandbox() { fs::remove_all(dir); }

  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(dir / name) << text;
    return dir / name;
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

int run(const std::string& args) {
  const std::string cmd = std::string(BLOCKADE_EXE) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(slurp(p));
  for (std::string line; std::getline(is, line);) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("fig2b preset with the drive switched off gives zero photons") {
  Sandbox box;
  const auto overlay = box.write("o.json", R"({"eta": 0, "grid": {"points": 21}})");
  const auto out = box.dir / "dark.csv";
  REQUIRE(run("fig2b --config " + overlay.string() + " --out " + out.string()) == 0);
  const auto rows = read_csv(out);
  REQUIRE(rows.size() == 22u);
  CHECK(rows[0] == std::vector<std::string>{"delta_over_g", "mean_n"});
  for (std::size_t r = 1; r < rows.size(); ++r) CHECK(rows[r][1] == "0");
}

TEST_CASE("fig3a preset reports the headline correlations at zero delay") {
  Sandbox box;
  const auto overlay = box.write("o.json", R"({"tau": {"t_max": 0.02}})");
  const auto out = box.dir / "fig3a.csv";
  REQUIRE(run("fig3a --config " + overlay.string() + " --out " + out.string()) == 0);
  const auto rows = read_csv(out);
  REQUIRE(rows.size() == 12u);
  CHECK(rows[0] == std::vector<std::string>{"kappa_tau", "g2", "g3"});
  CHECK(std::stod(rows[1][1]) == doctest::Approx(1.75).epsilon(0.15 / 1.75));
  CHECK(std::stod(rows[1][2]) == doctest::Approx(0.5).epsilon(0.2));
}

TEST_CASE("reruns are byte-identical and metadata re-parses to the same config") {
  Sandbox box;
  const auto cfg_path = box.write("spec.json", R"({"phi_z": 0, "g": 15, "eta": 0.5,
      "n_max": 5, "grid": {"start": -2, "stop": 2, "points": 9}})");
  const auto a = box.dir / "a.csv";
  const auto b = box.dir / "b.csv";
  REQUIRE(run("spectrum --config " + cfg_path.string() + " --out " + a.string()) == 0);
  REQUIRE(run("spectrum --config " + cfg_path.string() + " --out " + b.string() +
              " --threads 3") == 0);
  CHECK(slurp(a) == slurp(b));
  REQUIRE(run("spectrum --config " + cfg_path.string() + " --out " + b.string()) == 0);
  CHECK(slurp(a) == slurp(b));

  const json meta = json::parse(slurp(blockade::metadata_path_for(a.string())));
  CHECK(meta["tool"]["version"] == blockade::kToolVersion);
  CHECK(meta["config"]["gamma"] == 1.0);
  CHECK(meta["config"]["n_max"] == 5);
  const blockade::ScenarioConfig again = blockade::parse_config(meta["config"]);
  CHECK(blockade::to_json(again) == meta["config"]);
  CHECK(again.output_path == a.string());

  // Re-running from the metadata alone reproduces the data file.
  const auto replay = box.write("replay.json", meta["config"].dump());
  const auto c = box.dir / "c.csv";
  REQUIRE(run("spectrum --config " + replay.string() + " --out " + c.string()) == 0);
  CHECK(slurp(a) == slurp(c));
}

TEST_CASE("exit codes") {
  Sandbox box;
  const auto good = box.write("good.json", R"({"scenario": "pnstat", "g": 15, "phi_z": 0,
      "eta": 1, "delta_over_g": -1.2247448713915890, "n_max": 4})");
  const auto bad = box.write("bad.json", R"({"scenario": "pnstat", "gg": 1})");
  const auto broken = box.write("broken.json", "{");
  const auto silent = box.write("silent.json", R"({"g": 15, "phi_z": 0, "n_max": 4,
      "grid": {"start": 0, "stop": 1e-9, "points": 2}})");

  CHECK(run("pnstat --config " + good.string() + " --out " + (box.dir / "p.csv").string()) == 0);
  CHECK(fs::exists(box.dir / "p.csv.meta.json"));
  CHECK(run("pnstat --config " + bad.string() + " --out x.csv") == 1);
  CHECK(run("pnstat --config " + broken.string() + " --out x.csv") == 1);
  CHECK(run("no_such_preset --out x.csv") == 1);
  CHECK(run("pnstat --out x.csv") == 1);
  CHECK(run("spectrum --config " + good.string() + " --out x.csv") == 1);  // scenario mismatch
  CHECK(run("pnstat --config " + good.string() + " --out " +
            (box.dir / "missing_dir" / "p.csv").string()) == 3);
  CHECK(run("rabi_scan --config " + silent.string() + " --out " +
            (box.dir / "r.csv").string()) == 2);
  const json meta = json::parse(slurp(box.dir / "r.csv.meta.json"));
  CHECK(meta["result"]["point_errors"].size() == 2u);
  CHECK(meta["status"] == "failed");
}

TEST_CASE("dressed scenario writes the level list") {
  Sandbox box;
  const auto out = box.dir / "levels.json";
  REQUIRE(run("levels_out_of_phase --out " + out.string()) == 0);
  const json levels = json::parse(slurp(out));
  REQUIRE(levels.size() == 11u);  // 3 + 4 + 4
  CHECK(levels[0]["n"] == 1);
  CHECK(levels[0]["energy_over_g"].get<double>() == doctest::Approx(-std::sqrt(2.0)));
  CHECK(levels.back()["energy_over_g"].get<double>() == doctest::Approx(std::sqrt(10.0)));
  CHECK(levels[0]["amplitudes"].size() == 3u);
}

TEST_CASE("number formatting") {
  CHECK(blockade::format_number(1.0) == "1");
  CHECK(blockade::format_number(-0.0) == "0");
  CHECK(blockade::format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(blockade::format_number(std::nan("")) == "nan");
}
