#include "blockade/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "blockade/dressed.hpp"
#include "blockade/observables.hpp"
#include "blockade/solvers.hpp"

namespace blockade {

using nlohmann::json;

namespace {

// Round-trips through the 12-digit text form so JSON output carries the
// same precision as the CSV files.
double round12(double v) {
  return std::isfinite(v) ? std::stod(format_number(v)) : v;
}

// max |a - b| / max(|a|, |b|) over points finite in both; 0 when both vanish.
double max_relative_change(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (!std::isfinite(a[i]) || !std::isfinite(b[i])) continue;
    const double scale = std::max(std::abs(a[i]), std::abs(b[i]));
    if (scale > 0.0) worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
  }
  return worst;
}

struct Outcome {
  std::string data;
  json meta = json::object();
  int exit_code = kExitOk;
};

json errors_json(const std::vector<PointError>& errors, const std::string& axis) {
  json out = json::array();
  for (const auto& e : errors)
    out.push_back({{"index", e.index}, {axis, round12(e.grid_value)}, {"error", e.message}});
  return out;
}

std::string csv(const std::vector<std::string>& header,
                const std::vector<std::vector<double>>& columns) {
  std::ostringstream os;
  for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
  os << "\n";
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c)
      os << (c ? "," : "") << format_number(columns[c][r]);
    os << "\n";
  }
  return os.str();
}

Outcome run_sweep(const ScenarioConfig& cfg, const RunOptions& options) {
  const bool spectrum = cfg.scenario == Scenario::spectrum;
  const std::vector<double> axis = linspace(cfg.grid->start, cfg.grid->stop, cfg.grid->points);
  auto scan = [&](int n_max) {
    const ScanOptions scan_options{n_max, options.threads};
    if (!spectrum) return rabi_scan(cfg.params, axis, scan_options);
    std::vector<double> deltas;
    for (double x : axis) deltas.push_back(x * cfg.params.g);
    return spectrum_scan(cfg.params, deltas, scan_options);
  };
  const SweepResult result = scan(cfg.n_max);
  const std::string axis_name = spectrum ? "delta_over_g" : "eta_over_kappa";
  const std::vector<std::string> names =
      spectrum ? std::vector<std::string>{"mean_n"} : std::vector<std::string>{"g2_0", "g3_0"};

  Outcome out;
  std::vector<std::vector<double>> columns{axis};
  for (const auto& n : names) columns.push_back(result.column(n));
  std::vector<std::string> header{axis_name};
  header.insert(header.end(), names.begin(), names.end());
  out.data = csv(header, columns);

  out.meta["points"] = axis.size();
  out.meta["failed_points"] = result.errors.size();
  out.meta["point_errors"] = errors_json(result.errors, axis_name);
  out.meta["max_steady_state_residual"] = result.max_residual;
  if (!spectrum) out.meta["delta_over_g"] = round12(two_photon_resonance(1.0));

  if (cfg.check_truncation) {
    const SweepResult wider = scan(cfg.n_max + 2);
    double change = 0.0;
    for (const auto& n : names)
      change = std::max(change, max_relative_change(result.column(n), wider.column(n)));
    out.meta["truncation_check"] = {{"n_max_alt", cfg.n_max + 2},
                                    {"max_relative_change", change}};
  }
  if (!axis.empty() && result.errors.size() == axis.size()) out.exit_code = kExitNumerical;
  return out;
}

struct PointRun {
  SteadyState ss;
  Liouvillian L;
};

PointRun solve_point(const SystemParams& p, int n_max) {
  const HilbertSpace space(n_max);
  Liouvillian L = build_liouvillian(build_hamiltonian(space, p), p);
  SteadyState ss = solve_steady_state(L);
  return {std::move(ss), std::move(L)};
}

Outcome run_correlation(const ScenarioConfig& cfg) {
  const TauSettings& tau = *cfg.tau;
  std::vector<int> orders;
  if (tau.combined) orders = {2, 3};
  else orders = {cfg.scenario == Scenario::g2tau ? 2 : 3};

  auto compute = [&](int n_max) {
    const PointRun run = solve_point(cfg.params, n_max);
    std::vector<CorrelationSeries> series;
    for (int order : orders)
      series.push_back(delayed_correlation(run.L, run.ss.rho, tau.propagation, order));
    return std::pair{run.ss.residual, series};
  };

  Outcome out;
  try {
    const auto [residual, series] = compute(cfg.n_max);
    std::vector<std::string> header{"kappa_tau"};
    std::vector<std::vector<double>> columns{series.front().tau};
    const double fast_period = PredictedFrequencies::period(
        predicted_frequencies(cfg.params, Radiation::in_phase).fast);
    json extracted = json::object();
    for (const auto& s : series) {
      const std::string name = s.order == 2 ? "g2" : "g3";
      header.push_back(name);
      columns.push_back(s.values);
      const auto fast = mean_maxima_spacing(s, 0.0, kFastWindow);
      const auto slow = cfg.params.g > 0.0 ? slow_period(s, fast_period) : std::nullopt;
      extracted[name] = {{"zero_delay", round12(s.values.front())},
                         {"mean_maxima_spacing_0_2", fast ? json(round12(*fast)) : json(nullptr)},
                         {"slow_period", slow ? json(round12(*slow)) : json(nullptr)}};
    }
    out.data = csv(header, columns);
    out.meta["steady_state_residual"] = residual;
    out.meta["extracted"] = extracted;
    if (tau.propagation.method == Integrator::fixed_rk4) {
      const HilbertSpace space(cfg.n_max);
      const Liouvillian L = build_liouvillian(build_hamiltonian(space, cfg.params), cfg.params);
      const double hmax = max_rk4_step(L, tau.propagation);
      const int substeps = int(std::ceil(tau.propagation.dt_out / hmax - 1e-9));
      out.meta["rk4_step"] = round12(tau.propagation.dt_out / substeps);
    }
    try {
      const Radiation r = radiation_from_phase(cfg.params.phi_z);
      json predicted = json::object();
      for (const auto& f : labeled(predicted_frequencies(cfg.params, r)))
        predicted[f.name] = {{"frequency", round12(f.frequency)}, {"period", round12(f.period)}};
      out.meta["predicted"] = predicted;
    } catch (const Unsupported&) {
      out.meta["predicted"] = nullptr;
    }

    if (cfg.check_truncation) {
      const auto wider = compute(cfg.n_max + 2).second;
      double change = 0.0;
      for (std::size_t k = 0; k < series.size(); ++k)
        change = std::max(change, max_relative_change(series[k].values, wider[k].values));
      out.meta["truncation_check"] = {{"n_max_alt", cfg.n_max + 2},
                                      {"max_relative_change", change}};
    }
  } catch (const Error& e) {
    out.meta["error"] = e.what();
    out.exit_code = kExitNumerical;
  }
  return out;
}

Outcome run_pnstat(const ScenarioConfig& cfg) {
  Outcome out;
  auto compute = [&](int n_max) {
    const PointRun run = solve_point(cfg.params, n_max);
    return std::pair{run.ss, photon_statistics(run.ss.rho)};
  };
  try {
    const auto [ss, stats] = compute(cfg.n_max);
    std::ostringstream os;
    os << "n,p_n,poisson_p_n,deviation\n";
    for (std::size_t n = 0; n < stats.p_n.size(); ++n) {
      os << n << "," << format_number(stats.p_n[n]) << "," << format_number(stats.poisson[n])
         << ","
         << (stats.deviation[n] ? format_number(*stats.deviation[n]) : std::string("nan"))
         << "\n";
    }
    out.data = os.str();
    out.meta["steady_state_residual"] = ss.residual;
    out.meta["mean_n"] = round12(stats.mean_n);
    for (int order : {2, 3}) {
      if (order > cfg.n_max) continue;
      try {
        out.meta[order == 2 ? "g2_0" : "g3_0"] = round12(correlation_zero(ss.rho, order));
      } catch (const UndefinedCorrelation&) {
        out.meta[order == 2 ? "g2_0" : "g3_0"] = nullptr;
      }
    }
    if (cfg.check_truncation) {
      const auto wider = compute(cfg.n_max + 2).second;
      out.meta["truncation_check"] = {
          {"n_max_alt", cfg.n_max + 2},
          {"max_relative_change", max_relative_change({stats.mean_n}, {wider.mean_n})}};
    }
  } catch (const Error& e) {
    out.meta["error"] = e.what();
    out.exit_code = kExitNumerical;
  }
  return out;
}

Outcome run_dressed(const ScenarioConfig& cfg) {
  Outcome out;
  json levels = json::array();
  for (int n = 1; n <= cfg.n_photons; ++n) {
    for (const DressedLevel& level : eigensystem(build_block(n, cfg.params.phi_z, cfg.params.g))) {
      json amps = json::array();
      for (int i = 0; i < level.amplitudes.size(); ++i) amps.push_back(round12(level.amplitudes(i)));
      levels.push_back({{"n", n},
                        {"label", level.label},
                        {"energy_over_g", round12(level.energy_over_g)},
                        {"amplitudes", amps}});
    }
  }
  out.data = levels.dump(2) + "\n";
  out.meta["radiation"] = to_string(radiation_from_phase(cfg.params.phi_z));
  out.meta["basis"] = {"|gg,n>", "|+,n-1>", "|-,n-1>", "|ee,n-2>"};
  return out;
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) return false;
  os << text;
  os.flush();
  return bool(os);
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string metadata_path_for(const std::string& data_path) { return data_path + ".meta.json"; }

RunReport run_scenario(const ScenarioConfig& cfg, const RunOptions& options) {
  RunReport report;
  if (cfg.output_path.empty()) {
    report.exit_code = kExitUsage;
    report.message = "no output path given";
    return report;
  }
  report.data_path = cfg.output_path;
  report.meta_path = metadata_path_for(cfg.output_path);

  Outcome outcome;
  try {
    switch (cfg.scenario) {
      case Scenario::spectrum:
      case Scenario::rabi_scan:
        outcome = run_sweep(cfg, options);
        break;
      case Scenario::g2tau:
      case Scenario::g3tau:
        outcome = run_correlation(cfg);
        break;
      case Scenario::pnstat:
        outcome = run_pnstat(cfg);
        break;
      case Scenario::dressed:
        outcome = run_dressed(cfg);
        break;
    }
  } catch (const Error& e) {
    outcome.exit_code = kExitNumerical;
    outcome.meta["error"] = e.what();
  }

  json meta;
  meta["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  meta["config"] = to_json(cfg);
  meta["n_max"] = cfg.n_max;
  meta["dim"] = cfg.scenario == Scenario::dressed ? 0 : HilbertSpace(cfg.n_max).dim();
  meta["couplings"] = {{"g1", cfg.params.g1()}, {"g2", cfg.params.g2()}};
  meta["result"] = outcome.meta;
  meta["status"] = outcome.exit_code == kExitOk ? "ok" : "failed";

  if (!outcome.data.empty() && !write_file(report.data_path, outcome.data)) {
    report.exit_code = kExitIo;
    report.message = "cannot write " + report.data_path;
    return report;
  }
  if (!write_file(report.meta_path, meta.dump(2) + "\n")) {
    report.exit_code = kExitIo;
    report.message = "cannot write " + report.meta_path;
    return report;
  }
  report.exit_code = outcome.exit_code;
  if (outcome.exit_code != kExitOk)
    report.message = outcome.meta.contains("error") ? outcome.meta["error"].get<std::string>()
                                                    : "every point failed";
  return report;
}

}  // namespace blockade
