#include "blockade/observables.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "blockade/error.hpp"

namespace blockade {

namespace {

constexpr double kMinMeanPhotons = 1e-12;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double mean_photons(const DensityMatrix& rho) {
  return expectation(number(rho.space()), rho).real();
}

// Runs body(i) for i in [0, n) on up to `threads` workers. Each index is
// handled by exactly one worker and results go to pre-sized slots.
template <class Body>
void parallel_for(std::size_t n, int threads, Body body) {
  const std::size_t workers =
      std::min<std::size_t>(n, std::size_t(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    });
}

struct PointResult {
  std::vector<double> values;
  double residual = 0.0;
  std::optional<std::string> error;
};

SweepResult assemble(std::string swept, const std::vector<double>& grid,
                     const std::vector<std::string>& names,
                     const std::vector<PointResult>& points) {
  SweepResult out;
  out.swept_parameter = std::move(swept);
  out.grid = grid;
  for (const auto& name : names) out.columns.push_back({name, {}});
  for (std::size_t i = 0; i < points.size(); ++i) {
    const PointResult& pt = points[i];
    for (std::size_t c = 0; c < names.size(); ++c)
      out.columns[c].values.push_back(pt.error ? kNaN : pt.values[c]);
    if (pt.error) out.errors.push_back({i, grid[i], *pt.error});
    else out.max_residual = std::max(out.max_residual, pt.residual);
  }
  return out;
}

}  // namespace

double correlation_zero(const DensityMatrix& rho, int order) {
  if (order < 1) throw InvalidArgument("correlation order must be >= 1");
  const HilbertSpace& space = rho.space();
  const double n = mean_photons(rho);
  if (!(n >= kMinMeanPhotons))
    throw UndefinedCorrelation("mean photon number " + std::to_string(n) +
                               " is too small for a normalized correlation");
  const Operator ak = power(annihilation(space), order);
  const double numerator = expectation(ak.adjoint() * ak, rho).real();
  return std::max(0.0, numerator) / std::pow(n, order);
}

double g2_zero(const DensityMatrix& rho) { return correlation_zero(rho, 2); }
double g3_zero(const DensityMatrix& rho) { return correlation_zero(rho, 3); }

CorrelationSeries delayed_correlation(const Liouvillian& L, const DensityMatrix& rho_ss,
                                      const PropagationSpec& spec, int order) {
  if (order != 2 && order != 3)
    throw InvalidArgument("delayed correlation order must be 2 or 3");
  const double n_ss = mean_photons(rho_ss);
  if (!(n_ss >= kMinMeanPhotons))
    throw UndefinedCorrelation("steady state has no photons to correlate");
  const ConditionalState cond = conditional_state(rho_ss, annihilation(L.space()), order - 1);
  const Operator n_op = number(L.space());
  const double denom = std::pow(n_ss, order);

  CorrelationSeries series;
  series.order = order;
  series.tau.reserve(spec.sample_count());
  series.values.reserve(spec.sample_count());
  propagate(L, cond.state, spec, [&](double t, const DensityMatrix& rho) {
    series.tau.push_back(t);
    series.values.push_back(expectation(n_op, rho).real() / denom);
  });
  return series;
}

CorrelationSeries g2_tau(const Liouvillian& L, const DensityMatrix& rho_ss,
                         const PropagationSpec& spec) {
  return delayed_correlation(L, rho_ss, spec, 2);
}

CorrelationSeries g3_tau(const Liouvillian& L, const DensityMatrix& rho_ss,
                         const PropagationSpec& spec) {
  return delayed_correlation(L, rho_ss, spec, 3);
}

PhotonStatistics photon_statistics(const DensityMatrix& rho) {
  const HilbertSpace& space = rho.space();
  PhotonStatistics stats;
  stats.p_n.assign(space.n_max() + 1, 0.0);
  for (int i = 0; i < space.dim(); ++i)
    stats.p_n[space.fock_of(i)] += rho.matrix()(i, i).real();
  for (int n = 0; n <= space.n_max(); ++n) stats.mean_n += n * stats.p_n[n];

  const double mean = stats.mean_n;
  for (int n = 0; n <= space.n_max(); ++n) {
    // log-space avoids overflow of mean^n / n!
    const double poisson =
        mean > 0.0 ? std::exp(-mean + n * std::log(mean) - std::lgamma(n + 1.0))
                   : (n == 0 ? 1.0 : 0.0);
    stats.poisson.push_back(poisson);
    if (poisson >= kPoissonFloor) stats.deviation.emplace_back((stats.p_n[n] - poisson) / poisson);
    else stats.deviation.emplace_back(std::nullopt);
  }
  return stats;
}

// ---------------------------------------------------------------------------

const std::vector<double>& SweepResult::column(const std::string& name) const {
  for (const auto& c : columns)
    if (c.name == name) return c.values;
  throw InvalidArgument("sweep has no column '" + name + "'");
}

std::vector<double> linspace(double start, double stop, int points) {
  if (points < 2) throw InvalidArgument("a grid needs at least 2 points");
  std::vector<double> grid(points);
  const double step = (stop - start) / (points - 1);
  for (int i = 0; i < points; ++i) grid[i] = start + i * step;
  grid.back() = stop;
  return grid;
}

SweepResult spectrum_scan(const SystemParams& base, const std::vector<double>& delta_grid,
                          const ScanOptions& options) {
  if (delta_grid.empty()) throw InvalidArgument("spectrum scan grid is empty");
  const HilbertSpace space(options.n_max);
  std::vector<PointResult> points(delta_grid.size());
  parallel_for(delta_grid.size(), options.threads, [&](std::size_t i) {
    try {
      const SystemParams p = base.with_detuning(delta_grid[i]);
      const SteadyState ss = solve_steady_state(build_liouvillian(build_hamiltonian(space, p), p));
      points[i].values = {mean_photons(ss.rho)};
      points[i].residual = ss.residual;
    } catch (const Error& e) {
      points[i].error = e.what();
    }
  });
  return assemble("delta", delta_grid, {"mean_n"}, points);
}

SweepResult rabi_scan(const SystemParams& base, const std::vector<double>& eta_grid,
                      const ScanOptions& options) {
  if (eta_grid.empty()) throw InvalidArgument("rabi scan grid is empty");
  const HilbertSpace space(options.n_max);
  const SystemParams resonant = base.with_detuning(two_photon_resonance(base.g));
  std::vector<PointResult> points(eta_grid.size());
  parallel_for(eta_grid.size(), options.threads, [&](std::size_t i) {
    try {
      SystemParams p = resonant;
      p.eta = eta_grid[i];
      const SteadyState ss = solve_steady_state(build_liouvillian(build_hamiltonian(space, p), p));
      points[i].values = {mean_photons(ss.rho), g2_zero(ss.rho), g3_zero(ss.rho)};
      points[i].residual = ss.residual;
    } catch (const Error& e) {
      points[i].error = e.what();
    }
  });
  return assemble("eta", eta_grid, {"mean_n", "g2_0", "g3_0"}, points);
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> local_maxima(const std::vector<double>& tau,
                                      const std::vector<double>& values, double t_lo,
                                      double t_hi) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    if (tau[i] < t_lo || tau[i] > t_hi) continue;
    if (values[i] > values[i - 1] && values[i] >= values[i + 1]) out.push_back(i);
  }
  return out;
}

namespace {

std::optional<double> mean_spacing(const std::vector<double>& tau,
                                   const std::vector<std::size_t>& idx) {
  if (idx.size() < 2) return std::nullopt;
  return (tau[idx.back()] - tau[idx.front()]) / double(idx.size() - 1);
}

}  // namespace

std::optional<double> mean_maxima_spacing(const CorrelationSeries& series, double t_lo,
                                          double t_hi) {
  return mean_spacing(series.tau, local_maxima(series.tau, series.values, t_lo, t_hi));
}

CorrelationSeries boxcar(const CorrelationSeries& series, double width) {
  if (series.tau.size() < 2) throw InvalidArgument("series too short to smooth");
  const double dt = series.tau[1] - series.tau[0];
  const std::size_t half = std::size_t(std::lround(width / dt)) / 2;
  CorrelationSeries out;
  out.order = series.order;
  if (series.values.size() < 2 * half + 1) return out;
  // Running sum over the window [i - half, i + half].
  double sum = 0.0;
  for (std::size_t k = 0; k < 2 * half + 1; ++k) sum += series.values[k];
  const double count = double(2 * half + 1);
  for (std::size_t i = half; i + half < series.values.size(); ++i) {
    if (i > half) sum += series.values[i + half] - series.values[i - half - 1];
    out.tau.push_back(series.tau[i]);
    out.values.push_back(sum / count);
  }
  return out;
}

std::optional<double> slow_period(const CorrelationSeries& series, double width) {
  const CorrelationSeries smooth = boxcar(series, width);
  if (smooth.tau.size() < 3) return std::nullopt;
  const double dt = smooth.tau[1] - smooth.tau[0];
  const std::size_t reach = std::max<std::size_t>(1, std::size_t(std::lround(width / dt)));
  const auto& v = smooth.values;
  std::vector<std::size_t> peaks;
  for (std::size_t i = reach; i + reach < v.size(); ++i) {
    const auto first = v.begin() + std::ptrdiff_t(i - reach);
    const auto last = v.begin() + std::ptrdiff_t(i + reach + 1);
    const auto hi = std::max_element(first, last);
    // First occurrence of the window maximum, and not a flat window.
    if (hi - v.begin() == std::ptrdiff_t(i) && *std::min_element(first, last) < *hi)
      peaks.push_back(i);
  }
  return mean_spacing(smooth.tau, peaks);
}

}  // namespace blockade
