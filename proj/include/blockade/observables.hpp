#pragma once

#include <optional>
#include <string>
#include <vector>

#include "blockade/hilbert.hpp"
#include "blockade/model.hpp"
#include "blockade/solvers.hpp"

namespace blockade {

// Normalized zero-delay correlation <a^dag^k a^k> / <a^dag a>^k.
// Throws UndefinedCorrelation when <a^dag a> < 1e-12.
double correlation_zero(const DensityMatrix& rho, int order);
double g2_zero(const DensityMatrix& rho);
double g3_zero(const DensityMatrix& rho);

struct CorrelationSeries {
  int order = 2;
  std::vector<double> tau;     // 1/kappa, starts at 0
  std::vector<double> values;
};

// Delayed correlations from the quantum regression theorem: the conditional
// state a^m rho_ss a^dag^m (m = order - 1, all m detections at time t) is
// propagated under L and <a^dag a>(tau) is divided by <a^dag a>_ss^order.
// At large tau g2 tends to 1 and g3 tends to g2(0).
CorrelationSeries delayed_correlation(const Liouvillian& L, const DensityMatrix& rho_ss,
                                      const PropagationSpec& spec, int order);
CorrelationSeries g2_tau(const Liouvillian& L, const DensityMatrix& rho_ss,
                         const PropagationSpec& spec);
CorrelationSeries g3_tau(const Liouvillian& L, const DensityMatrix& rho_ss,
                         const PropagationSpec& spec);

struct PhotonStatistics {
  double mean_n = 0.0;
  std::vector<double> p_n;
  std::vector<double> poisson;  // same-mean Poisson distribution
  // (p_n - poisson_n) / poisson_n; empty where poisson_n < 1e-300.
  std::vector<std::optional<double>> deviation;
};

inline constexpr double kPoissonFloor = 1e-300;

PhotonStatistics photon_statistics(const DensityMatrix& rho);

// ---------------------------------------------------------------------------
// Parameter scans

struct ScanOptions {
  int n_max = 8;
  int threads = 1;
};

struct PointError {
  std::size_t index;
  double grid_value;
  std::string message;
};

struct SweepColumn {
  std::string name;
  std::vector<double> values;  // NaN at failed points
};

struct SweepResult {
  std::string swept_parameter;  // "delta" or "eta"
  std::vector<double> grid;
  std::vector<SweepColumn> columns;
  std::vector<PointError> errors;
  double max_residual = 0.0;  // worst steady-state residual over good points

  const std::vector<double>& column(const std::string& name) const;
};

// Steady-state <a^dag a> with delta_a = delta_cav = grid value (units of kappa).
// Column: mean_n.
SweepResult spectrum_scan(const SystemParams& base, const std::vector<double>& delta_grid,
                          const ScanOptions& options = {});

// Steady-state correlations versus eta at the two-photon resonance
// delta_a = delta_cav = -sqrt6 g / 2. Columns: mean_n, g2_0, g3_0.
SweepResult rabi_scan(const SystemParams& base, const std::vector<double>& eta_grid,
                      const ScanOptions& options = {});

// Evenly spaced grid including both endpoints.
std::vector<double> linspace(double start, double stop, int points);

// ---------------------------------------------------------------------------
// Oscillation-period extraction

// Indices i with v[i-1] < v[i] >= v[i+1] and tau[i] in [t_lo, t_hi].
std::vector<std::size_t> local_maxima(const std::vector<double>& tau,
                                      const std::vector<double>& values, double t_lo,
                                      double t_hi);

// Mean spacing of successive local maxima inside [t_lo, t_hi];
// nullopt with fewer than two maxima.
std::optional<double> mean_maxima_spacing(const CorrelationSeries& series, double t_lo,
                                          double t_hi);

// Centered moving average over `width` (1/kappa). Only points with a full
// window are kept.
CorrelationSeries boxcar(const CorrelationSeries& series, double width);

// Period of the slow modulation: boxcar the series with `width` (one fast
// period), keep points that are the maximum of the smoothed series within
// +-width, and return the mean spacing of those maxima.
std::optional<double> slow_period(const CorrelationSeries& series, double width);

inline constexpr double kFastWindow = 2.0;

}  // namespace blockade
