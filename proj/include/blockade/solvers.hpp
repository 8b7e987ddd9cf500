#pragma once

#include <functional>
#include <vector>

#include "blockade/hilbert.hpp"
#include "blockade/model.hpp"

namespace blockade {

enum class Integrator { fixed_rk4, adaptive };

// Times are in units of 1/kappa.
struct PropagationSpec {
  double t_max = 1.0;
  double dt_out = 0.01;
  Integrator method = Integrator::fixed_rk4;
  double rel_tol = 1e-10;  // adaptive only
  double abs_tol = 1e-13;  // adaptive only

  void validate() const;
  // Output samples at 0, dt_out, ..., floor(t_max/dt_out) * dt_out.
  int sample_count() const;
};

// Largest RK4 step allowed for L and spec: min(dt_out, 0.02 / (2 sqrt2 g),
// 1 / spectral-radius bound).
double max_rk4_step(const Liouvillian& L, const PropagationSpec& spec);

struct SteadyState {
  DensityMatrix rho;
  double residual;  // max |L vec(rho)|
};

// Unique stationary state of L, from L vec(rho) = 0 with the rho_00 equation
// replaced by tr(rho) = 1. A second solve with the last diagonal equation
// replaced instead must agree; otherwise the null space is degenerate and
// AmbiguousSteadyState is thrown. Residual above 1e-10 or a non-positive
// result throws ConvergenceError.
SteadyState solve_steady_state(const Liouvillian& L);
DensityMatrix steady_state(const Liouvillian& L);

inline constexpr double kSteadyStateResidualTol = 1e-10;

// Called once per output sample, in time order.
using SampleObserver = std::function<void(double t, const DensityMatrix& rho)>;

// Integrates d rho/dt = L[rho] from rho0 (Hermitian; unnormalized allowed).
// Samples keep the StateKind of rho0.
void propagate(const Liouvillian& L, const DensityMatrix& rho0,
               const PropagationSpec& spec, const SampleObserver& observer);

struct TimeSeries {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
};

TimeSeries propagate(const Liouvillian& L, const DensityMatrix& rho0,
                     const PropagationSpec& spec);

struct ConditionalState {
  DensityMatrix state;  // unnormalized
  double norm;          // its trace
};

// jump^order rho (jump^dag)^order for order 1 or 2. Throws NoDetectablePhotons
// when the trace is below 1e-14.
ConditionalState conditional_state(const DensityMatrix& rho, const Operator& jump,
                                   int order);

}  // namespace blockade
