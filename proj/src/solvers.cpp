#include "blockade/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/SparseLU>

#include "blockade/error.hpp"

namespace blockade {

namespace {

using Triplet = Eigen::Triplet<Complex>;

DenseMatrix hermitize(const DenseMatrix& m) { return 0.5 * (m + m.adjoint()); }

// L with equation row `row` replaced by the trace constraint.
SparseMatrix trace_constrained(const SparseMatrix& super, int dim, int row) {
  std::vector<Triplet> t;
  t.reserve(super.nonZeros() + dim);
  for (int k = 0; k < super.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(super, k); it; ++it)
      if (it.row() != row) t.emplace_back(int(it.row()), int(it.col()), it.value());
  for (int i = 0; i < dim; ++i) t.emplace_back(row, i * dim + i, 1.0);
  SparseMatrix m(super.rows(), super.cols());
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

// Dense copy of one row of L.
Eigen::VectorXcd row_of(const SparseMatrix& super, int row) {
  Eigen::VectorXcd r = Eigen::VectorXcd::Zero(super.cols());
  for (int k = 0; k < super.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(super, k); it; ++it)
      if (it.row() == row) r(it.col()) = it.value();
  return r;
}

// Solves L rho = 0 with tr rho = 1 twice: once with the first equation
// replaced by the trace row (LU) and once with the last diagonal equation
// replaced instead. The second system differs from the first by a rank-2
// update and is solved from the same factorization (Woodbury).
// Returns false when either system is singular.
bool solve_trace_pair(const SparseMatrix& super, int dim, int last,
                      Eigen::VectorXcd& first, Eigen::VectorXcd& second) {
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(trace_constrained(super, dim, 0));
  if (lu.info() != Eigen::Success) return false;
  const Eigen::Index n = super.rows();
  Eigen::MatrixXcd unit = Eigen::MatrixXcd::Zero(n, 2);
  unit(0, 0) = 1.0;
  unit(last, 1) = 1.0;
  const Eigen::MatrixXcd z = lu.solve(unit);
  if (lu.info() != Eigen::Success || !z.allFinite()) return false;
  first = z.col(0);

  Eigen::VectorXcd trace_row = Eigen::VectorXcd::Zero(n);
  for (int i = 0; i < dim; ++i) trace_row(i * dim + i) = 1.0;
  Eigen::MatrixXcd v(2, n);
  v.row(0) = (row_of(super, 0) - trace_row).transpose();
  v.row(1) = (trace_row - row_of(super, last)).transpose();
  const Eigen::Matrix2cd cap = Eigen::Matrix2cd::Identity() + v * z;
  const double cap_scale = std::max(1.0, cap.cwiseAbs().maxCoeff());
  if (std::abs(cap.determinant()) < 1e-12 * cap_scale * cap_scale) return false;
  const Eigen::VectorXcd rhs_solution = z.col(1);
  second = rhs_solution - z * cap.partialPivLu().solve(v * rhs_solution);
  return second.allFinite();
}

}  // namespace

// ---------------------------------------------------------------------------
// Steady state

SteadyState solve_steady_state(const Liouvillian& L) {
  const int d = L.dim();
  const SparseMatrix& super = L.matrix();
  Eigen::VectorXcd first, second;
  const int last_diag = (d - 1) * d + (d - 1);
  if (!solve_trace_pair(super, d, last_diag, first, second))
    throw AmbiguousSteadyState("Liouvillian null space is degenerate (singular system)");

  const double scale = std::max(1.0, first.cwiseAbs().maxCoeff());
  if ((first - second).cwiseAbs().maxCoeff() > 1e-8 * scale)
    throw AmbiguousSteadyState(
        "Liouvillian null space is degenerate (trace-row solutions disagree)");

  DenseMatrix rho = hermitize(unvectorize(first, d));
  rho /= rho.trace().real();
  const double residual = (super * vectorize(rho)).cwiseAbs().maxCoeff();
  if (!(residual <= kSteadyStateResidualTol))
    throw ConvergenceError("steady-state residual " + std::to_string(residual) +
                           " exceeds tolerance");
  DensityMatrix state(L.space(), std::move(rho));
  if (const double lo = state.min_eigenvalue(); lo < DensityMatrix::kPositivityTol)
    throw ConvergenceError("steady state is not positive (min eigenvalue " +
                           std::to_string(lo) + ")");
  return {std::move(state), residual};
}

DensityMatrix steady_state(const Liouvillian& L) { return solve_steady_state(L).rho; }

// ---------------------------------------------------------------------------
// Propagation

void PropagationSpec::validate() const {
  if (!(dt_out > 0.0) || !std::isfinite(dt_out))
    throw InvalidArgument("dt_out must be > 0");
  if (!(t_max >= dt_out) || !std::isfinite(t_max))
    throw InvalidArgument("t_max must be >= dt_out");
  if (method == Integrator::adaptive && (!(rel_tol > 0.0) || !(abs_tol > 0.0)))
    throw InvalidArgument("adaptive tolerances must be > 0");
}

int PropagationSpec::sample_count() const {
  return int(std::floor(t_max / dt_out + 1e-9)) + 1;
}

double max_rk4_step(const Liouvillian& L, const PropagationSpec& spec) {
  double h = spec.dt_out;
  const double g = L.params().g;
  if (g > 0.0) h = std::min(h, 0.02 / (2.0 * std::numbers::sqrt2 * g));
  const double radius = L.spectral_radius_bound();
  if (radius > 0.0) h = std::min(h, 1.0 / radius);
  return h;
}

namespace {

using Emit = std::function<void(int, const Eigen::VectorXcd&)>;

void run_rk4(const Liouvillian& L, Eigen::VectorXcd x, const PropagationSpec& spec,
             const Emit& emit) {
  const int samples = spec.sample_count();
  const int substeps = int(std::ceil(spec.dt_out / max_rk4_step(L, spec) - 1e-9));
  const double h = spec.dt_out / substeps;
  const Eigen::Index n = x.size();
  Eigen::VectorXcd k1(n), k2(n), k3(n), k4(n), tmp(n);

  emit(0, x);
  for (int s = 1; s < samples; ++s) {
    for (int k = 0; k < substeps; ++k) {
      L.apply_hermitian(x, k1);
      tmp = x + (0.5 * h) * k1;
      L.apply_hermitian(tmp, k2);
      tmp = x + (0.5 * h) * k2;
      L.apply_hermitian(tmp, k3);
      tmp = x + h * k3;
      L.apply_hermitian(tmp, k4);
      x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    emit(s, x);
  }
}

// Dormand-Prince 5(4) with embedded error control; output times are hit
// exactly by clipping the step.
void run_adaptive(const Liouvillian& L, Eigen::VectorXcd x, const PropagationSpec& spec,
                  const Emit& emit) {
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const int samples = spec.sample_count();
  const Eigen::Index n = x.size();
  Eigen::VectorXcd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), next(n), err(n);
  double t = 0.0;
  double h = std::min(spec.dt_out, max_rk4_step(L, spec));
  emit(0, x);
  L.apply_hermitian(x, k1);
  for (int s = 1; s < samples; ++s) {
    const double target = s * spec.dt_out;
    while (t < target - 1e-14 * std::max(1.0, target)) {
      const bool clipped = t + h >= target;
      const double step = clipped ? target - t : h;
      if (step < 1e-14 * std::max(1.0, t))
        throw IntegrationError("adaptive step size underflow at t = " + std::to_string(t));

      L.apply_hermitian(x + step * (a21 * k1), k2);
      L.apply_hermitian(x + step * (a31 * k1 + a32 * k2), k3);
      L.apply_hermitian(x + step * (a41 * k1 + a42 * k2 + a43 * k3), k4);
      L.apply_hermitian(x + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), k5);
      L.apply_hermitian(x + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5),
                        k6);
      next = x + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      L.apply_hermitian(next, k7);
      err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

      double ratio = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double scale =
            spec.abs_tol + spec.rel_tol * std::max(std::abs(x(i)), std::abs(next(i)));
        ratio = std::max(ratio, std::abs(err(i)) / scale);
      }

      if (ratio <= 1.0) {
        t = clipped ? target : t + step;
        x.swap(next);
        k1.swap(k7);
      }
      const double factor =
          ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
      // A clipped accepted step says nothing about the natural step size.
      if (!(clipped && ratio <= 1.0)) h = step * factor;
    }
    emit(s, x);
  }
}

}  // namespace

void propagate(const Liouvillian& L, const DensityMatrix& rho0,
               const PropagationSpec& spec, const SampleObserver& observer) {
  spec.validate();
  require_same_space(L.space(), rho0.space());
  const StateKind kind = rho0.kind();
  const int d = L.dim();
  auto emit = [&](int s, const Eigen::VectorXcd& x) {
    observer(s * spec.dt_out, DensityMatrix(L.space(), unvectorize(x, d), kind));
  };
  Eigen::VectorXcd start = vectorize(hermitize(rho0.matrix()));
  if (spec.method == Integrator::fixed_rk4) run_rk4(L, std::move(start), spec, emit);
  else run_adaptive(L, std::move(start), spec, emit);
}

TimeSeries propagate(const Liouvillian& L, const DensityMatrix& rho0,
                     const PropagationSpec& spec) {
  TimeSeries series;
  propagate(L, rho0, spec, [&](double t, const DensityMatrix& rho) {
    series.times.push_back(t);
    series.states.push_back(rho);
  });
  return series;
}

// ---------------------------------------------------------------------------

ConditionalState conditional_state(const DensityMatrix& rho, const Operator& jump,
                                   int order) {
  if (order != 1 && order != 2)
    throw InvalidArgument("detection order must be 1 or 2, got " + std::to_string(order));
  require_same_space(rho.space(), jump.space());
  const SparseMatrix c = power(jump, order).matrix();
  DenseMatrix out = c * rho.matrix();
  out = out * c.adjoint();
  out = hermitize(out);
  const double norm = out.trace().real();
  if (!(norm >= 1e-14))
    throw NoDetectablePhotons("conditional state norm " + std::to_string(norm) +
                              " is below 1e-14");
  return {DensityMatrix(rho.space(), std::move(out), StateKind::conditional), norm};
}

}  // namespace blockade
