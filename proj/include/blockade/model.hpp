#pragma once

#include <vector>

#include "blockade/hilbert.hpp"

namespace blockade {

// Model rates and detunings. Everything is measured in units of the cavity
// decay rate, so kappa is pinned to 1.
struct SystemParams {
  double g = 0.0;          // atom-cavity coupling
  double phi_z = 0.0;      // relative coupling phase of atom 2 (radians)
  double eta = 0.0;        // drive Rabi frequency on both atoms
  double delta_a = 0.0;    // omega_L - omega_A
  double delta_cav = 0.0;  // omega_L - omega_cav
  double gamma = 1.0;      // atomic decay rate
  double kappa = 1.0;

  double g1() const { return g; }
  double g2() const;

  // Throws InvalidArgument on negative rates, non-finite values or kappa != 1.
  void validate() const;

  // Sets delta_a = delta_cav = delta.
  SystemParams with_detuning(double delta) const;

  friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

// Drive detuning at which two drive photons reach the lower two-excitation
// dressed level, Delta = -sqrt(6) g / 2.
double two_photon_resonance(double g);

Operator build_hamiltonian(const HilbertSpace& space, const SystemParams& p);

// Lindblad generator
//   L[rho] = -i[H, rho] + kappa (2 a rho a^dag - {a^dag a, rho})
//            + gamma sum_j (2 s_j rho s_j^dag - {s_j^dag s_j, rho})
// (the factor 2 on the jump term and no 1/2 on the anticommutator).
//
// The superoperator acts on column-stacked vec(rho), so A rho B maps to
// (B^T (x) A). The same map is also kept in operator form,
// L[rho] = K rho + rho K^dag + sum_c 2 r_c c rho c^dag with
// K = -iH - sum_c r_c c^dag c, which is what the propagators use.
class Liouvillian {
 public:
  struct Jump {
    SparseMatrix op;
    SparseMatrix op_dag;
    double rate;
  };

  Liouvillian(Operator hamiltonian, const SystemParams& params);

  const HilbertSpace& space() const { return hamiltonian_.space(); }
  const SystemParams& params() const { return params_; }
  const Operator& hamiltonian() const { return hamiltonian_; }
  const SparseMatrix& matrix() const { return super_; }
  int dim() const { return hamiltonian_.dim(); }

  // L[rho] for an arbitrary square matrix.
  DenseMatrix apply(const DenseMatrix& rho) const;
  // Superoperator action on column-stacked vec(rho), valid only for Hermitian
  // rho: rows of the upper triangle are computed and mirrored, so the result
  // is exactly Hermitian. `out` must not alias `vec_rho`.
  void apply_hermitian(const Eigen::VectorXcd& vec_rho, Eigen::VectorXcd& out) const;

  // Gershgorin bound on the spectral radius of the superoperator.
  double spectral_radius_bound() const;

 private:
  Operator hamiltonian_;
  SystemParams params_;
  SparseMatrix effective_;  // K
  std::vector<Jump> jumps_;
  SparseMatrix super_;

  // Upper-triangle rows of super_ in CSR form with split real/imag parts.
  struct UpperRows {
    std::vector<int> target;  // vec index (i, j), i <= j
    std::vector<int> mirror;  // vec index (j, i)
    std::vector<int> start;
    std::vector<int> column;
    std::vector<double> re, im;
  } upper_;
};

Liouvillian build_liouvillian(const Operator& hamiltonian, const SystemParams& p);

// Column-stacking vectorization helpers.
Eigen::VectorXcd vectorize(const DenseMatrix& m);
DenseMatrix unvectorize(const Eigen::VectorXcd& v, int dim);

}  // namespace blockade
