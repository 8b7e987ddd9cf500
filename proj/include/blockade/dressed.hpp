#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "blockade/hilbert.hpp"
#include "blockade/model.hpp"

namespace blockade {

// The two coupling geometries with a closed-form dressed ladder.
enum class Radiation {
  in_phase,      // phi_z = 0, g2 = +g
  out_of_phase,  // phi_z = pi, g2 = -g
};

// Maps phi_z in {0, pi} (tolerance 1e-12) to a Radiation; anything else
// throws Unsupported.
Radiation radiation_from_phase(double phi_z);
double phase_of(Radiation r);
std::string to_string(Radiation r);

// Collective basis of the n-excitation manifold, in block row order.
//   gg    = |gg, n>
//   plus  = (|eg, n-1> + |ge, n-1>)/sqrt2
//   minus = (|eg, n-1> - |ge, n-1>)/sqrt2
//   ee    = |ee, n-2>          (absent for n = 1)
enum class Collective { gg = 0, plus = 1, minus = 2, ee = 3 };

// Weak-pump Hamiltonian of the n-excitation manifold in the collective basis.
struct CollectiveBlock {
  int n = 1;
  Radiation radiation = Radiation::in_phase;
  double g = 0.0;
  Eigen::MatrixXd matrix;  // 3x3 for n = 1, 4x4 otherwise; units of kappa

  int size() const { return int(matrix.rows()); }
};

CollectiveBlock build_block(int n, double phi_z, double g);

struct DressedLevel {
  int n = 1;
  Radiation radiation = Radiation::in_phase;
  std::string label;  // "Psi-", "Phi0", "Psi0", "Psi+"
  double energy_over_g = 0.0;
  Eigen::VectorXd amplitudes;  // collective basis, block row order

  double energy(double g) const { return energy_over_g * g; }
};

// Levels sorted by energy. The uncoupled collective state is split off
// before diagonalization, so degenerate zero-energy levels are returned as
// the bright-manifold zero mode followed by the dark state. Amplitudes are
// normalized with the |gg,n> component >= 0 (first nonzero component > 0
// when that one vanishes).
std::vector<DressedLevel> eigensystem(const CollectiveBlock& block);

// Collective basis vector `state` of manifold n as a ket in the full space.
Eigen::VectorXcd collective_ket(const HilbertSpace& space, int n, Collective state);
// Dressed level as a ket in the full space. For out-of-phase blocks the
// full Hamiltonian couples |ee,n-2> to |-,n-1> with -sqrt(2(n-1)) g, so the
// block's ee amplitude is carried by -|ee,n-2>.
Eigen::VectorXcd embed(const HilbertSpace& space, const DressedLevel& level);
// <psi| rho |psi> for a normalized ket.
double population(const DensityMatrix& rho, const Eigen::VectorXcd& ket);

// Oscillation frequencies predicted from the dressed ladder (units of kappa).
//   fast            2 sqrt2 g, photon exchange |gg,1> <-> bright one-excitation state
//   slow_in_phase   sqrt(4 eta^2 + delta^2), delta = (sqrt2 - sqrt6/2) g
//   slow_out_phase  sqrt(4 (sqrt2 eta)^2 + Delta_a^2)
struct PredictedFrequencies {
  Radiation scenario = Radiation::in_phase;
  double fast = 0.0;
  double slow_in_phase = 0.0;
  double slow_out_phase = 0.0;

  double slow() const {
    return scenario == Radiation::in_phase ? slow_in_phase : slow_out_phase;
  }
  static double period(double frequency);
};

struct LabeledFrequency {
  std::string name;
  double frequency;
  double period;
};

PredictedFrequencies predicted_frequencies(const SystemParams& p, Radiation scenario);
std::vector<LabeledFrequency> labeled(const PredictedFrequencies& f);

}  // namespace blockade
