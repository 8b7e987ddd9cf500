#include "blockade/dressed.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "blockade/error.hpp"

namespace blockade {

namespace {

constexpr double kPhaseTol = 1e-12;

Eigen::VectorXd canonical_sign(Eigen::VectorXd v) {
  for (int i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-14) {
      if (v(i) < 0.0) v = -v;
      break;
    }
  }
  return v;
}

}  // namespace

Radiation radiation_from_phase(double phi_z) {
  if (std::abs(phi_z) <= kPhaseTol) return Radiation::in_phase;
  if (std::abs(phi_z - std::numbers::pi) <= kPhaseTol) return Radiation::out_of_phase;
  throw Unsupported("collective blocks exist only for phi_z = 0 or pi, got " +
                    std::to_string(phi_z));
}

double phase_of(Radiation r) {
  return r == Radiation::in_phase ? 0.0 : std::numbers::pi;
}

std::string to_string(Radiation r) {
  return r == Radiation::in_phase ? "in_phase" : "out_of_phase";
}

CollectiveBlock build_block(int n, double phi_z, double g) {
  if (n < 1) throw InvalidArgument("photon-space index n must be >= 1");
  CollectiveBlock block;
  block.n = n;
  block.radiation = radiation_from_phase(phi_z);
  block.g = g;

  const int size = n == 1 ? 3 : 4;
  const int bright = int(block.radiation == Radiation::in_phase ? Collective::plus
                                                                : Collective::minus);
  block.matrix = Eigen::MatrixXd::Zero(size, size);
  const double upper = std::sqrt(2.0 * n) * g;
  block.matrix(int(Collective::gg), bright) = upper;
  block.matrix(bright, int(Collective::gg)) = upper;
  if (n > 1) {
    const double lower = std::sqrt(2.0 * (n - 1)) * g;
    block.matrix(int(Collective::ee), bright) = lower;
    block.matrix(bright, int(Collective::ee)) = lower;
  }
  return block;
}

std::vector<DressedLevel> eigensystem(const CollectiveBlock& block) {
  const int size = block.size();
  const int bright = int(block.radiation == Radiation::in_phase ? Collective::plus
                                                                : Collective::minus);
  const int dark = int(block.radiation == Radiation::in_phase ? Collective::minus
                                                              : Collective::plus);

  // Coupled sub-block in units of g: (gg, bright[, ee]).
  std::vector<int> coupled{int(Collective::gg), bright};
  if (size == 4) coupled.push_back(int(Collective::ee));
  const int m = int(coupled.size());
  Eigen::MatrixXd sub(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) sub(i, j) = block.matrix(coupled[i], coupled[j]);
  if (block.g > 0.0) sub /= block.g;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sub);
  std::vector<DressedLevel> levels;
  for (int k = 0; k < m; ++k) {
    DressedLevel level;
    level.n = block.n;
    level.radiation = block.radiation;
    level.energy_over_g = es.eigenvalues()(k);
    Eigen::VectorXd amps = Eigen::VectorXd::Zero(size);
    for (int i = 0; i < m; ++i) amps(coupled[i]) = es.eigenvectors()(i, k);
    level.amplitudes = canonical_sign(amps);
    levels.push_back(std::move(level));
  }
  DressedLevel dark_level;
  dark_level.n = block.n;
  dark_level.radiation = block.radiation;
  dark_level.energy_over_g = 0.0;
  dark_level.amplitudes = Eigen::VectorXd::Unit(size, dark);
  levels.push_back(std::move(dark_level));

  // Stable sort keeps bright-manifold levels ahead of the dark state on ties.
  std::stable_sort(levels.begin(), levels.end(), [](const auto& a, const auto& b) {
    return a.energy_over_g < b.energy_over_g - 1e-12;
  });

  for (auto& level : levels) {
    const bool is_dark = std::abs(level.amplitudes(dark)) > 0.5;
    if (is_dark) level.label = block.n == 1 ? "Phi0" : "Psi0";
    else if (level.energy_over_g < -1e-12) level.label = "Psi-";
    else if (level.energy_over_g > 1e-12) level.label = "Psi+";
    else level.label = "Phi0";
  }
  return levels;
}

Eigen::VectorXcd collective_ket(const HilbertSpace& space, int n, Collective state) {
  Eigen::VectorXcd ket = Eigen::VectorXcd::Zero(space.dim());
  const double r = 1.0 / std::numbers::sqrt2;
  auto check = [&](int fock) {
    if (fock < 0 || fock > space.n_max())
      throw InvalidArgument("collective state outside the truncated space");
  };
  switch (state) {
    case Collective::gg:
      check(n);
      ket(space.index(n, 0, 0)) = 1.0;
      break;
    case Collective::plus:
    case Collective::minus: {
      check(n - 1);
      const double sign = state == Collective::plus ? 1.0 : -1.0;
      ket(space.index(n - 1, 1, 0)) = r;
      ket(space.index(n - 1, 0, 1)) = sign * r;
      break;
    }
    case Collective::ee:
      if (n < 2) throw InvalidArgument("|ee, n-2> needs n >= 2");
      check(n - 2);
      ket(space.index(n - 2, 1, 1)) = 1.0;
      break;
  }
  return ket;
}

Eigen::VectorXcd embed(const HilbertSpace& space, const DressedLevel& level) {
  Eigen::VectorXcd ket = Eigen::VectorXcd::Zero(space.dim());
  for (int i = 0; i < level.amplitudes.size(); ++i) {
    if (level.amplitudes(i) == 0.0) continue;
    const bool flip = Collective(i) == Collective::ee && level.radiation == Radiation::out_of_phase;
    ket += (flip ? -1.0 : 1.0) * level.amplitudes(i) * collective_ket(space, level.n, Collective(i));
  }
  return ket;
}

double population(const DensityMatrix& rho, const Eigen::VectorXcd& ket) {
  if (ket.size() != rho.space().dim())
    throw InvalidArgument("ket dimension does not match state");
  return (ket.adjoint() * rho.matrix() * ket)(0, 0).real();
}

double PredictedFrequencies::period(double frequency) {
  return 2.0 * std::numbers::pi / frequency;
}

PredictedFrequencies predicted_frequencies(const SystemParams& p, Radiation scenario) {
  p.validate();
  const double sqrt2 = std::numbers::sqrt2;
  const double sqrt6 = std::sqrt(6.0);
  PredictedFrequencies f;
  f.scenario = scenario;
  f.fast = 2.0 * sqrt2 * p.g;
  const double delta = (sqrt2 - sqrt6 / 2.0) * p.g;
  f.slow_in_phase = std::sqrt(4.0 * p.eta * p.eta + delta * delta);
  const double eta_c = sqrt2 * p.eta;
  f.slow_out_phase = std::sqrt(4.0 * eta_c * eta_c + p.delta_a * p.delta_a);
  return f;
}

std::vector<LabeledFrequency> labeled(const PredictedFrequencies& f) {
  std::vector<LabeledFrequency> out;
  for (auto [name, freq] : {std::pair{"fast", f.fast},
                            std::pair{"slow_in_phase", f.slow_in_phase},
                            std::pair{"slow_out_phase", f.slow_out_phase}})
    out.push_back({name, freq, PredictedFrequencies::period(freq)});
  return out;
}

}  // namespace blockade
