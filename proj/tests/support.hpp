#pragma once

#include <random>

#include <Eigen/Dense>

#include "blockade/hilbert.hpp"
#include "blockade/model.hpp"

namespace testing_support {

using blockade::DenseMatrix;

// Random physical density matrix: A A^dag / tr, A with Gaussian entries.
inline DenseMatrix random_state(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal;
  DenseMatrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = {normal(rng), normal(rng)};
  DenseMatrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

inline blockade::SystemParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  blockade::SystemParams p;
  p.g = 5.0 * u(rng);
  p.phi_z = 2.0 * 3.141592653589793 * u(rng);
  p.eta = 3.0 * u(rng);
  p.delta_a = 10.0 * (u(rng) - 0.5);
  p.delta_cav = 10.0 * (u(rng) - 0.5);
  p.gamma = 2.0 * u(rng);
  return p;
}

// Dense single-mode and two-level building blocks for independent oracles.
inline Eigen::MatrixXd fock_lowering(int n_max) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_max + 1, n_max + 1);
  for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

inline Eigen::MatrixXd kron_dense(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Cavity (x) atom1 (x) atom2 with |g> = 0, |e> = 1.
struct DenseOps {
  Eigen::MatrixXd a, s1, s2;
};

inline DenseOps dense_ops(int n_max) {
  Eigen::MatrixXd lower(2, 2);
  lower << 0, 1, 0, 0;
  const Eigen::MatrixXd id2 = Eigen::MatrixXd::Identity(2, 2);
  const Eigen::MatrixXd idf = Eigen::MatrixXd::Identity(n_max + 1, n_max + 1);
  return {kron_dense(fock_lowering(n_max), kron_dense(id2, id2)),
          kron_dense(idf, kron_dense(lower, id2)), kron_dense(idf, kron_dense(id2, lower))};
}

inline DenseMatrix dense_hamiltonian(int n_max, const blockade::SystemParams& p) {
  const DenseOps o = dense_ops(n_max);
  const double g2 = p.g * std::cos(p.phi_z);
  const Eigen::MatrixXd h =
      p.delta_a * (o.s1.transpose() * o.s1 + o.s2.transpose() * o.s2) +
      p.delta_cav * o.a.transpose() * o.a +
      p.eta * (o.s1 + o.s1.transpose() + o.s2 + o.s2.transpose()) +
      p.g * (o.a * o.s1.transpose() + o.a.transpose() * o.s1) +
      g2 * (o.a * o.s2.transpose() + o.a.transpose() * o.s2);
  return h.cast<blockade::Complex>();
}

// Lindblad generator applied directly to a dense matrix.
inline DenseMatrix dense_lindblad(const DenseMatrix& h, int n_max, const blockade::SystemParams& p,
                                  const DenseMatrix& rho) {
  const DenseOps o = dense_ops(n_max);
  const blockade::Complex i(0.0, 1.0);
  DenseMatrix out = -i * (h * rho - rho * h);
  auto dissipate = [&](const Eigen::MatrixXd& c_real, double rate) {
    const DenseMatrix c = c_real.cast<blockade::Complex>();
    const DenseMatrix cdc = c.adjoint() * c;
    out += rate * (2.0 * c * rho * c.adjoint() - cdc * rho - rho * cdc);
  };
  dissipate(o.a, p.kappa);
  dissipate(o.s1, p.gamma);
  dissipate(o.s2, p.gamma);
  return out;
}

}  // namespace testing_support
