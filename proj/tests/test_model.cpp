#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "blockade/error.hpp"
#include "blockade/model.hpp"
#include "blockade/solvers.hpp"
#include "support.hpp"

using namespace blockade;
using namespace testing_support;

TEST_CASE("hamiltonian matches dense construction") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const SystemParams p = random_params(rng);
    const HilbertSpace s(3);
    const Operator h = build_hamiltonian(s, p);
    CHECK((h.dense() - dense_hamiltonian(3, p)).norm() < 1e-12);
    CHECK(hermiticity_error(h.dense()) < 1e-14);
  }
}

TEST_CASE("out-of-phase couplings") {
  SystemParams p;
  p.g = 15.0;
  p.phi_z = std::numbers::pi;
  CHECK(p.g1() == 15.0);
  CHECK(p.g2() == doctest::Approx(-15.0));
  p.phi_z = 0.0;
  CHECK(p.g2() == 15.0);
  CHECK(two_photon_resonance(15.0) == doctest::Approx(-std::sqrt(6.0) * 15.0 / 2.0));
}

TEST_CASE("parameter validation") {
  SystemParams p;
  p.kappa = 2.0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p.kappa = 1.0;
  p.gamma = -1.0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p.gamma = 1.0;
  p.delta_a = std::nan("");
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
}

TEST_CASE("superoperator matches the dense Lindblad form") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const SystemParams p = random_params(rng);
    const int n_max = 2;
    const HilbertSpace s(n_max);
    const Liouvillian L = build_liouvillian(build_hamiltonian(s, p), p);
    const DenseMatrix h = dense_hamiltonian(n_max, p);
    const DenseMatrix rho = random_state(rng, s.dim());
    const DenseMatrix expected = dense_lindblad(h, n_max, p, rho);
    const DenseMatrix via_matrix = unvectorize(L.matrix() * vectorize(rho), s.dim());
    CHECK((via_matrix - expected).norm() < 1e-10 * (1.0 + expected.norm()));
    CHECK((L.apply(rho) - expected).norm() < 1e-10 * (1.0 + expected.norm()));
    Eigen::VectorXcd out(s.dim() * s.dim());
    L.apply_hermitian(vectorize(rho), out);
    CHECK((unvectorize(out, s.dim()) - expected).norm() < 1e-10 * (1.0 + expected.norm()));
  }
}

TEST_CASE("generator annihilates the trace and preserves Hermiticity") {
  std::mt19937_64 rng(101);
  const HilbertSpace s(4);
  for (int trial = 0; trial < 100; ++trial) {
    const SystemParams p = random_params(rng);
    const Liouvillian L = build_liouvillian(build_hamiltonian(s, p), p);
    const DenseMatrix rho = random_state(rng, s.dim());
    const DenseMatrix drho = L.apply(rho);
    const double scale = 1.0 + drho.norm();
    CHECK(std::abs(drho.trace()) < 1e-12 * scale);
    CHECK(hermiticity_error(drho) < 1e-12 * scale);
  }
}

TEST_CASE("vectorization is column stacking") {
  DenseMatrix m(2, 2);
  m << 1.0, 2.0, 3.0, 4.0;
  const Eigen::VectorXcd v = vectorize(m);
  CHECK(v(1).real() == 3.0);
  CHECK(v(2).real() == 2.0);
  CHECK(unvectorize(v, 2) == m);
}

TEST_CASE("decay convention: populations decay as exp(-2 rate t)") {
  SystemParams p;  // g = eta = 0, kappa = gamma = 1
  const HilbertSpace s(3);
  const Liouvillian L = build_liouvillian(build_hamiltonian(s, p), p);
  PropagationSpec spec;
  spec.t_max = 2.0;
  spec.dt_out = 0.1;
  spec.method = Integrator::adaptive;

  SUBCASE("cavity") {
    const DensityMatrix rho0 = DensityMatrix::basis_projector(s, s.index(1, 0, 0));
    const Operator n = number(s);
    propagate(L, rho0, spec, [&](double t, const DensityMatrix& rho) {
      CHECK(expectation(n, rho).real() == doctest::Approx(std::exp(-2.0 * t)).epsilon(1e-8));
    });
  }
  SUBCASE("atom") {
    const DensityMatrix rho0 = DensityMatrix::basis_projector(s, s.index(0, 1, 0));
    const Operator pe = sigma_plus(s, 1) * sigma_minus(s, 1);
    propagate(L, rho0, spec, [&](double t, const DensityMatrix& rho) {
      CHECK(expectation(pe, rho).real() == doctest::Approx(std::exp(-2.0 * t)).epsilon(1e-8));
    });
  }
}

TEST_CASE("spectral radius bound dominates the generator norm") {
  std::mt19937_64 rng(5);
  const HilbertSpace s(2);
  for (int trial = 0; trial < 5; ++trial) {
    const SystemParams p = random_params(rng);
    const Liouvillian L = build_liouvillian(build_hamiltonian(s, p), p);
    const Eigen::ComplexEigenSolver<DenseMatrix> es(DenseMatrix(L.matrix()));
    CHECK(es.eigenvalues().cwiseAbs().maxCoeff() <= L.spectral_radius_bound() * (1 + 1e-12));
  }
}
