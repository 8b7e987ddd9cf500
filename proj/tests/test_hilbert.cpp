#include <doctest.h>

#include <random>

#include "blockade/error.hpp"
#include "blockade/hilbert.hpp"
#include "support.hpp"

using namespace blockade;
using testing_support::dense_ops;

TEST_CASE("basis layout") {
  const HilbertSpace s(3);
  CHECK(s.dim() == 16);
  CHECK(s.index(2, 1, 0) == 10);
  CHECK(s.fock_of(10) == 2);
  CHECK(s.atom_bit(10, 1) == 1);
  CHECK(s.atom_bit(10, 2) == 0);
  CHECK(s.excitations(s.index(2, 1, 1)) == 4);
  CHECK_THROWS_AS(HilbertSpace(0), InvalidArgument);
}

TEST_CASE("operators match dense tensor products") {
  for (int n_max : {1, 2, 5}) {
    const HilbertSpace s(n_max);
    const auto o = dense_ops(n_max);
    CHECK((annihilation(s).dense() - o.a.cast<Complex>()).norm() < 1e-14);
    CHECK((sigma_minus(s, 1).dense() - o.s1.cast<Complex>()).norm() < 1e-14);
    CHECK((sigma_minus(s, 2).dense() - o.s2.cast<Complex>()).norm() < 1e-14);
    CHECK((sigma_plus(s, 2).dense() - o.s2.transpose().cast<Complex>()).norm() < 1e-14);
    CHECK((creation(s).dense() - annihilation(s).dense().adjoint()).norm() < 1e-14);
    CHECK((number(s).dense() - (o.a.transpose() * o.a).cast<Complex>()).norm() < 1e-12);
  }
}

TEST_CASE("commutator [a, a^dag] is identity below the truncation edge") {
  const HilbertSpace s(4);
  const Operator a = annihilation(s);
  const DenseMatrix c = (a * a.adjoint() - a.adjoint() * a).dense();
  for (int i = 0; i < s.dim(); ++i) {
    const double expected = s.fock_of(i) == s.n_max() ? -s.n_max() : 1.0;
    CHECK(c(i, i).real() == doctest::Approx(expected));
  }
  CHECK((c - DenseMatrix(c.diagonal().asDiagonal())).norm() < 1e-14);
}

TEST_CASE("power and kron") {
  const HilbertSpace s(4);
  const Operator a = annihilation(s);
  CHECK((power(a, 3).dense() - (a * a * a).dense()).norm() < 1e-12);
  CHECK((power(a, 0).dense() - identity(s).dense()).norm() < 1e-14);

  SparseMatrix x(2, 2), y(3, 3);
  x.insert(0, 1) = Complex(1.0, 2.0);
  x.insert(1, 0) = 3.0;
  y.insert(2, 0) = 5.0;
  y.insert(1, 1) = Complex(0.0, -1.0);
  const DenseMatrix k(kron(x, y));
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      CHECK(std::abs(k(i, j) - DenseMatrix(x)(i / 3, j / 3) * DenseMatrix(y)(i % 3, j % 3)) <
            1e-15);
}

TEST_CASE("operators from different truncations do not mix") {
  const Operator a = annihilation(HilbertSpace(2));
  const Operator b = annihilation(HilbertSpace(3));
  CHECK_THROWS_AS(a * b, InvalidArgument);
  CHECK_THROWS_AS(a + b, InvalidArgument);
  CHECK_NOTHROW(a * annihilation(HilbertSpace(2)));
}

TEST_CASE("density matrix validation") {
  const HilbertSpace s(2);
  DenseMatrix m = DenseMatrix::Zero(s.dim(), s.dim());
  m(0, 0) = 1.0;
  CHECK_NOTHROW(DensityMatrix(s, m));
  m(0, 1) = 0.5;
  CHECK_THROWS_AS(DensityMatrix(s, m), InvalidArgument);  // not Hermitian
  m(0, 1) = 0.0;
  m(0, 0) = 0.5;
  CHECK_THROWS_AS(DensityMatrix(s, m), InvalidArgument);  // trace
  CHECK_NOTHROW(DensityMatrix(s, m, StateKind::conditional));
  CHECK_THROWS_AS(DensityMatrix(s, DenseMatrix::Identity(3, 3)), InvalidArgument);

  const DensityMatrix mixed = DensityMatrix::maximally_mixed(s);
  CHECK(mixed.trace() == doctest::Approx(1.0));
  CHECK(mixed.min_eigenvalue() == doctest::Approx(1.0 / s.dim()));
  CHECK(DensityMatrix::basis_projector(s, 5).matrix()(5, 5).real() == 1.0);
  CHECK(DensityMatrix(s, m, StateKind::conditional).normalized().trace() ==
        doctest::Approx(1.0));
}

TEST_CASE("random states are positive and expectation is tr(A rho)") {
  std::mt19937_64 rng(7);
  const HilbertSpace s(3);
  const Operator n = number(s);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix rho(s, testing_support::random_state(rng, s.dim()));
    CHECK(rho.is_positive());
    const Complex direct = (n.dense() * rho.matrix()).trace();
    CHECK(std::abs(expectation(n, rho) - direct) < 1e-12);
    CHECK(std::abs(expectation(n, rho).imag()) < 1e-12);
  }
  DenseMatrix bad = DenseMatrix::Zero(s.dim(), s.dim());
  bad(0, 0) = 1.5;
  bad(1, 1) = -0.5;
  CHECK_FALSE(DensityMatrix(s, bad).is_positive());
}
