#include "blockade/hilbert.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "blockade/error.hpp"

namespace blockade {

namespace {

using Triplet = Eigen::Triplet<Complex>;

SparseMatrix sparse_identity(int n) {
  SparseMatrix id(n, n);
  id.setIdentity();
  return id;
}

SparseMatrix fock_lowering(int n_max) {
  std::vector<Triplet> t;
  for (int n = 1; n <= n_max; ++n) t.emplace_back(n - 1, n, std::sqrt(double(n)));
  SparseMatrix a(n_max + 1, n_max + 1);
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

// |g><e| in the (g, e) basis.
SparseMatrix atom_lowering() {
  std::vector<Triplet> t{{0, 1, 1.0}};
  SparseMatrix s(2, 2);
  s.setFromTriplets(t.begin(), t.end());
  return s;
}

}  // namespace

HilbertSpace::HilbertSpace(int n_max) : n_max_(n_max) {
  if (n_max < 1)
    throw InvalidArgument("n_max must be >= 1, got " + std::to_string(n_max));
}

int HilbertSpace::index(int fock, int atom1_bit, int atom2_bit) const {
  if (fock < 0 || fock > n_max_ || (atom1_bit & ~1) || (atom2_bit & ~1))
    throw InvalidArgument("basis label out of range");
  return fock * kAtomDim + atom1_bit * 2 + atom2_bit;
}

int HilbertSpace::atom_bit(int index, int j) const {
  if (j == 1) return (index >> 1) & 1;
  if (j == 2) return index & 1;
  throw InvalidArgument("atom index must be 1 or 2, got " + std::to_string(j));
}

int HilbertSpace::excitations(int index) const {
  return fock_of(index) + atom_bit(index, 1) + atom_bit(index, 2);
}

HilbertSpace make_space(int n_max) { return HilbertSpace(n_max); }

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b) {
  SparseMatrix out = Eigen::kroneckerProduct(a, b);
  out.makeCompressed();
  return out;
}

void require_same_space(const HilbertSpace& a, const HilbertSpace& b) {
  if (!(a == b))
    throw InvalidArgument("operands live on different Hilbert spaces (n_max " +
                          std::to_string(a.n_max()) + " vs " +
                          std::to_string(b.n_max()) + ")");
}

// ---------------------------------------------------------------------------
// Operator

Operator::Operator(const HilbertSpace& space, SparseMatrix entries)
    : space_(space), entries_(std::move(entries)) {
  if (entries_.rows() != space_.dim() || entries_.cols() != space_.dim())
    throw InvalidArgument("operator shape does not match space dimension " +
                          std::to_string(space_.dim()));
  entries_.makeCompressed();
}

Operator Operator::adjoint() const {
  return Operator(space_, SparseMatrix(entries_.adjoint()));
}

Complex Operator::trace() const {
  Complex t = 0.0;
  for (int k = 0; k < entries_.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(entries_, k); it; ++it)
      if (it.row() == it.col()) t += it.value();
  return t;
}

Operator& Operator::operator+=(const Operator& rhs) {
  require_same_space(space_, rhs.space_);
  entries_ += rhs.entries_;
  return *this;
}

Operator& Operator::operator-=(const Operator& rhs) {
  require_same_space(space_, rhs.space_);
  entries_ -= rhs.entries_;
  return *this;
}

Operator& Operator::operator*=(Complex s) {
  entries_ *= s;
  return *this;
}

Operator operator*(const Operator& lhs, const Operator& rhs) {
  require_same_space(lhs.space_, rhs.space_);
  return Operator(lhs.space_, SparseMatrix(lhs.entries_ * rhs.entries_));
}

Operator identity(const HilbertSpace& space) {
  return Operator(space, sparse_identity(space.dim()));
}

Operator annihilation(const HilbertSpace& space) {
  return Operator(space, kron(fock_lowering(space.n_max()),
                              sparse_identity(HilbertSpace::kAtomDim)));
}

Operator creation(const HilbertSpace& space) {
  return annihilation(space).adjoint();
}

Operator number(const HilbertSpace& space) {
  return creation(space) * annihilation(space);
}

Operator sigma_minus(const HilbertSpace& space, int j) {
  const SparseMatrix cavity = sparse_identity(space.n_max() + 1);
  const SparseMatrix id2 = sparse_identity(2);
  switch (j) {
    case 1:
      return Operator(space, kron(cavity, kron(atom_lowering(), id2)));
    case 2:
      return Operator(space, kron(cavity, kron(id2, atom_lowering())));
    default:
      throw InvalidArgument("atom index must be 1 or 2, got " + std::to_string(j));
  }
}

Operator sigma_plus(const HilbertSpace& space, int j) {
  return sigma_minus(space, j).adjoint();
}

Operator power(const Operator& op, int exponent) {
  if (exponent < 0) throw InvalidArgument("negative operator power");
  Operator out = identity(op.space());
  for (int k = 0; k < exponent; ++k) out = out * op;
  return out;
}

// ---------------------------------------------------------------------------
// DensityMatrix

double hermiticity_error(const DenseMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

DensityMatrix::DensityMatrix(const HilbertSpace& space, DenseMatrix entries,
                             StateKind kind)
    : space_(space), entries_(std::move(entries)), kind_(kind) {
  if (entries_.rows() != space_.dim() || entries_.cols() != space_.dim())
    throw InvalidArgument("density matrix shape does not match space dimension " +
                          std::to_string(space_.dim()));
  if (const double herm = hermiticity_error(entries_); !(herm <= kHermitianTol))
    throw InvalidArgument("density matrix is not Hermitian (max deviation " +
                          std::to_string(herm) + ")");
  if (kind_ == StateKind::normalized && !(std::abs(trace() - 1.0) <= kTraceTol))
    throw InvalidArgument("density matrix trace " + std::to_string(trace()) +
                          " is not 1");
}

DensityMatrix DensityMatrix::basis_projector(const HilbertSpace& space, int index) {
  if (index < 0 || index >= space.dim())
    throw InvalidArgument("basis index out of range");
  DenseMatrix m = DenseMatrix::Zero(space.dim(), space.dim());
  m(index, index) = 1.0;
  return DensityMatrix(space, std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(const HilbertSpace& space) {
  const int d = space.dim();
  return DensityMatrix(space, DenseMatrix::Identity(d, d) / double(d));
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(entries_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool DensityMatrix::is_positive(double tol) const { return min_eigenvalue() >= tol; }

DensityMatrix DensityMatrix::normalized() const {
  const double tr = trace();
  if (!(tr > 0.0)) throw InvalidArgument("cannot normalize a state with trace <= 0");
  return DensityMatrix(space_, entries_ / tr, StateKind::normalized);
}

Complex expectation(const Operator& op, const DensityMatrix& rho) {
  require_same_space(op.space(), rho.space());
  // tr(A rho) = sum_ij A_ij rho_ji
  Complex t = 0.0;
  const SparseMatrix& a = op.matrix();
  for (int k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it)
      t += it.value() * rho.matrix()(it.col(), it.row());
  return t;
}

}  // namespace blockade
