#pragma once

#include <complex>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace blockade {

using Complex = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;

// Truncated cavity Fock space (0..n_max) tensored with two two-level atoms.
//
// Basis ordering is fixed for the whole library:
//   index = fock * 4 + atom1_bit * 2 + atom2_bit,   bit 0 = |g>, bit 1 = |e>.
// Every operator, superoperator and serialized matrix follows it.
class HilbertSpace {
 public:
  static constexpr int kAtoms = 2;
  static constexpr int kAtomDim = 1 << kAtoms;

  explicit HilbertSpace(int n_max);

  int n_max() const { return n_max_; }
  int dim() const { return (n_max_ + 1) * kAtomDim; }

  int index(int fock, int atom1_bit, int atom2_bit) const;
  int fock_of(int index) const { return index / kAtomDim; }
  // Excitation bit of atom j (1 or 2) in basis state `index`.
  int atom_bit(int index, int j) const;
  // Cavity photons plus atomic excitations of a basis state.
  int excitations(int index) const;

  friend bool operator==(const HilbertSpace&, const HilbertSpace&) = default;

 private:
  int n_max_;
};

HilbertSpace make_space(int n_max);

// Complex dim x dim matrix tied to a HilbertSpace.
class Operator {
 public:
  Operator(const HilbertSpace& space, SparseMatrix entries);

  const HilbertSpace& space() const { return space_; }
  const SparseMatrix& matrix() const { return entries_; }
  DenseMatrix dense() const { return DenseMatrix(entries_); }
  int dim() const { return space_.dim(); }

  Operator adjoint() const;
  Complex trace() const;

  Operator& operator+=(const Operator& rhs);
  Operator& operator-=(const Operator& rhs);
  Operator& operator*=(Complex s);

  friend Operator operator+(Operator lhs, const Operator& rhs) { return lhs += rhs; }
  friend Operator operator-(Operator lhs, const Operator& rhs) { return lhs -= rhs; }
  friend Operator operator*(const Operator& lhs, const Operator& rhs);
  friend Operator operator*(Complex s, Operator op) { return op *= s; }
  friend Operator operator*(Operator op, Complex s) { return op *= s; }

 private:
  HilbertSpace space_;
  SparseMatrix entries_;
};

// Throws InvalidArgument if the two spaces differ.
void require_same_space(const HilbertSpace& a, const HilbertSpace& b);

Operator identity(const HilbertSpace& space);
Operator annihilation(const HilbertSpace& space);
Operator creation(const HilbertSpace& space);
Operator number(const HilbertSpace& space);
// j is the atom index, 1 or 2.
Operator sigma_minus(const HilbertSpace& space, int j);
Operator sigma_plus(const HilbertSpace& space, int j);
// Integer power of an operator; power 0 is the identity.
Operator power(const Operator& op, int exponent);

// Embeds single-factor matrices into the composite space as
// cavity (x) atom1 (x) atom2.
SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b);

enum class StateKind {
  normalized,   // unit trace, a physical state
  conditional,  // unnormalized post-detection state
};

// Hermitian density matrix on a HilbertSpace. Construction checks Hermiticity
// (and unit trace for normalized states); positivity is an explicit query
// because it needs an eigendecomposition.
class DensityMatrix {
 public:
  static constexpr double kHermitianTol = 1e-10;
  static constexpr double kTraceTol = 1e-8;
  static constexpr double kPositivityTol = -1e-8;

  DensityMatrix(const HilbertSpace& space, DenseMatrix entries,
                StateKind kind = StateKind::normalized);

  // Projector onto basis state |index><index|.
  static DensityMatrix basis_projector(const HilbertSpace& space, int index);
  static DensityMatrix maximally_mixed(const HilbertSpace& space);

  const HilbertSpace& space() const { return space_; }
  const DenseMatrix& matrix() const { return entries_; }
  StateKind kind() const { return kind_; }

  double trace() const { return entries_.trace().real(); }
  double min_eigenvalue() const;
  bool is_positive(double tol = kPositivityTol) const;
  // Divides by the trace and marks the state normalized.
  DensityMatrix normalized() const;

 private:
  HilbertSpace space_;
  DenseMatrix entries_;
  StateKind kind_;
};

// max_ij |M_ij - conj(M_ji)|
double hermiticity_error(const DenseMatrix& m);

// tr(A rho)
Complex expectation(const Operator& op, const DensityMatrix& rho);

}  // namespace blockade
