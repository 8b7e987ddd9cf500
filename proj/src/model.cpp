#include "blockade/model.hpp"

#include <cmath>
#include <string>

#include "blockade/error.hpp"

namespace blockade {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw InvalidArgument(std::string(name) + " must be finite");
}

void require_nonnegative(double v, const char* name) {
  require_finite(v, name);
  if (v < 0.0)
    throw InvalidArgument(std::string(name) + " must be >= 0, got " + std::to_string(v));
}

// A rho B  ->  (B^T (x) A) vec(rho)
SparseMatrix sandwich(const SparseMatrix& left, const SparseMatrix& right) {
  return kron(SparseMatrix(right.transpose()), left);
}

}  // namespace

double SystemParams::g2() const { return g * std::cos(phi_z); }

void SystemParams::validate() const {
  require_nonnegative(g, "g");
  require_nonnegative(eta, "eta");
  require_nonnegative(gamma, "gamma");
  require_finite(phi_z, "phi_z");
  require_finite(delta_a, "delta_a");
  require_finite(delta_cav, "delta_cav");
  if (kappa != 1.0)
    throw InvalidArgument("kappa is the unit of all rates and must be 1, got " +
                          std::to_string(kappa));
}

SystemParams SystemParams::with_detuning(double delta) const {
  SystemParams p = *this;
  p.delta_a = delta;
  p.delta_cav = delta;
  return p;
}

double two_photon_resonance(double g) { return -std::sqrt(6.0) * g / 2.0; }

Operator build_hamiltonian(const HilbertSpace& space, const SystemParams& p) {
  p.validate();
  const Operator a = annihilation(space);
  const Operator ad = creation(space);
  const Operator sm1 = sigma_minus(space, 1);
  const Operator sm2 = sigma_minus(space, 2);
  const Operator sp1 = sm1.adjoint();
  const Operator sp2 = sm2.adjoint();

  Operator h = p.delta_a * (sp1 * sm1 + sp2 * sm2);
  h += p.delta_cav * (ad * a);
  h += p.eta * (sp1 + sm1 + sp2 + sm2);
  h += p.g1() * (a * sp1 + ad * sm1);
  h += p.g2() * (a * sp2 + ad * sm2);
  return h;
}

// ---------------------------------------------------------------------------

Liouvillian::Liouvillian(Operator hamiltonian, const SystemParams& params)
    : hamiltonian_(std::move(hamiltonian)), params_(params) {
  params_.validate();
  const HilbertSpace& space = hamiltonian_.space();
  const int d = space.dim();
  if (hermiticity_error(hamiltonian_.dense()) > 1e-12)
    throw InvalidArgument("Hamiltonian is not Hermitian");

  const Complex minus_i(0.0, -1.0);
  jumps_.push_back({annihilation(space).matrix(), creation(space).matrix(), params_.kappa});
  for (int j = 1; j <= 2; ++j) {
    const Operator s = sigma_minus(space, j);
    jumps_.push_back({s.matrix(), s.adjoint().matrix(), params_.gamma});
  }

  effective_ = minus_i * hamiltonian_.matrix();
  for (const Jump& c : jumps_) effective_ -= c.rate * SparseMatrix(c.op_dag * c.op);
  effective_.makeCompressed();

  SparseMatrix id(d, d);
  id.setIdentity();
  const SparseMatrix effective_dag = effective_.adjoint();
  // K rho + rho K^dag
  super_ = sandwich(effective_, id) + sandwich(id, effective_dag);
  for (const Jump& c : jumps_) {
    if (c.rate == 0.0) continue;
    super_ += (2.0 * c.rate) * sandwich(c.op, c.op_dag);
  }
  super_.prune(Complex(0.0));
  super_.makeCompressed();

  const Eigen::SparseMatrix<Complex, Eigen::RowMajor> by_row = super_;
  upper_.start.push_back(0);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i <= j; ++i) {
      const int row = j * d + i;
      upper_.target.push_back(row);
      upper_.mirror.push_back(i * d + j);
      for (Eigen::SparseMatrix<Complex, Eigen::RowMajor>::InnerIterator it(by_row, row); it;
           ++it) {
        upper_.column.push_back(int(it.col()));
        upper_.re.push_back(it.value().real());
        upper_.im.push_back(it.value().imag());
      }
      upper_.start.push_back(int(upper_.column.size()));
    }
  }
}

DenseMatrix Liouvillian::apply(const DenseMatrix& rho) const {
  if (rho.rows() != dim() || rho.cols() != dim())
    throw InvalidArgument("matrix shape does not match Liouvillian space");
  DenseMatrix out = effective_ * rho;
  out += rho * effective_.adjoint();
  for (const Jump& c : jumps_) {
    if (c.rate == 0.0) continue;
    DenseMatrix left = c.op * rho;
    out += (2.0 * c.rate) * (left * c.op_dag);
  }
  return out;
}

void Liouvillian::apply_hermitian(const Eigen::VectorXcd& vec_rho,
                                  Eigen::VectorXcd& out) const {
  out.resize(vec_rho.size());
  // std::complex<double> is layout-compatible with double[2].
  const double* x = reinterpret_cast<const double*>(vec_rho.data());
  double* y = reinterpret_cast<double*>(out.data());
  const std::size_t rows = upper_.target.size();
  for (std::size_t r = 0; r < rows; ++r) {
    double sr = 0.0, si = 0.0;
    for (int k = upper_.start[r]; k < upper_.start[r + 1]; ++k) {
      const double* xc = x + 2 * upper_.column[k];
      sr += upper_.re[k] * xc[0] - upper_.im[k] * xc[1];
      si += upper_.re[k] * xc[1] + upper_.im[k] * xc[0];
    }
    const int t = upper_.target[r];
    const int m = upper_.mirror[r];
    if (t == m) {
      y[2 * t] = sr;
      y[2 * t + 1] = 0.0;
    } else {
      y[2 * t] = sr;
      y[2 * t + 1] = si;
      y[2 * m] = sr;
      y[2 * m + 1] = -si;
    }
  }
}

double Liouvillian::spectral_radius_bound() const {
  Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(super_.rows());
  for (int k = 0; k < super_.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(super_, k); it; ++it)
      row_sums(it.row()) += std::abs(it.value());
  return row_sums.maxCoeff();
}

Liouvillian build_liouvillian(const Operator& hamiltonian, const SystemParams& p) {
  return Liouvillian(hamiltonian, p);
}

Eigen::VectorXcd vectorize(const DenseMatrix& m) {
  return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

DenseMatrix unvectorize(const Eigen::VectorXcd& v, int dim) {
  if (v.size() != Eigen::Index(dim) * dim)
    throw InvalidArgument("vector length does not match dim^2");
  return Eigen::Map<const DenseMatrix>(v.data(), dim, dim);
}

}  // namespace blockade
