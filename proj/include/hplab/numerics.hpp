#pragma once

// Dense Hermitian linear algebra shared by every other module.
//
// Everything here is templated on the scalar type so the same code serves
// real symmetric and complex Hermitian matrices. Post-conditions are checked
// on every call; a violated residual bound is reported as NumericalError
// rather than returned silently.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "hplab/errors.hpp"

namespace hplab {

using Complex = std::complex<double>;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using RealVector = Eigen::Matrix<typename Eigen::NumTraits<Scalar>::Real, Eigen::Dynamic, 1>;

/// Hermitian matrix stored with entries(i,j) == conj(entries(j,i)) exactly.
///
/// Construction symmetrizes the input as (A + A*)/2 after checking that the
/// skew part is below `tol * (1 + ||A||_F)`.
template <typename Scalar>
class BasicHermMatrix {
 public:
  using MatrixType = DenseMatrix<Scalar>;
  using RealScalar = typename Eigen::NumTraits<Scalar>::Real;

  template <typename Derived>
  explicit BasicHermMatrix(const Eigen::MatrixBase<Derived>& a, RealScalar tol = 1e-12) {
    if (a.rows() != a.cols() || a.rows() < 1) {
      throw InputError("Hermitian matrix must be square with dim >= 1");
    }
    const MatrixType m = a;
    const RealScalar skew = (m - m.adjoint()).norm();
    if (skew > tol * (1 + m.norm())) {
      std::ostringstream msg;
      msg << "matrix is not Hermitian (skew part " << skew << ")";
      throw InputError(msg.str());
    }
    m_ = (m + m.adjoint()) / RealScalar(2);
    // Diagonal entries of a Hermitian matrix are real.
    for (Eigen::Index i = 0; i < m_.rows(); ++i) {
      m_(i, i) = Scalar(Eigen::numext::real(m_(i, i)));
    }
  }

  Eigen::Index dim() const { return m_.rows(); }
  const MatrixType& matrix() const { return m_; }
  Scalar operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

 private:
  MatrixType m_;
};

using HermMatrix = BasicHermMatrix<Complex>;

template <typename Scalar>
struct SpectralDecomp {
  RealVector<Scalar> eigenvalues;  // ascending
  DenseMatrix<Scalar> eigenvectors;

  DenseMatrix<Scalar> reconstruct() const {
    return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.adjoint();
  }
};

template <typename Scalar>
SpectralDecomp<Scalar> herm_eig(const BasicHermMatrix<Scalar>& a) {
  using Real = typename BasicHermMatrix<Scalar>::RealScalar;
  Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw NumericalError("Hermitian eigensolver did not converge");
  }
  SpectralDecomp<Scalar> out{solver.eigenvalues(), solver.eigenvectors()};

  const Real scale = 1 + a.matrix().norm();
  const Real recon = (out.reconstruct() - a.matrix()).norm();
  if (recon > Real(1e-10) * scale) {
    throw NumericalError("eigendecomposition reconstruction error too large", double(recon));
  }
  const Eigen::Index n = a.dim();
  const Real ortho =
      (out.eigenvectors.adjoint() * out.eigenvectors - DenseMatrix<Scalar>::Identity(n, n)).norm();
  if (ortho > Real(1e-10)) {
    throw NumericalError("eigenvectors are not orthonormal", double(ortho));
  }
  return out;
}

/// Applies a real function to the spectrum: Q f(Lambda) Q*.
template <typename Scalar, typename Fn>
DenseMatrix<Scalar> spectral_apply(const SpectralDecomp<Scalar>& d, Fn&& fn) {
  RealVector<Scalar> fv = d.eigenvalues.unaryExpr(fn);
  return d.eigenvectors * fv.asDiagonal() * d.eigenvectors.adjoint();
}

/// Negative eigenvalues down to -1e-10 * lambda_max are treated as round-off
/// and clamped to zero; anything more negative is an error.
template <typename Scalar>
void check_psd(const SpectralDecomp<Scalar>& d) {
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  const Real lo = d.eigenvalues.minCoeff();
  const Real hi = std::max(d.eigenvalues.maxCoeff(), Real(0));
  if (lo < -Real(1e-10) * hi || (hi == 0 && lo < 0)) {
    std::ostringstream msg;
    msg << "matrix is indefinite: eigenvalue " << lo << " (largest " << hi << ")";
    throw NumericalError(msg.str(), double(lo));
  }
}

template <typename Scalar>
BasicHermMatrix<Scalar> sqrt_psd(const BasicHermMatrix<Scalar>& a) {
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  const auto d = herm_eig(a);
  check_psd(d);
  const DenseMatrix<Scalar> r =
      spectral_apply(d, [](Real x) { return x > 0 ? std::sqrt(x) : Real(0); });
  const Real err = (r * r - a.matrix()).norm();
  if (err > Real(1e-8) * (1 + a.matrix().norm())) {
    throw NumericalError("square root reconstruction error too large", double(err));
  }
  return BasicHermMatrix<Scalar>(r, Real(1e-8));
}

template <typename Scalar>
struct SvdResult {
  DenseMatrix<Scalar> U;
  RealVector<Scalar> singular_values;  // descending, nonnegative
  DenseMatrix<Scalar> V;
};

template <typename Derived>
SvdResult<typename Derived::Scalar> svd(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  const DenseMatrix<Scalar> m = a;
  Eigen::JacobiSVD<DenseMatrix<Scalar>> solver(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdResult<Scalar> out{solver.matrixU(), solver.singularValues(), solver.matrixV()};
  const Real err =
      (out.U * out.singular_values.asDiagonal() * out.V.adjoint() - m).norm();
  if (!(err <= Real(1e-10) * (1 + m.norm()))) {
    throw NumericalError("SVD reconstruction error too large", double(err));
  }
  return out;
}

/// Largest singular value; 0 for an empty matrix.
template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real operator_norm(
    const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if (a.size() == 0) return 0;
  const DenseMatrix<Scalar> m = a;
  Eigen::JacobiSVD<DenseMatrix<Scalar>> solver(m);
  const auto s = solver.singularValues()(0);
  if (!std::isfinite(double(s))) {
    throw NumericalError("operator norm is not finite");
  }
  return s;
}

template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real nuclear_norm(
    const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if (a.size() == 0) return 0;
  const DenseMatrix<Scalar> m = a;
  return Eigen::JacobiSVD<DenseMatrix<Scalar>>(m).singularValues().sum();
}

}  // namespace hplab
