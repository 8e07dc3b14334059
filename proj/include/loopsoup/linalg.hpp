#ifndef LOOPSOUP_LINALG_HPP
#define LOOPSOUP_LINALG_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace loopsoup {

using Index = Eigen::Index;
using Complex = std::complex<double>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using RealMatrix = Matrix<double>;
using ComplexMatrix = Matrix<Complex>;

/// Logarithm of a determinant split into magnitude and phase so that
/// large exponents can be applied without overflow.
struct LogDet {
  double log_abs = 0.0;
  double phase = 0.0;  // radians, not reduced

  Complex value() const { return {log_abs, phase}; }
  Complex determinant() const { return std::exp(value()); }
};

/// Entrywise (Hadamard) product.
template <typename DerivedA, typename DerivedB>
auto hadamard(const Eigen::MatrixBase<DerivedA>& a,
              const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("hadamard: shape mismatch");
  return a.cwiseProduct(b).eval();
}

namespace detail {
inline double arg_of(double x) { return x < 0.0 ? std::numbers::pi : 0.0; }
inline double arg_of(const Complex& z) { return std::arg(z); }
inline double abs_of(double x) { return std::abs(x); }
inline double abs_of(const Complex& z) { return std::abs(z); }
}  // namespace detail

/// log det(M) through partial-pivot LU. The phase is the sum of the pivot
/// arguments plus pi for an odd row permutation. A zero pivot yields
/// log_abs = -inf.
template <typename Derived>
LogDet log_det(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  if (m.rows() != m.cols()) throw std::invalid_argument("log_det: matrix is not square");
  const Eigen::PartialPivLU<Matrix<Scalar>> lu(m.derived());
  const auto& packed = lu.matrixLU();
  LogDet out;
  for (Index i = 0; i < packed.rows(); ++i) {
    const Scalar pivot = packed(i, i);
    out.log_abs += std::log(detail::abs_of(pivot));
    out.phase += detail::arg_of(pivot);
  }
  if (lu.permutationP().determinant() < 0) out.phase += std::numbers::pi;
  return out;
}

template <typename Derived>
auto determinant(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  return Eigen::PartialPivLU<Matrix<Scalar>>(m.derived()).determinant();
}

/// log det(I - M) on the branch of the convergent series
/// -sum_k Tr(M^k)/k, for M with spectral radius below one. The magnitude and
/// phase come from LU; the phase is then shifted by the multiple of 2 pi
/// that brings it onto sum_i Arg(1 - z_i) over the eigenvalues z_i of M.
LogDet log_det_resolvent(const ComplexMatrix& m);
LogDet log_det_resolvent(const RealMatrix& m);

/// Inverse through partial-pivot LU with a residual check on A X = I.
template <typename Derived>
Matrix<typename Derived::Scalar> checked_inverse(const Eigen::MatrixBase<Derived>& a,
                                                 double tolerance = 1e-10) {
  using Scalar = typename Derived::Scalar;
  if (a.rows() != a.cols()) throw std::invalid_argument("inverse: matrix is not square");
  const Eigen::PartialPivLU<Matrix<Scalar>> lu(a.derived());
  Matrix<Scalar> inv = lu.inverse();
  const double residual =
      (a.derived() * inv - Matrix<Scalar>::Identity(a.rows(), a.cols())).cwiseAbs().maxCoeff();
  if (!std::isfinite(residual) || residual > tolerance)
    throw std::runtime_error("inverse: factorization failed (residual " +
                             std::to_string(residual) + ")");
  return inv;
}

/// Elementary symmetric polynomials e_0..e_m of the given values.
Vector<Complex> elementary_symmetric(const Vector<Complex>& values);

/// |det(I + M) - sum_k e_k(eigenvalues of M)|. Test diagnostic for the
/// wedge-power expansion of det(I + M); intended for m <= 6.
double det_expansion_check(const ComplexMatrix& m);

/// Spectral radius estimate by power iteration on |M| started from the
/// all-ones vector. For the nonnegative matrices used here this is an upper
/// estimate of the true radius once converged.
double power_iteration_radius(const RealMatrix& m, int iterations = 200);

}  // namespace loopsoup

#endif  // LOOPSOUP_LINALG_HPP
