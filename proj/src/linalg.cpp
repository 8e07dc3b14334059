#include "loopsoup/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>

namespace loopsoup {

namespace {

LogDet snap_to_series_branch(LogDet lu, const Vector<Complex>& eigenvalues) {
  double reference = 0.0;
  for (const Complex& z : eigenvalues) reference += std::arg(Complex(1.0, 0.0) - z);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  lu.phase += two_pi * std::round((reference - lu.phase) / two_pi);
  return lu;
}

}  // namespace

LogDet log_det_resolvent(const ComplexMatrix& m) {
  const Index n = m.rows();
  const ComplexMatrix shifted = ComplexMatrix::Identity(n, n) - m;
  const Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("log_det_resolvent: eigenvalue solver failed");
  return snap_to_series_branch(log_det(shifted), solver.eigenvalues());
}

LogDet log_det_resolvent(const RealMatrix& m) {
  // Eigenvalues of a real matrix come in conjugate pairs, so the series
  // branch of a real I - M with positive determinant has phase zero.
  const Index n = m.rows();
  LogDet out = log_det(RealMatrix(RealMatrix::Identity(n, n) - m));
  const Eigen::EigenSolver<RealMatrix> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("log_det_resolvent: eigenvalue solver failed");
  return snap_to_series_branch(out, solver.eigenvalues());
}

Vector<Complex> elementary_symmetric(const Vector<Complex>& values) {
  const Index m = values.size();
  Vector<Complex> e = Vector<Complex>::Zero(m + 1);
  e(0) = 1.0;
  for (Index i = 0; i < m; ++i)
    for (Index k = i + 1; k >= 1; --k) e(k) += e(k - 1) * values(i);
  return e;
}

double det_expansion_check(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("det_expansion_check: matrix is not square");
  const Index n = m.rows();
  if (n == 0) return 0.0;
  const Complex det = determinant(ComplexMatrix(ComplexMatrix::Identity(n, n) + m));
  const Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, false);
  return std::abs(det - elementary_symmetric(solver.eigenvalues()).sum());
}

double power_iteration_radius(const RealMatrix& m, int iterations) {
  const RealMatrix a = m.cwiseAbs();
  Vector<double> x = Vector<double>::Ones(a.rows());
  double bound = 0.0;
  for (int it = 0; it < iterations; ++it) {
    const Vector<double> y = a * x;
    // Collatz-Wielandt: max_i (Ax)_i / x_i bounds the spectral radius from
    // above for any positive x.
    bound = 0.0;
    for (Index i = 0; i < x.size(); ++i) bound = std::max(bound, y(i) / x(i));
    // Averaging with the previous iterate damps the period-two oscillation
    // of bipartite graphs and keeps x strictly positive.
    x = 0.5 * (x + y / y.maxCoeff());
  }
  return bound;
}

}  // namespace loopsoup
