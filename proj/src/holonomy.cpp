#include "loopsoup/holonomy.hpp"

#include <Eigen/Eigenvalues>

#include <stdexcept>
#include <string>

namespace loopsoup {

Connection::Connection(const WeightedGraph& graph, int fiber_dim)
    : n_(graph.vertex_count()), d_(fiber_dim) {
  if (fiber_dim < 1) throw std::invalid_argument("connection: fiber dimension must be >= 1");
  zero_ = ComplexMatrix::Zero(d_, d_);
  neighbors_.resize(static_cast<std::size_t>(n_));
  generators_.resize(static_cast<std::size_t>(n_));
  for (int x = 0; x < n_; ++x) {
    const auto nbrs = graph.neighbors(x);
    neighbors_[static_cast<std::size_t>(x)].assign(nbrs.begin(), nbrs.end());
    generators_[static_cast<std::size_t>(x)].assign(nbrs.size(), zero_);
  }
}

int Connection::slot(int u, int v) const {
  if (u < 0 || u >= n_) return -1;
  const auto& nbrs = neighbors_[static_cast<std::size_t>(u)];
  for (std::size_t i = 0; i < nbrs.size(); ++i)
    if (nbrs[i] == v) return static_cast<int>(i);
  return -1;
}

Connection& Connection::set(int u, int v, const ComplexMatrix& a, double tolerance) {
  if (a.rows() != d_ || a.cols() != d_)
    throw std::invalid_argument("connection: generator must be " + std::to_string(d_) + "x" + std::to_string(d_));
  const int su = slot(u, v);
  const int sv = slot(v, u);
  if (su < 0 || sv < 0)
    throw std::invalid_argument("connection: (" + std::to_string(u) + "," + std::to_string(v) + ") is not an edge");
  const double defect = (a - a.adjoint()).cwiseAbs().maxCoeff();
  if (defect > tolerance)
    throw std::invalid_argument("connection: generator on (" + std::to_string(u) + "," + std::to_string(v) +
                                ") is not Hermitian (defect " + std::to_string(defect) + ")");
  const ComplexMatrix hermitian = 0.5 * (a + a.adjoint());
  generators_[static_cast<std::size_t>(u)][static_cast<std::size_t>(su)] = hermitian;
  generators_[static_cast<std::size_t>(v)][static_cast<std::size_t>(sv)] = -hermitian;
  return *this;
}

const ComplexMatrix& Connection::generator(int u, int v) const {
  const int s = slot(u, v);
  if (s < 0) throw std::invalid_argument("connection: (" + std::to_string(u) + "," + std::to_string(v) + ") is not an edge");
  return generators_[static_cast<std::size_t>(u)][static_cast<std::size_t>(s)];
}

Connection Connection::conjugated(const ComplexMatrix& v) const {
  Connection out = *this;
  for (auto& row : out.generators_)
    for (auto& a : row) a = v * a * v.adjoint();
  return out;
}

ComplexMatrix matrix_exp_hermitian(const ComplexMatrix& a, double beta, double tolerance) {
  if (a.rows() != a.cols()) throw std::invalid_argument("matrix_exp_hermitian: matrix is not square");
  if ((a - a.adjoint()).cwiseAbs().maxCoeff() > tolerance)
    throw std::invalid_argument("matrix_exp_hermitian: matrix is not Hermitian");
  const Index d = a.rows();
  if (beta == 0.0 || a.isZero(0.0)) return ComplexMatrix::Identity(d, d);
  const Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (a + a.adjoint()));
  if (solver.info() != Eigen::Success) throw std::runtime_error("matrix_exp_hermitian: eigensolver failed");
  Vector<Complex> phases(d);
  for (Index i = 0; i < d; ++i) phases(i) = std::polar(1.0, beta * solver.eigenvalues()(i));
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

Complex holonomy_trace(std::span<const int> loop, const Connection& conn, double beta) {
  const int d = conn.fiber_dim();
  ComplexMatrix product = ComplexMatrix::Identity(d, d);
  const std::size_t k = loop.size();
  for (std::size_t i = 0; i < k; ++i)
    product = product * matrix_exp_hermitian(conn.generator(loop[i], loop[(i + 1) % k]), beta);
  return product.trace() / static_cast<double>(d);
}

ComplexMatrix holonomy_block_matrix(const TransitionMatrix& p, const Connection& conn, double beta) {
  const int n = static_cast<int>(p.size());
  if (conn.vertex_count() != n) throw std::invalid_argument("holonomy: connection and P differ in size");
  const int d = conn.fiber_dim();
  ComplexMatrix block = ComplexMatrix::Zero(n * d, n * d);
  for (int x = 0; x < n; ++x)
    for (int y : p.graph().neighbors(x))
      block.block(x * d, y * d, d, d) = p(x, y) * matrix_exp_hermitian(conn.generator(x, y), beta);
  return block;
}

namespace {

void require_symmetric(const TransitionMatrix& p) {
  if (!p.is_symmetric()) throw std::invalid_argument("holonomy: transition matrix must be symmetric");
}

}  // namespace

Complex exact_holonomy_expectation(const TransitionMatrix& p, const Connection& conn, double beta, double lambda) {
  require_symmetric(p);
  if (!(lambda > 0.0)) throw std::invalid_argument("holonomy: lambda must be > 0");
  const int d = conn.fiber_dim();
  const LogDet numerator = log_det_resolvent(holonomy_block_matrix(p, conn, beta));
  // det(I_nd - P (x) I_d) = det(I - P)^d.
  const LogDet base = log_det_resolvent(p.matrix());
  return std::exp(-lambda * (numerator.value() - static_cast<double>(d) * base.value()));
}

Complex holonomy_soup_expectation(const TransitionMatrix& p, const Connection& conn, double beta, double lambda) {
  return exact_holonomy_expectation(p, conn, beta, lambda / conn.fiber_dim());
}

HolonomyQuadratic holonomy_quadratic(const TransitionMatrix& p, const GreensFunction& g, const Connection& conn) {
  const int n = static_cast<int>(p.size());
  const int d = conn.fiber_dim();
  HolonomyQuadratic q;
  ComplexMatrix m = ComplexMatrix::Zero(n * d, n * d);
  for (int x = 0; x < n; ++x)
    for (int y : p.graph().neighbors(x)) {
      const ComplexMatrix& a = conn.generator(x, y);
      q.one_point += p(x, y) * g(y, x) * (a * a).trace().real();
      m.block(x * d, y * d, d, d) = p(x, y) * a;
    }
  ComplexMatrix gd = ComplexMatrix::Zero(n * d, n * d);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (g(x, y) != 0.0) gd.block(x * d, y * d, d, d) = g(x, y) * ComplexMatrix::Identity(d, d);
  q.two_point = (m * gd * m * gd).trace().real();
  return q;
}

double holonomy_limit(const TransitionMatrix& p, const GreensFunction& g, const Connection& conn) {
  require_symmetric(p);
  return std::exp(-0.5 * holonomy_quadratic(p, g, conn).total());
}

}  // namespace loopsoup
