#ifndef LOOPSOUP_HOLONOMY_HPP
#define LOOPSOUP_HOLONOMY_HPP

#include "loopsoup/loop_measure.hpp"

#include <span>
#include <vector>

namespace loopsoup {

/// Unitary connection U_xy = exp(i A_xy) given by Hermitian d x d generators
/// on oriented edges, with A_yx = -A_xy. Unset edges carry the zero
/// generator.
class Connection {
 public:
  Connection(const WeightedGraph& graph, int fiber_dim);

  /// Sets A_uv = a and A_vu = -a. The generator is validated as Hermitian to
  /// `tolerance` and then symmetrized as (a + a^H)/2; a larger defect throws
  /// std::invalid_argument.
  Connection& set(int u, int v, const ComplexMatrix& a, double tolerance = 1e-12);

  int fiber_dim() const { return d_; }
  int vertex_count() const { return n_; }
  /// Generator of the oriented edge u -> v (zero matrix when unset).
  const ComplexMatrix& generator(int u, int v) const;
  bool adjacent(int u, int v) const { return slot(u, v) >= 0; }

  /// Conjugates every generator by a fixed unitary: A -> V A V^H.
  Connection conjugated(const ComplexMatrix& v) const;

 private:
  int slot(int u, int v) const;

  int n_;
  int d_;
  std::vector<std::vector<int>> neighbors_;
  std::vector<std::vector<ComplexMatrix>> generators_;  // aligned with neighbors_
  ComplexMatrix zero_;
};

/// exp(i beta A) for Hermitian A through its eigendecomposition.
ComplexMatrix matrix_exp_hermitian(const ComplexMatrix& a, double beta, double tolerance = 1e-12);

/// (1/d) Tr(U_{x0 x1} ... U_{x_{k-1} x0}) with U = exp(i beta A).
Complex holonomy_trace(std::span<const int> loop, const Connection& conn, double beta);

/// nd x nd block matrix with blocks P_xy exp(i beta A_xy), i.e.
/// (P (x) J_d) . U_beta, flat index x * d + alpha.
ComplexMatrix holonomy_block_matrix(const TransitionMatrix& p, const Connection& conn, double beta);

/// (det(I_nd - (P (x) J_d) . U_beta) / det(I_nd - P (x) I_d))^{-lambda}.
/// Equals exp(lambda sum_gamma mu(gamma) (Tr_gamma U - d)), which is the
/// expectation of prod_gamma (1/d) Tr_gamma U over a soup of intensity
/// lambda * d. Requires symmetric P.
Complex exact_holonomy_expectation(const TransitionMatrix& p, const Connection& conn, double beta, double lambda);

/// E[prod_gamma (1/d) Tr_gamma U] over a soup of intensity lambda, i.e.
/// exact_holonomy_expectation at intensity lambda / d.
Complex holonomy_soup_expectation(const TransitionMatrix& p, const Connection& conn, double beta, double lambda);

/// S1 = sum_{x,y} P_xy G_yx Tr(A_xy^2) and S2 = Tr(M (G (x) I) M (G (x) I))
/// with M the block matrix of P_xy A_xy.
struct HolonomyQuadratic {
  double one_point = 0.0;
  double two_point = 0.0;
  double total() const { return one_point + two_point; }
};
HolonomyQuadratic holonomy_quadratic(const TransitionMatrix& p, const GreensFunction& g, const Connection& conn);

/// exp(-(S1 + S2)/2): the large-lambda limit of
/// exact_holonomy_expectation(beta = 1/sqrt(lambda)). Requires symmetric P.
double holonomy_limit(const TransitionMatrix& p, const GreensFunction& g, const Connection& conn);

}  // namespace loopsoup

#endif  // LOOPSOUP_HOLONOMY_HPP
