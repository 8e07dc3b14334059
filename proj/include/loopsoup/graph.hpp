#ifndef LOOPSOUP_GRAPH_HPP
#define LOOPSOUP_GRAPH_HPP

#include "loopsoup/linalg.hpp"

#include <span>
#include <utility>
#include <vector>

namespace loopsoup {

struct Edge {
  int u = 0;
  int v = 0;
};

/// Finite connected simple graph with a killing function. Vertex order and
/// per-vertex neighbor order follow insertion order, so every matrix built
/// from the graph is deterministic.
class WeightedGraph {
 public:
  /// Throws std::invalid_argument on self-loops, multi-edges, out of range
  /// endpoints, disconnected graphs, negative killing or killing that is
  /// identically zero.
  WeightedGraph(int vertex_count, std::vector<Edge> edges, std::vector<double> kappa);

  /// width x height rectangular grid with constant killing; vertex (x, y) has
  /// index x + width * y.
  static WeightedGraph grid(int width, int height, double kappa_const);

  int vertex_count() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const int> neighbors(int x) const { return adjacency_[x]; }
  int degree(int x) const { return static_cast<int>(adjacency_[x].size()); }
  double kappa(int x) const { return kappa_[x]; }
  std::span<const double> kappa() const { return kappa_; }
  /// kappa_x + d_x, the inverse of every nonzero entry in row x of P.
  double holding(int x) const { return kappa_[x] + degree(x); }

  bool adjacent(int x, int y) const;
  /// Index into edges() of the undirected edge {x, y}, or -1.
  int edge_index(int x, int y) const;

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<double> kappa_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<std::vector<int>> adjacency_edge_;
};

/// Killed random-walk transition matrix, P_xy = 1/(kappa_x + d_x) on edges.
class TransitionMatrix {
 public:
  explicit TransitionMatrix(WeightedGraph graph);

  const WeightedGraph& graph() const { return graph_; }
  const RealMatrix& matrix() const { return p_; }
  double operator()(int x, int y) const { return p_(x, y); }
  Index size() const { return p_.rows(); }
  bool is_symmetric(double tolerance = 1e-14) const;

 private:
  WeightedGraph graph_;
  RealMatrix p_;
};

TransitionMatrix build_transition(const WeightedGraph& g);

/// G = (I - P)^{-1}.
class GreensFunction {
 public:
  explicit GreensFunction(const TransitionMatrix& p);

  const RealMatrix& matrix() const { return g_; }
  double operator()(int x, int y) const { return g_(x, y); }

 private:
  RealMatrix g_;
};

GreensFunction greens_function(const TransitionMatrix& p);

/// Skew-symmetric edge labelling A_xy = -A_yx, zero off the edge set.
class OneForm {
 public:
  explicit OneForm(const WeightedGraph& graph);
  /// Adopts a dense matrix after checking skew-symmetry and support.
  OneForm(const WeightedGraph& graph, RealMatrix values);

  /// Sets A_xy = value and A_yx = -value. Throws if x, y are not adjacent.
  OneForm& set(int x, int y, double value);
  /// Adds value to A_xy and subtracts it from A_yx.
  OneForm& add(int x, int y, double value);

  double operator()(int x, int y) const { return a_(x, y); }
  const RealMatrix& matrix() const { return a_; }
  Index size() const { return a_.rows(); }
  bool is_zero() const { return a_.isZero(0.0); }
  bool supported(int x, int y) const { return support_(x, y); }

  OneForm& operator+=(const OneForm& other);
  friend OneForm operator+(OneForm a, const OneForm& b) { return a += b; }
  friend OneForm operator*(double c, OneForm a) {
    a.a_ *= c;
    return a;
  }

  /// Sum of A along the closed walk x_0 -> x_1 -> ... -> x_{k-1} -> x_0.
  double integrate(std::span<const int> loop) const;

 private:
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> support_;
  RealMatrix a_;
};

/// P^beta with entries exp(i beta A_xy)/(kappa_x + d_x) on edges.
ComplexMatrix perturbed_transition(const TransitionMatrix& p, const OneForm& a, double beta);

}  // namespace loopsoup

#endif  // LOOPSOUP_GRAPH_HPP
