#include "loopsoup/graph.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <string>

namespace loopsoup {

WeightedGraph::WeightedGraph(int vertex_count, std::vector<Edge> edges, std::vector<double> kappa)
    : n_(vertex_count), edges_(std::move(edges)), kappa_(std::move(kappa)) {
  if (n_ < 1) throw std::invalid_argument("graph: vertex count must be >= 1");
  if (static_cast<int>(kappa_.size()) != n_)
    throw std::invalid_argument("graph: kappa has " + std::to_string(kappa_.size()) +
                                " entries, expected " + std::to_string(n_));
  adjacency_.assign(n_, {});
  adjacency_edge_.assign(n_, {});
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto [u, v] = edges_[i];
    if (u < 0 || v < 0 || u >= n_ || v >= n_)
      throw std::invalid_argument("graph: edge " + std::to_string(i) + " has an endpoint out of range");
    if (u == v) throw std::invalid_argument("graph: self-loop at vertex " + std::to_string(u));
    if (adjacent(u, v))
      throw std::invalid_argument("graph: duplicate edge {" + std::to_string(u) + "," +
                                  std::to_string(v) + "}");
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
    adjacency_edge_[u].push_back(static_cast<int>(i));
    adjacency_edge_[v].push_back(static_cast<int>(i));
  }
  bool any_positive = false;
  for (int x = 0; x < n_; ++x) {
    if (!(kappa_[x] >= 0.0) || !std::isfinite(kappa_[x]))
      throw std::invalid_argument("graph: kappa[" + std::to_string(x) + "] must be finite and >= 0");
    any_positive = any_positive || kappa_[x] > 0.0;
  }
  if (!any_positive) throw std::invalid_argument("graph: killing function is identically zero");

  std::vector<bool> seen(n_, false);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = true;
  int reached = 1;
  while (!frontier.empty()) {
    const int x = frontier.front();
    frontier.pop();
    for (int y : adjacency_[x])
      if (!seen[y]) {
        seen[y] = true;
        ++reached;
        frontier.push(y);
      }
  }
  if (reached != n_) throw std::invalid_argument("graph: not connected");
}

WeightedGraph WeightedGraph::grid(int width, int height, double kappa_const) {
  if (width < 1 || height < 1) throw std::invalid_argument("grid: width and height must be >= 1");
  std::vector<Edge> edges;
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const int id = x + width * y;
      if (x + 1 < width) edges.push_back({id, id + 1});
      if (y + 1 < height) edges.push_back({id, id + width});
    }
  return WeightedGraph(width * height, std::move(edges),
                       std::vector<double>(static_cast<std::size_t>(width * height), kappa_const));
}

bool WeightedGraph::adjacent(int x, int y) const { return edge_index(x, y) >= 0; }

int WeightedGraph::edge_index(int x, int y) const {
  if (x < 0 || x >= n_ || y < 0 || y >= n_) return -1;
  const auto& nbrs = adjacency_[x];
  for (std::size_t i = 0; i < nbrs.size(); ++i)
    if (nbrs[i] == y) return adjacency_edge_[x][i];
  return -1;
}

TransitionMatrix::TransitionMatrix(WeightedGraph graph) : graph_(std::move(graph)) {
  const int n = graph_.vertex_count();
  p_ = RealMatrix::Zero(n, n);
  for (int x = 0; x < n; ++x) {
    const double weight = 1.0 / graph_.holding(x);
    for (int y : graph_.neighbors(x)) p_(x, y) = weight;
  }
}

bool TransitionMatrix::is_symmetric(double tolerance) const {
  return (p_ - p_.transpose()).cwiseAbs().maxCoeff() <= tolerance;
}

TransitionMatrix build_transition(const WeightedGraph& g) { return TransitionMatrix(g); }

GreensFunction::GreensFunction(const TransitionMatrix& p) {
  const Index n = p.size();
  try {
    g_ = checked_inverse(RealMatrix(RealMatrix::Identity(n, n) - p.matrix()), 1e-10);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(std::string("greens_function: I - P is numerically singular; ") +
                             "killing constraint violated (" + e.what() + ")");
  }
}

GreensFunction greens_function(const TransitionMatrix& p) { return GreensFunction(p); }

OneForm::OneForm(const WeightedGraph& graph) {
  const int n = graph.vertex_count();
  support_.setConstant(n, n, false);
  for (const auto& e : graph.edges()) {
    support_(e.u, e.v) = true;
    support_(e.v, e.u) = true;
  }
  a_ = RealMatrix::Zero(n, n);
}

OneForm::OneForm(const WeightedGraph& graph, RealMatrix values) : OneForm(graph) {
  if (values.rows() != a_.rows() || values.cols() != a_.cols())
    throw std::invalid_argument("one-form: dimension mismatch");
  for (Index x = 0; x < values.rows(); ++x)
    for (Index y = 0; y < values.cols(); ++y) {
      if (!support_(x, y) && values(x, y) != 0.0)
        throw std::invalid_argument("one-form: nonzero entry on a non-edge");
      if (values(x, y) != -values(y, x)) throw std::invalid_argument("one-form: not skew-symmetric");
    }
  a_ = std::move(values);
}

OneForm& OneForm::set(int x, int y, double value) {
  if (x < 0 || y < 0 || x >= a_.rows() || y >= a_.rows() || !support_(x, y))
    throw std::invalid_argument("one-form: (" + std::to_string(x) + "," + std::to_string(y) +
                                ") is not an edge");
  a_(x, y) = value;
  a_(y, x) = -value;
  return *this;
}

OneForm& OneForm::add(int x, int y, double value) { return set(x, y, a_(x, y) + value); }

OneForm& OneForm::operator+=(const OneForm& other) {
  if (other.a_.rows() != a_.rows() || other.support_ != support_)
    throw std::invalid_argument("one-form: forms live on different graphs");
  a_ += other.a_;
  return *this;
}

double OneForm::integrate(std::span<const int> loop) const {
  double total = 0.0;
  const std::size_t k = loop.size();
  for (std::size_t i = 0; i < k; ++i) total += a_(loop[i], loop[(i + 1) % k]);
  return total;
}

ComplexMatrix perturbed_transition(const TransitionMatrix& p, const OneForm& a, double beta) {
  if (a.size() != p.size()) throw std::invalid_argument("perturbed_transition: dimension mismatch");
  const RealMatrix& pm = p.matrix();
  ComplexMatrix out = pm.cast<Complex>();
  if (beta == 0.0) return out;
  for (Index x = 0; x < pm.rows(); ++x)
    for (int y : p.graph().neighbors(static_cast<int>(x))) {
      if (!a.supported(static_cast<int>(x), y))
        throw std::invalid_argument("perturbed_transition: one-form is on a different graph");
      out(x, y) = pm(x, y) * std::polar(1.0, beta * a(static_cast<int>(x), y));
    }
  return out;
}

}  // namespace loopsoup
