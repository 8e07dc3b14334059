#include "loopsoup/loop_measure.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace loopsoup {

RootedLoop::RootedLoop(std::vector<int> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 2) throw std::invalid_argument("rooted loop: length must be >= 2");
}

void RootedLoop::validate(const WeightedGraph& g) const {
  const std::size_t k = vertices_.size();
  for (std::size_t i = 0; i < k; ++i) {
    const int a = vertices_[i];
    const int b = vertices_[(i + 1) % k];
    if (!g.adjacent(a, b))
      throw std::invalid_argument("loop: step " + std::to_string(a) + "->" + std::to_string(b) +
                                  " is not an edge");
  }
}

std::size_t minimal_rotation(std::span<const int> seq) {
  const std::size_t k = seq.size();
  std::size_t best = 0;
  for (std::size_t r = 1; r < k; ++r) {
    for (std::size_t i = 0; i < k; ++i) {
      const int a = seq[(r + i) % k];
      const int b = seq[(best + i) % k];
      if (a != b) {
        if (a < b) best = r;
        break;
      }
    }
  }
  return best;
}

UnrootedLoop::UnrootedLoop(std::span<const int> rooted) {
  const std::size_t k = rooted.size();
  if (k < 2) throw std::invalid_argument("unrooted loop: length must be >= 2");
  const std::size_t start = minimal_rotation(rooted);
  canonical_.resize(k);
  for (std::size_t i = 0; i < k; ++i) canonical_[i] = rooted[(start + i) % k];
  // The smallest shift fixing the word is its primitive period q, and the
  // number of fixing rotations is k / q.
  for (std::size_t q = 1; q <= k; ++q) {
    if (k % q != 0) continue;
    bool fixed = true;
    for (std::size_t i = 0; i < k && fixed; ++i) fixed = canonical_[i] == canonical_[(i + q) % k];
    if (fixed) {
      period_ = static_cast<int>(k / q);
      break;
    }
  }
}

double loop_product(std::span<const int> loop, const TransitionMatrix& p) {
  double prod = 1.0;
  const std::size_t k = loop.size();
  for (std::size_t i = 0; i < k; ++i) prod *= p(loop[i], loop[(i + 1) % k]);
  return prod;
}

double rooted_weight(const RootedLoop& loop, const TransitionMatrix& p) {
  loop.validate(p.graph());
  return loop_product(loop.vertices(), p) / loop.length();
}

double mu_of_unrooted(const UnrootedLoop& loop, const TransitionMatrix& p) {
  RootedLoop(std::vector<int>(loop.vertices().begin(), loop.vertices().end())).validate(p.graph());
  return loop_product(loop.vertices(), p) / loop.period();
}

double length_mass(const TransitionMatrix& p, int k) {
  if (k < 2) throw std::invalid_argument("length_mass: k must be >= 2");
  RealMatrix power = p.matrix();
  for (int i = 1; i < k; ++i) power = power * p.matrix();
  return power.trace() / k;
}

double total_mass(const TransitionMatrix& p) {
  return -log_det(RealMatrix(RealMatrix::Identity(p.size(), p.size()) - p.matrix())).log_abs;
}

Complex log_det_ratio(const TransitionMatrix& p, const OneForm& a, double beta) {
  const LogDet perturbed = log_det_resolvent(perturbed_transition(p, a, beta));
  const LogDet base = log_det_resolvent(p.matrix());
  return perturbed.value() - base.value();
}

Complex exact_charfn(const TransitionMatrix& p, const OneForm& a, double beta, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("exact_charfn: lambda must be > 0");
  if (beta == 0.0) return 1.0;
  return std::exp(-lambda * log_det_ratio(p, a, beta));
}

double clt_covariance(const TransitionMatrix& p, const GreensFunction& g, const OneForm& a,
                      const OneForm& b) {
  const RealMatrix& pm = p.matrix();
  const RealMatrix& gm = g.matrix();
  const RealMatrix pa = hadamard(pm, a.matrix());
  const RealMatrix pb = hadamard(pm, b.matrix());
  const double one_point = (hadamard(pa, b.matrix()) * gm).trace();
  const double two_point = (pa * gm * pb * gm).trace();
  return one_point + two_point;
}

double clt_variance(const TransitionMatrix& p, const GreensFunction& g, const OneForm& a) {
  return clt_covariance(p, g, a, a);
}

double clt_limit_charfn(const TransitionMatrix& p, const GreensFunction& g, const OneForm& a,
                        double s) {
  return std::exp(-0.5 * s * s * clt_variance(p, g, a));
}

double trace_identity_residual(const TransitionMatrix& p, const GreensFunction& g,
                               const OneForm& a, const OneForm& b) {
  if (!p.is_symmetric()) throw std::invalid_argument("trace identity requires a symmetric P");
  const WeightedGraph& graph = p.graph();
  const RealMatrix& gm = g.matrix();
  const int n = graph.vertex_count();
  double lhs = 0.0;
  for (int x0 = 0; x0 < n; ++x0)
    for (int x1 : graph.neighbors(x0)) {
      const double left = p(x0, x1) * a(x0, x1);
      if (left == 0.0) continue;
      for (int x2 = 0; x2 < n; ++x2)
        for (int x3 : graph.neighbors(x2)) {
          const double right = p(x2, x3) * b(x2, x3);
          lhs += left * right * (gm(x0, x3) * gm(x1, x2) - gm(x0, x2) * gm(x1, x3));
        }
    }
  lhs *= 0.5;
  const double rhs =
      (hadamard(p.matrix(), a.matrix()) * gm * hadamard(p.matrix(), b.matrix()) * gm).trace();
  return std::abs(lhs - rhs);
}

double spectral_radius_bound(const TransitionMatrix& p, int iterations, double safety) {
  return safety * power_iteration_radius(p.matrix(), iterations);
}

double tail_bound(Index n, double rho, int k_max) {
  if (!(rho < 1.0)) return std::numeric_limits<double>::infinity();
  double tail = 0.0;
  double term = std::pow(rho, k_max);
  for (int k = k_max + 1;; ++k) {
    term *= rho;
    const double add = term / k;
    tail += add;
    if (add <= 1e-17 * tail || term == 0.0) break;
  }
  return static_cast<double>(n) * tail;
}

double tail_bound(const TransitionMatrix& p, int k_max) {
  return tail_bound(p.size(), spectral_radius_bound(p), k_max);
}

LoopEnumerator::LoopEnumerator(const TransitionMatrix& p, int k_max, std::size_t cap)
    : p_(p), k_max_(k_max), cap_(cap) {
  if (k_max < 2) throw std::invalid_argument("enumerate_loops: k_max must be >= 2");
}

void LoopEnumerator::for_each(const Visitor& visit) const {
  const WeightedGraph& g = p_.graph();
  const int n = g.vertex_count();
  std::size_t explored = 0;
  std::vector<int> walk;
  walk.reserve(static_cast<std::size_t>(k_max_));

  // Depth-first extension of walks rooted at their smallest vertex; only the
  // canonical (minimal) rotation of each closed walk is reported, so every
  // class appears exactly once.
  auto extend = [&](auto&& self, double product) -> void {
    const int root = walk.front();
    const int last = walk.back();
    const int len = static_cast<int>(walk.size());
    for (int next : g.neighbors(last)) {
      if (next < root) continue;
      if (++explored > cap_) throw std::length_error("enumerate_loops: exploration cap exceeded");
      const double step = product * p_(last, next);
      if (next == root && len >= 2) {
        if (minimal_rotation(walk) == 0) {
          const UnrootedLoop loop(walk);
          visit(loop, step / loop.period());
        }
      }
      if (len < k_max_) {
        walk.push_back(next);
        self(self, step);
        walk.pop_back();
      }
    }
  };

  for (int root = 0; root < n; ++root) {
    walk.assign(1, root);
    extend(extend, 1.0);
  }
}

std::vector<WeightedLoop> enumerate_loops(const TransitionMatrix& p, int k_max, std::size_t cap) {
  std::vector<WeightedLoop> out;
  LoopEnumerator(p, k_max, cap).for_each(
      [&](const UnrootedLoop& loop, double w) { out.push_back({loop, w}); });
  return out;
}

}  // namespace loopsoup
