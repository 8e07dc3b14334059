#ifndef LOOPSOUP_LOOP_MEASURE_HPP
#define LOOPSOUP_LOOP_MEASURE_HPP

#include "loopsoup/graph.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace loopsoup {

/// Closed walk x_0 -> ... -> x_{k-1} -> x_0 with root x_0, k >= 2.
class RootedLoop {
 public:
  RootedLoop() = default;
  explicit RootedLoop(std::vector<int> vertices);

  std::span<const int> vertices() const { return vertices_; }
  int length() const { return static_cast<int>(vertices_.size()); }
  int root() const { return vertices_.front(); }

  /// Throws std::invalid_argument unless every cyclic step is an edge of g.
  void validate(const WeightedGraph& g) const;

 private:
  std::vector<int> vertices_;
};

/// Rotation class of a rooted loop, stored as its lexicographically minimal
/// rotation. period() is the number of rotations that fix the sequence, so
/// the class holds length()/period() distinct rooted loops.
class UnrootedLoop {
 public:
  UnrootedLoop() = default;
  explicit UnrootedLoop(std::span<const int> rooted);

  std::span<const int> vertices() const { return canonical_; }
  int length() const { return static_cast<int>(canonical_.size()); }
  int period() const { return period_; }

  friend bool operator==(const UnrootedLoop&, const UnrootedLoop&) = default;
  friend auto operator<=>(const UnrootedLoop& a, const UnrootedLoop& b) {
    return a.canonical_ <=> b.canonical_;
  }

 private:
  std::vector<int> canonical_;
  int period_ = 1;
};

/// Index of the lexicographically least rotation of seq (first one on ties).
std::size_t minimal_rotation(std::span<const int> seq);

/// Product of P along the cyclic walk.
double loop_product(std::span<const int> loop, const TransitionMatrix& p);

/// w_r = (1/k) * prod P.
double rooted_weight(const RootedLoop& loop, const TransitionMatrix& p);
/// mu(class) = sum of w_r over its distinct rooted representatives = prod P / period.
double mu_of_unrooted(const UnrootedLoop& loop, const TransitionMatrix& p);

/// Tr(P^k)/k, the mu-mass of loops of length k.
double length_mass(const TransitionMatrix& p, int k);
/// -log det(I - P).
double total_mass(const TransitionMatrix& p);

/// E[exp(i beta sum_{loops} int A)] = (det(I - P^beta)/det(I - P))^{-lambda}.
Complex exact_charfn(const TransitionMatrix& p, const OneForm& a, double beta, double lambda);
/// lambda * log(det(I - P^beta)/det(I - P)), i.e. -log exact_charfn, on the
/// series branch.
Complex log_det_ratio(const TransitionMatrix& p, const OneForm& a, double beta);

/// Bilinear form Tr((P.A.B) G) + Tr((P.A) G (P.B) G), where "." is the
/// Hadamard product. Equals the mu-integral of (int A)(int B).
double clt_covariance(const TransitionMatrix& p, const GreensFunction& g, const OneForm& a,
                      const OneForm& b);
/// sigma^2(A) = clt_covariance(A, A), the limiting variance of the loop-soup
/// integral of A scaled by 1/sqrt(lambda).
double clt_variance(const TransitionMatrix& p, const GreensFunction& g, const OneForm& a);
/// exp(-s^2 sigma^2(A) / 2).
double clt_limit_charfn(const TransitionMatrix& p, const GreensFunction& g, const OneForm& a,
                        double s);

/// |(1/2) sum P P A B [G G - G G] - Tr((P.A) G (P.B) G)| for symmetric P.
/// Throws std::invalid_argument when P is not symmetric.
double trace_identity_residual(const TransitionMatrix& p, const GreensFunction& g,
                               const OneForm& a, const OneForm& b);

/// Upper bound on the spectral radius of P from power iteration, inflated by
/// a safety factor.
double spectral_radius_bound(const TransitionMatrix& p, int iterations = 200, double safety = 1.01);

/// sum_{k > k_max} n rho^k / k, the truncation bound on the mu-mass of loops
/// longer than k_max.
double tail_bound(const TransitionMatrix& p, int k_max);
double tail_bound(Index n, double rho, int k_max);

/// Exhaustive enumeration of unrooted loops up to a length cap.
class LoopEnumerator {
 public:
  using Visitor = std::function<void(const UnrootedLoop&, double weight)>;

  /// cap bounds the number of walk extensions explored; exceeding it throws
  /// std::length_error.
  LoopEnumerator(const TransitionMatrix& p, int k_max, std::size_t cap = 500'000'000);

  /// Calls visit once per unrooted loop of length 2..k_max with its mu-weight.
  void for_each(const Visitor& visit) const;

  int k_max() const { return k_max_; }

 private:
  const TransitionMatrix& p_;
  int k_max_;
  std::size_t cap_;
};

struct WeightedLoop {
  UnrootedLoop loop;
  double weight = 0.0;
};

std::vector<WeightedLoop> enumerate_loops(const TransitionMatrix& p, int k_max,
                                          std::size_t cap = 500'000'000);

}  // namespace loopsoup

#endif  // LOOPSOUP_LOOP_MEASURE_HPP
