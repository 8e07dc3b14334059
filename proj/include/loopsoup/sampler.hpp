#ifndef LOOPSOUP_SAMPLER_HPP
#define LOOPSOUP_SAMPLER_HPP

#include "loopsoup/loop_measure.hpp"
#include "loopsoup/rng.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace loopsoup {

struct SoupConfig {
  double lambda = 1.0;
  double epsilon = 1e-12;
  int k_cap = 4096;
  std::uint64_t seed = 0;
  int streams = 1;

  /// Throws std::invalid_argument on lambda <= 0, epsilon outside (0, 1),
  /// k_cap < 2 or streams < 1.
  void validate() const;
};

/// Powers P^1..P^K of the transition matrix, with K the first length for
/// which the tail bound drops below epsilon * total_mass (capped at k_cap),
/// and the cumulative length distribution p_k ~ Tr(P^k)/k.
class PowerCache {
 public:
  PowerCache(const TransitionMatrix& p, double epsilon = 1e-12, int k_cap = 4096);

  const TransitionMatrix& transition() const { return *p_; }
  int max_length() const { return static_cast<int>(powers_.size()) - 1; }
  /// P^k for 0 <= k <= max_length(); P^0 = I.
  const RealMatrix& power(int k) const { return powers_.at(static_cast<std::size_t>(k)); }
  double trace(int k) const { return traces_.at(static_cast<std::size_t>(k)); }
  double total_mass() const { return total_mass_; }
  /// P(length <= k) under the untruncated law, for 2 <= k <= max_length().
  double length_cdf(int k) const { return cdf_.at(static_cast<std::size_t>(k)); }
  /// Normalized length probability p_k = Tr(P^k) / (k * total_mass).
  double length_probability(int k) const;

 private:
  const TransitionMatrix* p_;
  std::vector<RealMatrix> powers_;
  std::vector<double> traces_;
  std::vector<double> cdf_;
  double total_mass_ = 0.0;
};

/// Count of loops in a soup: Poisson(lambda * total_mass(P)).
std::uint64_t sample_loop_count(const SoupConfig& cfg, const PowerCache& cache, Rng& rng);

/// Loop length by inverse CDF over p_k. The at most epsilon of mass beyond
/// max_length() is folded onto max_length().
int sample_length(const PowerCache& cache, Rng& rng);

/// Rooted closed walk of length k with probability prod P / Tr(P^k): the
/// root is drawn from the diagonal of P^k and each step from the bridge
/// kernel P_vw (P^{r-1})_{w,root} / (P^r)_{v,root}.
RootedLoop sample_rooted_loop(const PowerCache& cache, int k, Rng& rng);

/// Allocation-free variant writing the walk into `out`.
void sample_rooted_loop_into(const PowerCache& cache, int k, Rng& rng, std::vector<int>& out);

struct LoopSoupSample {
  std::vector<UnrootedLoop> loops;
  std::uint64_t seed = 0;
  int streams = 1;
  std::map<int, std::uint64_t> counts_by_length;

  friend bool operator==(const LoopSoupSample&, const LoopSoupSample&) = default;
};

/// Calls visit(std::span<const int>) for each loop of one soup, as rooted
/// walks. The soup is the superposition of cfg.streams independent soups of
/// intensity lambda / streams, stream s drawing from stream_seed(seed, s).
template <typename Visitor>
void for_each_soup_loop(const SoupConfig& cfg, const PowerCache& cache, Visitor&& visit) {
  std::vector<int> walk;
  SoupConfig part = cfg;
  part.lambda = cfg.lambda / cfg.streams;
  for (int s = 0; s < cfg.streams; ++s) {
    Rng rng(stream_seed(cfg.seed, static_cast<std::uint64_t>(s)));
    const std::uint64_t count = sample_loop_count(part, cache, rng);
    for (std::uint64_t i = 0; i < count; ++i) {
      const int k = sample_length(cache, rng);
      sample_rooted_loop_into(cache, k, rng, walk);
      visit(std::span<const int>(walk));
    }
  }
}

LoopSoupSample sample_soup(const SoupConfig& cfg, const PowerCache& cache);

/// The bound (lambda kappa / 4) (1 + kappa / 4)^{-2(a+b)} on the
/// expected number of loops of the Z^2 soup visiting (-a, 0) and (b, 0).
double z2_truncation_bound(double kappa, double lambda, int a, int b);

/// The (2n+1) x (2n+1) window [-n, n]^2 of Z^2 with constant killing; vertex
/// (x, y) has index (x + n) + (2n + 1)(y + n).
WeightedGraph grid_window(int n, double kappa_const);
int grid_window_vertex(int n, int x, int y);

}  // namespace loopsoup

#endif  // LOOPSOUP_SAMPLER_HPP
