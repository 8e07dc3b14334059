#include "loopsoup/sampler.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace loopsoup {

void SoupConfig::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("soup: lambda must be > 0");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("soup: epsilon must lie in (0, 1)");
  if (k_cap < 2) throw std::invalid_argument("soup: k_cap must be >= 2");
  if (streams < 1) throw std::invalid_argument("soup: streams must be >= 1");
}

PowerCache::PowerCache(const TransitionMatrix& p, double epsilon, int k_cap) : p_(&p) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("power cache: epsilon must lie in (0, 1)");
  if (k_cap < 2) throw std::invalid_argument("power cache: k_cap must be >= 2");
  total_mass_ = loopsoup::total_mass(p);
  const double rho = spectral_radius_bound(p);
  const Index n = p.size();

  powers_.push_back(RealMatrix::Identity(n, n));
  powers_.push_back(p.matrix());
  traces_ = {static_cast<double>(n), p.matrix().trace()};
  cdf_ = {0.0, 0.0};
  double cumulative = 0.0;
  for (int k = 2; k <= k_cap; ++k) {
    powers_.push_back(powers_.back() * p.matrix());
    traces_.push_back(powers_.back().trace());
    cumulative += traces_.back() / k;
    cdf_.push_back(std::min(1.0, cumulative / total_mass_));
    if (tail_bound(n, rho, k) <= epsilon * total_mass_) break;
  }
}

double PowerCache::length_probability(int k) const {
  if (k < 2 || k > max_length()) return 0.0;
  return traces_[static_cast<std::size_t>(k)] / (k * total_mass_);
}

std::uint64_t sample_loop_count(const SoupConfig& cfg, const PowerCache& cache, Rng& rng) {
  cfg.validate();
  return sample_poisson(cfg.lambda * cache.total_mass(), rng);
}

int sample_length(const PowerCache& cache, Rng& rng) {
  const double u = rng.uniform();
  const int last = cache.max_length();
  int lo = 2;
  int hi = last;
  // Smallest k with cdf(k) > u; draws in the truncated tail map to `last`.
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (cache.length_cdf(mid) > u)
      hi = mid;
    else
      lo = mid + 1;
  }
  while (lo > 2 && cache.trace(lo) <= 0.0) --lo;  // odd lengths on bipartite graphs
  return lo;
}

void sample_rooted_loop_into(const PowerCache& cache, int k, Rng& rng, std::vector<int>& out) {
  if (k < 2 || k > cache.max_length())
    throw std::invalid_argument("sample_rooted_loop: length " + std::to_string(k) + " outside [2, " +
                                std::to_string(cache.max_length()) + "]");
  const RealMatrix& pk = cache.power(k);
  const WeightedGraph& g = cache.transition().graph();
  const int n = g.vertex_count();
  if (!(pk.trace() > 0.0))
    throw std::invalid_argument("sample_rooted_loop: no closed walks of length " + std::to_string(k));

  double target = rng.uniform() * pk.trace();
  int root = n - 1;
  for (int x = 0; x < n; ++x) {
    target -= pk(x, x);
    if (target < 0.0) {
      root = x;
      break;
    }
  }
  while (pk(root, root) == 0.0) --root;  // guard against round-off past the end

  out.resize(static_cast<std::size_t>(k));
  out[0] = root;
  const TransitionMatrix& p = cache.transition();
  int v = root;
  double weights[64];
  std::vector<double> heap_weights;
  for (int step = 1; step < k; ++step) {
    const int remaining = k - step;  // steps left after this one
    const RealMatrix& rest = cache.power(remaining);
    const auto nbrs = g.neighbors(v);
    double* w = weights;
    if (nbrs.size() > 64) {
      heap_weights.resize(nbrs.size());
      w = heap_weights.data();
    }
    double total = 0.0;
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      w[i] = p(v, nbrs[i]) * rest(nbrs[i], root);
      total += w[i];
    }
    double pick = rng.uniform() * total;
    std::size_t chosen = nbrs.size() - 1;
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      pick -= w[i];
      if (pick < 0.0) {
        chosen = i;
        break;
      }
    }
    while (w[chosen] == 0.0) --chosen;
    v = nbrs[chosen];
    out[static_cast<std::size_t>(step)] = v;
  }
}

RootedLoop sample_rooted_loop(const PowerCache& cache, int k, Rng& rng) {
  std::vector<int> walk;
  sample_rooted_loop_into(cache, k, rng, walk);
  return RootedLoop(std::move(walk));
}

LoopSoupSample sample_soup(const SoupConfig& cfg, const PowerCache& cache) {
  cfg.validate();
  LoopSoupSample sample;
  sample.seed = cfg.seed;
  sample.streams = cfg.streams;
  for_each_soup_loop(cfg, cache, [&](std::span<const int> walk) {
    sample.loops.emplace_back(walk);
    ++sample.counts_by_length[static_cast<int>(walk.size())];
  });
  return sample;
}

double z2_truncation_bound(double kappa, double lambda, int a, int b) {
  if (!(kappa > 0.0)) throw std::invalid_argument("z2_truncation_bound: kappa must be > 0");
  if (!(lambda > 0.0)) throw std::invalid_argument("z2_truncation_bound: lambda must be > 0");
  if (a < 1 || b < 1) throw std::invalid_argument("z2_truncation_bound: a and b must be >= 1");
  return lambda * kappa / 4.0 * std::pow(1.0 + kappa / 4.0, -2.0 * (a + b));
}

WeightedGraph grid_window(int n, double kappa_const) {
  if (n < 1) throw std::invalid_argument("grid_window: n must be >= 1");
  if (!(kappa_const > 0.0)) throw std::invalid_argument("grid_window: kappa must be > 0");
  return WeightedGraph::grid(2 * n + 1, 2 * n + 1, kappa_const);
}

int grid_window_vertex(int n, int x, int y) {
  if (std::abs(x) > n || std::abs(y) > n) throw std::out_of_range("grid_window_vertex: outside window");
  return (x + n) + (2 * n + 1) * (y + n);
}

}  // namespace loopsoup
