#ifndef LOOPSOUP_RNG_HPP
#define LOOPSOUP_RNG_HPP

#include <cstdint>
#include <random>

namespace loopsoup {

/// SplitMix64 finalizer; used to derive independent sub-stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of sub-stream `index` under `master`. A pure function of its
/// arguments, so work can be split across threads in any way.
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index);

/// Portable generator: the engine is fully specified by the standard and the
/// conversions to doubles are done here rather than by <random>
/// distributions, whose output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform on (0, 1).
  double uniform_open() {
    double u;
    do u = uniform();
    while (u == 0.0);
    return u;
  }
  /// Uniform integer on [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

/// Poisson(mean) by sequential inversion for mean < 30 and by the PTRS
/// transformed-rejection method of Hormann otherwise. Exact in both regimes.
std::uint64_t sample_poisson(double mean, Rng& rng);

}  // namespace loopsoup

#endif  // LOOPSOUP_RNG_HPP
