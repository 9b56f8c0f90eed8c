#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace savsddp {

/// Mixes a seed and a stream tag into a fresh 64-bit seed (splitmix64 finalizer).
/// Sub-streams are derived as stream(seed, tag) throughout the project:
/// scenario sampling uses stream(master, stage), the training loop uses
/// stream(master, iteration), so reordering calls never perturbs another
/// stream's draws.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seeded RNG around std::mt19937_64 with portable distributions.
/// std::uniform_real_distribution is implementation-defined, so uniform draws
/// are mapped from raw 64-bit output directly; sequences are identical on
/// every platform for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform double in [0, 1) with 53-bit resolution.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi].
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n), rejection-sampled to avoid modulo bias.
  std::uint64_t uniform_int(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % n;
  }

  /// Standard exponential via inverse CDF (used for Dirichlet partitions).
  double exponential() { return -std::log(1.0 - uniform01()); }

  /// Independent sub-stream derived from this generator's seed.
  Rng stream(std::uint64_t tag) const { return Rng(mix_seed(seed_, tag)); }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace savsddp
