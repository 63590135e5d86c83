#pragma once

#include <cmath>
#include <cstdint>

namespace dimreader {

/// Seedable, splittable random generator (xoshiro256** seeded through
/// SplitMix64). Substreams are derived from (seed, stream-id) so
/// concurrent consumers draw from independent, reproducible sequences
/// regardless of scheduling. Distribution transforms are hand-rolled
/// because the standard library's are implementation-defined and would
/// break the byte-reproducibility contract across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  /// Independent substream identified by (seed, stream).
  static Rng substream(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t sm = seed;
    std::uint64_t a = splitmix64(sm);
    sm = stream ^ 0x9e3779b97f4a7c15ull;
    std::uint64_t b = splitmix64(sm);
    return Rng(a ^ (b * 0xbf58476d1ce4e5b9ull));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; consumes two uniforms per call so
  /// the stream layout is stable.
  double gaussian() {
    double u1 = uniform();
    double u2 = uniform();
    while (u1 == 0.0) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.2831853071795864769 * u2);
  }

  bool coin() { return (next_u64() >> 63) != 0; }

  int uniform_int(int n) {
    // Modulo bias is irrelevant at 64 bits for any n this library uses.
    return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n));
  }

 private:
  static std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

}  // namespace dimreader
