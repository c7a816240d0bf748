#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>

namespace rsd {

/// Seedable, portable pseudo-random generator: xoshiro256++ seeded through
/// splitmix64. The exact algorithm is documented in the README so that
/// generated instances reproduce across platforms; std:: distributions are
/// deliberately avoided because their output is implementation-defined.
class Rng {
public:
  explicit Rng(std::uint64_t seed) {
    // splitmix64 expansion of the seed into the 256-bit state
    std::uint64_t x = seed;
    for (auto& word : state_) {
      x += 0x9e3779b97f4a7c15ULL;
      std::uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      word = z ^ (z >> 31);
    }
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1), 53 significant bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal pair via Box-Muller; u1 is shifted into (0, 1] so the
  /// logarithm is always finite.
  std::array<double, 2> gaussian_pair() {
    const double u1 =
        static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0,1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;  // 2*pi*u2
    return {r * std::cos(a), r * std::sin(a)};
  }

  /// Fills `out` with i.i.d. standard normals, drawing ceil(n/2) pairs and
  /// discarding the unused half when n is odd (keeps the stream aligned).
  void gaussian_fill(std::span<double> out) {
    std::size_t i = 0;
    while (i + 2 <= out.size()) {
      const auto p = gaussian_pair();
      out[i] = p[0];
      out[i + 1] = p[1];
      i += 2;
    }
    if (i < out.size()) out[i] = gaussian_pair()[0];
  }

private:
  static constexpr std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_;
};

}  // namespace rsd
