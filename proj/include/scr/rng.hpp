#pragma once

#include <cmath>
#include <cstdint>

namespace scr {

// Counter-based random stream: every consumer derives its own stream from a
// hash of (master seed, indices...), so Monte-Carlo results do not depend on
// execution order or thread count. The generator is SplitMix64, which is
// stateless enough to re-derive anywhere, and the Gaussian transform is a
// plain Box-Muller so that streams are bit-identical across platforms.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) {
    // Rejection sampling keeps the draw exactly uniform.
    const std::uint64_t threshold = n == 0 ? 0 : (0ULL - n) % n;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // Standard normal via Box-Muller.
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_double();
    double u2 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925286766559 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Mixes a master seed with up to three substream indices.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a = 0,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  RandomStream s(master);
  std::uint64_t h = s.next_u64();
  h ^= RandomStream(a + 0x510e527fade682d1ULL).next_u64();
  h = RandomStream(h).next_u64();
  h ^= RandomStream(b + 0x9b05688c2b3e6c1fULL).next_u64();
  h = RandomStream(h).next_u64();
  h ^= RandomStream(c + 0x1f83d9abfb41bd6bULL).next_u64();
  return RandomStream(h).next_u64();
}

}  // namespace scr
