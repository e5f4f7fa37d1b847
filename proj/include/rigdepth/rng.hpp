#pragma once

#include <cmath>
#include <cstdint>

namespace rigdepth {

// splitmix64: tiny, high-quality 64-bit mixer.  Used both as a sequential
// generator state update and as a stateless coordinate hash so that every
// random quantity in the project is reproducible from an explicit seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Stateless hash of a seed plus up to three integer coordinates.  Feeding the
// previous hash back in as the seed chains the lanes together.
inline std::uint64_t hash_coords(std::uint64_t seed, std::int64_t a,
                                 std::int64_t b = 0, std::int64_t c = 0) {
  std::uint64_t h = splitmix64(seed ^ 0x5bf03635d4bf5cd1ull);
  h = splitmix64(h ^ static_cast<std::uint64_t>(a));
  h = splitmix64(h ^ static_cast<std::uint64_t>(b));
  h = splitmix64(h ^ static_cast<std::uint64_t>(c));
  return h;
}

// Map 64 random bits to a double in [0, 1) using the top 53 bits.
inline double bits_to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Small deterministic generator.  Avoids <random> distributions on purpose:
// their outputs are implementation-defined, and byte-identical reruns are a
// hard requirement here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_bits() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  // uniform in [0, 1)
  double uniform01() { return bits_to_unit(next_bits()); }

  // uniform in [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // standard normal via Box-Muller (uses one pair of uniforms per two draws)
  double gauss() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);  // log(0) guard
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace rigdepth
