#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace leverage {

/// splitmix64 step (Steele, Lea, Flood 2014). Used to expand seeds and to
/// derive independent child streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Derives a child seed from a master seed and up to three path components.
/// Each component is folded through splitmix64, so streams for distinct
/// paths are statistically independent and reproducible on any platform.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t s = master;
  (void)splitmix64(s);
  s ^= a;
  (void)splitmix64(s);
  s ^= b;
  (void)splitmix64(s);
  s ^= c;
  return splitmix64(s);
}

/// xoshiro256** 1.0 (Blackman & Vigna 2018), seeded through splitmix64.
///
/// The generator and all variate transforms below are fixed algorithms with
/// no implementation-defined behavior, so sequences are bit-identical across
/// platforms for a given seed. There is no hidden global state; every
/// consumer owns its Rng. Independent streams are obtained with split() or
/// derive_seed(), never by reusing a seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on [0, 1): top 53 bits scaled by 2^-53.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n). Rejection sampling on the top bits keeps the
  /// distribution exact for any n.
  std::uint64_t uniform_index(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  /// Standard normal via the Box-Muller transform; the cosine and sine
  /// branches are interleaved through a one-deep cache.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    // 1 - u keeps the log argument in (0, 1].
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    cached_ = r * std::sin(theta);
    has_cached_ = true;
    return r * std::cos(theta);
  }

  /// Chi-square with integer dof as a sum of squared standard normals.
  double chi_squared(int dof) {
    if (dof < 1) throw std::invalid_argument("chi_squared: dof must be >= 1");
    double sum = 0.0;
    for (int i = 0; i < dof; ++i) {
      const double z = normal();
      sum += z * z;
    }
    return sum;
  }

  /// Independent child stream number `index`.
  Rng split(std::uint64_t index) const {
    return Rng(derive_seed(s_[0] ^ s_[3], 0x51B7157EA4D5ULL ^ index, index));
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace leverage
