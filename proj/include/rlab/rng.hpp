#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace rlab {

// Pinned in every report so runs can be reproduced bit-for-bit elsewhere.
// std::mt19937_64 is fully specified by the standard; the distributions are
// implemented here because the std:: ones are not portable across libraries.
inline constexpr std::string_view kRngAlgorithm =
    "mt19937_64 engine; splitmix64 seed derivation; Lemire bounded ints; Marsaglia polar normals";

inline constexpr std::uint64_t splitmix64_mix(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

struct SeedStream {
  std::uint64_t master_seed = 0;
};

/// Per-trial seed. Injective in `index` for a fixed master (odd-step Weyl
/// sequence through a bijective mixer).
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64_mix(splitmix64_mix(master) + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

inline constexpr std::uint64_t derive_seed(const SeedStream& stream, std::uint64_t index) {
  return derive_seed(stream.master_seed, index);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64_mix(seed)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound), unbiased.
  std::uint64_t below(std::uint64_t bound) {
    __uint128_t m = static_cast<__uint128_t>(next()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<__uint128_t>(next()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  template <class It>
  void shuffle(It first, It last) {
    const auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) {
      const auto j = below(i);
      std::iter_swap(first + (i - 1), first + j);
    }
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace rlab
