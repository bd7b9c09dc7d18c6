#pragma once

// Counter-keyed pseudo-random streams. Every stream is a std::mt19937_64
// seeded from splitmix64 applied to (seed, key...), so a row's randomness
// depends only on its identity and never on scheduling.

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace qgt::detail {

inline constexpr const char* rng_algorithm = "mt19937_64 seeded by splitmix64(seed, row-key)";

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class KeyedRng {
public:
  KeyedRng(std::uint64_t seed, std::initializer_list<std::uint64_t> key) {
    std::uint64_t h = splitmix64(seed);
    for (auto k : key) h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
    engine_.seed(h);
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits; independent of the standard
  /// library's distribution implementations.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform on [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Lemire-style rejection keeps the draw unbiased.
    const std::uint64_t limit = (~std::uint64_t{0}) - (~std::uint64_t{0}) % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  int sign() { return (engine_() >> 63) ? 1 : -1; }

  /// Uniform in the closed unit disc (rejection from the square).
  std::complex<double> unit_disc() {
    while (true) {
      const double x = uniform(-1.0, 1.0);
      const double y = uniform(-1.0, 1.0);
      if (x * x + y * y <= 1.0) return {x, y};
    }
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace qgt::detail
