#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>

namespace lambkit {

/// splitmix64; implementation-defined library distributions are avoided so
/// that seeded runs reproduce bit-for-bit everywhere.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// uniform in [0, bound)
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = ~0ull - (~0ull % bound + 1) % bound;
    for (;;) {
      std::uint64_t v = next();
      if (v <= limit) return v % bound;
    }
  }

  int range(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool chance(double p) { return static_cast<double>(next() >> 11) * 0x1.0p-53 < p; }

  std::uint64_t masked(std::uint64_t mask) { return next() & mask; }

private:
  std::uint64_t state_;
};

inline constexpr std::uint64_t kDefaultSeed = 0x1a3b5c7d;

/// LAMBKIT_SEED overrides the built-in default.
inline std::uint64_t default_seed() {
  if (const char* env = std::getenv("LAMBKIT_SEED")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 0);
    if (end && *end == '\0') return static_cast<std::uint64_t>(v);
  }
  return kDefaultSeed;
}

}  // namespace lambkit
