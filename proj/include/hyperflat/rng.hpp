#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hyperflat::rng {

/// Identifies one reproducible random stream. Distinct (master_seed,
/// stream_index) pairs yield independent streams; identical pairs yield
/// bit-identical draws.
struct SeedContract {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;
};

/// splitmix64 finalizer (Steele/Lea/Flood mixing constants).
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Seed-derivation function for replicate streams:
///   seed = mix64(mix64(master_seed) ^ (stream_index * PHI64 + 1)).
inline std::uint64_t derive_stream_seed(std::uint64_t master_seed,
                                        std::uint64_t stream_index) {
  const std::uint64_t phi = 0x9E3779B97F4A7C15ull;
  return mix64(mix64(master_seed) ^ (stream_index * phi + 1ull));
}

/// Deterministic generator with hand-rolled uniform and normal variates so
/// that streams reproduce bit-identically across standard library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  explicit Rng(SeedContract sc)
      : eng_(derive_stream_seed(sc.master_seed, sc.stream_index)) {}

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  /// Standard normal via Marsaglia's polar method (caches the spare).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace hyperflat::rng
